import unittest
import os
import sys

# Add the parent directory to the path to import quarterplane
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))


class TestBasicFunctionality(unittest.TestCase):
    """Basic tests that should work in any environment"""

    def test_import_quarterplane(self):
        """Test that we can import the main module"""
        try:
            import quarterplane

            self.assertTrue(hasattr(quarterplane, "__version__"))
        except ImportError as e:
            self.skipTest(f"Quarterplane not importable: {e}")

    def test_import_cli(self):
        """Test that we can import the CLI module"""
        try:
            from quarterplane import cli

            self.assertTrue(hasattr(cli, "main"))
        except ImportError as e:
            self.skipTest(f"CLI not importable: {e}")

    def test_import_config(self):
        """Test that we can import the config module"""
        try:
            from quarterplane.core import config

            self.assertTrue(hasattr(config, "QuarterplaneConfig"))
        except ImportError as e:
            self.skipTest(f"Config not importable: {e}")

    def test_import_reductions(self):
        """Test that both compilers are exported"""
        try:
            from quarterplane import reductions

            self.assertTrue(hasattr(reductions, "UwReduction"))
            self.assertTrue(hasattr(reductions, "SuwReduction"))
        except ImportError as e:
            self.skipTest(f"Reductions not importable: {e}")

    def test_import_templates(self):
        """Test that we can import the machine suite"""
        try:
            from quarterplane.templates import machine_suite

            self.assertTrue(hasattr(machine_suite, "MachineSuite"))
        except ImportError as e:
            self.skipTest(f"Templates not importable: {e}")


if __name__ == "__main__":
    unittest.main()
