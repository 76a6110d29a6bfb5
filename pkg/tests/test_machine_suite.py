import unittest
import tempfile
import os
import sys

# Add the parent directory to the path to import quarterplane
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

try:
    from quarterplane.core.turing import load_machine
    from quarterplane.templates.machine_suite import MachineSuite
except ImportError:
    # Skip tests if dependencies not available
    import pytest

    pytest.skip("quarterplane dependencies not available", allow_module_level=True)


class TestMachineSuite(unittest.TestCase):
    def setUp(self):
        self.suite = MachineSuite()
        self.temp_dir = tempfile.mkdtemp()

    def test_get_available_machines(self):
        """Test getting available machines"""
        machines = self.suite.available()
        self.assertIsInstance(machines, dict)
        self.assertEqual(set(machines), {"clean", "dirty", "right", "negclean", "negdirty"})

    def test_machine_structure(self):
        """Test sample entry structure"""
        for name, info in self.suite.available().items():
            self.assertIsInstance(info["description"], str)
            self.assertIsInstance(info["uw_accept"], bool)
            self.assertIsInstance(info["suw_accept"], bool)
            # UW acceptance implies SUW acceptance on the samples
            if info["uw_accept"]:
                self.assertTrue(info["suw_accept"], name)

    def test_samples_parse(self):
        """Every sample is a total machine named after its entry"""
        for name in self.suite.names():
            machine = self.suite.get(name)
            self.assertEqual(machine.name, name)
            self.assertEqual(machine.blank, "_")
            self.assertEqual(machine.halt, "qs")

    def test_export(self):
        """Exported files load back as the same machines"""
        written = self.suite.export(os.path.join(self.temp_dir, "machines"))
        self.assertEqual(len(written), len(self.suite.names()))
        for path in written:
            machine = load_machine(path)
            self.assertEqual(dict(machine.delta), dict(self.suite.get(machine.name).delta))

    def test_random_machine_is_seeded(self):
        """Equal seeds give equal machines"""
        first = self.suite.random_machine(42)
        second = self.suite.random_machine(42)
        self.assertEqual(dict(first.delta), dict(second.delta))
        self.assertEqual(first.name, "random42")

    def test_random_machine_bounds(self):
        """Random machines respect the symbol and state limits"""
        for seed in range(30):
            machine = self.suite.random_machine(seed, max_symbols=2, max_states=3)
            self.assertEqual(len(machine.alphabet), 2)
            self.assertLessEqual(len(machine.states), 3)
            self.assertEqual(len(machine.delta), len(machine.alphabet) * (len(machine.states) - 1))

    def test_random_word(self):
        """Random words avoid the blank"""
        machine = self.suite.random_machine(5)
        for seed in range(20):
            word = self.suite.random_word(machine, seed, max_length=4)
            self.assertLessEqual(len(word), 4)
            self.assertNotIn(machine.blank, word)

    def test_invalid_machine(self):
        """Test getting an unknown machine"""
        with self.assertRaises(ValueError):
            self.suite.get("invalid-machine")

    def tearDown(self):
        import shutil

        shutil.rmtree(self.temp_dir)


if __name__ == "__main__":
    unittest.main()
