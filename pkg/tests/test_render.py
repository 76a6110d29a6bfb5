import unittest
import tempfile
import os
import sys

# Add the parent directory to the path to import quarterplane
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

try:
    import numpy as np

    from quarterplane.core.dynsys import constant_system, develop, xor_system
    from quarterplane.core.errors import QuarterplaneError
    from quarterplane.core.render import (
        BLACK,
        MAGENTA,
        WHITE,
        RenderPalette,
        development_grid,
        ppm_bytes,
        render_ppm,
    )
    from quarterplane.reductions.uw import compile_uw
    from quarterplane.templates.machine_suite import MachineSuite
except ImportError:
    # Skip tests if dependencies not available
    import pytest

    pytest.skip("quarterplane dependencies not available", allow_module_level=True)


class TestPalette(unittest.TestCase):
    def test_reserved_colours(self):
        """zero is white, one is black, Bottom is magenta"""
        system, _ = compile_uw(MachineSuite().get("clean"), ())
        palette = RenderPalette.for_system(system)
        self.assertEqual(palette[system.zero], WHITE)
        self.assertEqual(palette[system.one], BLACK)
        self.assertEqual(palette[system.bottom], MAGENTA)
        self.assertEqual(palette.colors.shape, (system.size, 3))

    def test_palette_is_read_only(self):
        """Colours cannot be changed after construction"""
        palette = RenderPalette.for_system(xor_system())
        with self.assertRaises(ValueError):
            palette.colors[0] = BLACK


class TestGrid(unittest.TestCase):
    def test_grid_places_cells(self):
        """Row i, column j holds a(i, j)"""
        grid = development_grid(develop(xor_system(), 4), 4, 0)
        self.assertEqual(grid.shape, (5, 5))
        self.assertTrue((grid[0, :] == 1).all())
        self.assertTrue((grid[:, 0] == 1).all())
        self.assertEqual(grid[1, 1], 0)
        self.assertEqual(grid[2, 1], 1)
        self.assertEqual(grid[2, 2], 0)
        np.testing.assert_array_equal(grid, grid.T)

    def test_ppm_header(self):
        """Binary PPM with a three-byte pixel per cell"""
        grid = development_grid(develop(xor_system(), 3), 3, 0)
        data = ppm_bytes(grid, RenderPalette.for_system(xor_system()))
        header = b"P6\n4 4\n255\n"
        self.assertTrue(data.startswith(header))
        self.assertEqual(len(data), len(header) + 4 * 4 * 3)
        self.assertEqual(data[len(header) : len(header) + 3], bytes(BLACK))

    def test_render_writes_file(self):
        """render_ppm writes the picture and returns its path"""
        system = xor_system()
        with tempfile.TemporaryDirectory() as tmp:
            palette = RenderPalette.for_system(system)
            out = render_ppm(develop(system, 8), palette, os.path.join(tmp, "x.ppm"), 8, 0)
            self.assertTrue(out.exists())
            self.assertTrue(out.read_bytes().startswith(b"P6\n9 9\n255\n"))

    def _pixels(self, data: bytes, size: int) -> np.ndarray:
        header = f"P6\n{size} {size}\n255\n".encode("ascii")
        self.assertTrue(data.startswith(header))
        return np.frombuffer(data[len(header) :], dtype=np.uint8).reshape(size, size, 3)

    def test_same_system_same_bytes(self):
        """Rendering f = 0 twice gives identical files with black walls and white interior"""
        system = constant_system(False)
        with tempfile.TemporaryDirectory() as tmp:
            images = [
                render_ppm(
                    develop(system, 3),
                    RenderPalette.for_system(system),
                    os.path.join(tmp, f"zero{run}.ppm"),
                    3,
                    system.zero,
                ).read_bytes()
                for run in range(2)
            ]
        self.assertEqual(images[0], images[1])

        pixels = self._pixels(images[0], 4)
        self.assertTrue((pixels[0, :] == BLACK).all())
        self.assertTrue((pixels[:, 0] == BLACK).all())
        self.assertTrue((pixels[1:, 1:] == WHITE).all())

    def test_constant_one_fills_the_triangle(self):
        """f = 1 paints every developed cell black and the unreached corner white"""
        system = constant_system(True)
        grid = development_grid(develop(system, 3), 3, system.zero)
        pixels = self._pixels(ppm_bytes(grid, RenderPalette.for_system(system)), 4)
        for i in range(4):
            for j in range(4):
                expected = BLACK if i + j <= 3 else WHITE
                self.assertEqual(tuple(pixels[i, j]), expected, (i, j))

    def test_unwritable_target(self):
        """Write failures surface as QuarterplaneError"""
        system = xor_system()
        with tempfile.TemporaryDirectory() as tmp:
            target = os.path.join(tmp, "missing", "x.ppm")
            with self.assertRaises(QuarterplaneError):
                render_ppm(develop(system, 2), RenderPalette.for_system(system), target, 2, 0)


if __name__ == "__main__":
    unittest.main()
