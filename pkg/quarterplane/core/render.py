"""
Quarterplane Rendering

Binary PPM pictures of a development.
"""

import colorsys
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Tuple, Union

import numpy as np
import structlog

from .dynsys import Diagonal, DynamicalSystem
from .errors import QuarterplaneError

log = structlog.get_logger(__name__)

WHITE = (255, 255, 255)
BLACK = (0, 0, 0)
MAGENTA = (255, 0, 255)
GOLDEN_STEP = (3 - math.sqrt(5)) / 2


@dataclass(frozen=True)
class RenderPalette:
    """Letter id -> RGB, as an (alphabet size x 3) uint8 array"""

    colors: np.ndarray

    @classmethod
    def for_system(cls, system: DynamicalSystem) -> "RenderPalette":
        colors = np.zeros((system.size, 3), dtype=np.uint8)
        for letter in system.letters:
            if letter.id == system.zero:
                rgb = WHITE
            elif letter.id == system.one:
                rgb = BLACK
            elif letter.id == system.bottom:
                rgb = MAGENTA
            else:
                hue = (letter.id * GOLDEN_STEP) % 1.0
                rgb = tuple(int(round(c * 255)) for c in colorsys.hsv_to_rgb(hue, 1.0, 1.0))
            colors[letter.id] = rgb
        colors.flags.writeable = False
        return cls(colors)

    def __getitem__(self, letter_id: int) -> Tuple[int, int, int]:
        return tuple(int(c) for c in self.colors[letter_id])


def development_grid(diagonals: Iterable[Diagonal], n_max: int, zero: int) -> np.ndarray:
    """(N+1) x (N+1) letter grid; cells below the last diagonal hold zero"""
    grid = np.full((n_max + 1, n_max + 1), zero, dtype=np.int64)
    for diagonal in diagonals:
        if diagonal.n > n_max:
            break
        k = np.arange(diagonal.n + 1)
        grid[diagonal.n - k, k] = diagonal.cells
    return grid


def ppm_bytes(grid: np.ndarray, palette: RenderPalette) -> bytes:
    height, width = grid.shape
    pixels = palette.colors[grid]
    return f"P6\n{width} {height}\n255\n".encode("ascii") + pixels.tobytes()


def render_ppm(
    diagonals: Iterable[Diagonal],
    palette: RenderPalette,
    out: Union[str, Path],
    n_max: int,
    zero: int,
) -> Path:
    """Row i, column j of the picture is a(i, j)"""
    out = Path(out)
    data = ppm_bytes(development_grid(diagonals, n_max, zero), palette)
    try:
        out.write_bytes(data)
    except OSError as e:
        raise QuarterplaneError(f"cannot write image {out}: {e}") from e
    log.info("image_written", path=str(out), size=n_max + 1)
    return out
