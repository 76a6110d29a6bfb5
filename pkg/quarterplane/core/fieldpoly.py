"""
Quarterplane Field Polynomials

Rule tables as bivariate polynomial functions over a prime field F_p.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
import structlog
from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_mul, gf_mul_ground

from .dynsys import Diagonal, DynamicalSystem, develop
from .errors import (
    DivergenceAt,
    ModulusTooSmall,
    NonPrimeModulus,
    QuarterplaneError,
    StructuralError,
)

log = structlog.get_logger(__name__)

MAX_MODULUS = 257


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    if not isprime(p):
        raise NonPrimeModulus(p)
    return p


@dataclass(frozen=True)
class FieldElement:
    residue: int
    modulus: int

    def __post_init__(self):
        check_prime(self.modulus)
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def _other(self, other: Union["FieldElement", int]) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError(f"cannot mix F_{self.modulus} and F_{other.modulus}")
            return other.residue
        return int(other)

    def __add__(self, other):
        return FieldElement(self.residue + self._other(other), self.modulus)

    def __sub__(self, other):
        return FieldElement(self.residue - self._other(other), self.modulus)

    def __mul__(self, other):
        return FieldElement(self.residue * self._other(other), self.modulus)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.residue, self.modulus)

    def inverse(self) -> "FieldElement":
        if self.residue == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(pow(self.residue, self.modulus - 2, self.modulus), self.modulus)

    def __truediv__(self, other):
        return self * FieldElement(self._other(other), self.modulus).inverse()

    def __int__(self) -> int:
        return self.residue


def lagrange_basis(a: Union[FieldElement, int], p: int) -> List[int]:
    """
    Ascending coefficients of d_a, the polynomial of degree p - 1 that is 1
    at a and 0 at every other point of F_p.
    """
    check_prime(p)
    a = int(a) % p

    numerator = [1]
    denominator = 1
    for b in range(p):
        if b == a:
            continue
        numerator = gf_mul(numerator, [1, (-b) % p], p, ZZ)
        denominator = denominator * (a - b) % p

    scaled = gf_mul_ground(numerator, pow(denominator, p - 2, p), p, ZZ)
    coeffs = [int(c) % p for c in reversed(scaled)]
    return coeffs + [0] * (p - len(coeffs))


@lru_cache(maxsize=32)
def _basis_matrix(p: int) -> np.ndarray:
    """Row a holds the coefficients of d_a"""
    matrix = np.array([lagrange_basis(a, p) for a in range(p)], dtype=np.int64)
    matrix.flags.writeable = False
    return matrix


@lru_cache(maxsize=32)
def _power_table(p: int) -> np.ndarray:
    """Row v holds v^0 ... v^(p-1) mod p"""
    table = np.ones((p, p), dtype=np.int64)
    values = np.arange(p, dtype=np.int64)
    for i in range(1, p):
        table[:, i] = table[:, i - 1] * values % p
    table.flags.writeable = False
    return table


@dataclass
class Poly2:
    """F(x, y) = sum coeffs[i, j] x^i y^j over F_p"""

    p: int
    coeffs: np.ndarray

    def __post_init__(self):
        check_prime(self.p)
        self.coeffs = np.asarray(self.coeffs, dtype=np.int64) % self.p
        if self.coeffs.shape != (self.p, self.p):
            raise StructuralError(f"coefficient grid must be {self.p}x{self.p}")

    def evaluate(self, x, y) -> np.ndarray:
        """Vectorized F(x, y) for residue arrays of equal shape"""
        powers = _power_table(self.p)
        x = np.asarray(x, dtype=np.int64) % self.p
        y = np.asarray(y, dtype=np.int64) % self.p
        return (powers[x] @ self.coeffs % self.p * powers[y]).sum(axis=-1) % self.p

    def grid(self) -> np.ndarray:
        """Values at all p^2 points; entry (a, b) is F(a, b)"""
        xs, ys = np.meshgrid(np.arange(self.p), np.arange(self.p), indexing="ij")
        return self.evaluate(xs, ys)

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.coeffs, self.coeffs.T))

    def degree(self) -> Tuple[int, int]:
        """Per-variable degree; (-1, -1) for the zero polynomial"""
        rows, cols = np.nonzero(self.coeffs)
        if rows.size == 0:
            return (-1, -1)
        return (int(rows.max()), int(cols.max()))

    def dump(self) -> str:
        lines = [f"p {self.p}"]
        rows, cols = np.nonzero(self.coeffs)
        for i, j in sorted(zip(rows.tolist(), cols.tolist())):
            lines.append(f"C {i} {j} {int(self.coeffs[i, j])}")
        return "\n".join(lines) + "\n"


def interpolate2(values, p: int) -> Poly2:
    """
    The unique polynomial of per-variable degree <= p - 1 through a full
    p x p grid of values.
    """
    check_prime(p)
    grid = np.array(
        [[int(v) for v in row] for row in values], dtype=np.int64
    ) % p
    if grid.shape != (p, p):
        raise StructuralError(f"interpolation needs a {p}x{p} grid, got {grid.shape}")

    basis = _basis_matrix(p)
    coeffs = (basis.T @ grid % p) @ basis % p
    return Poly2(p, coeffs)


def parse_poly(text: str) -> Poly2:
    p = None
    entries: Dict[Tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        try:
            if parts[0] == "p" and len(parts) == 2 and p is None:
                p = int(parts[1])
            elif parts[0] == "C" and len(parts) == 4 and p is not None:
                i, j, value = (int(v) for v in parts[1:])
                if not (0 <= i < p and 0 <= j < p):
                    raise StructuralError(f"line {lineno}: exponent out of range")
                entries[(i, j)] = value
            else:
                raise StructuralError(f"line {lineno}: cannot parse {raw.strip()!r}")
        except ValueError:
            raise StructuralError(f"line {lineno}: expected integers") from None

    if p is None:
        raise StructuralError("missing 'p <modulus>' header")
    coeffs = np.zeros((p, p), dtype=np.int64)
    for (i, j), value in entries.items():
        coeffs[i, j] = value
    return Poly2(p, coeffs)


def save_poly(poly: Poly2, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(poly.dump(), encoding="ascii")
    return path


def load_poly(path: Union[str, Path]) -> Poly2:
    path = Path(path)
    try:
        return parse_poly(path.read_text(encoding="ascii"))
    except StructuralError as e:
        raise StructuralError(f"{path}: {e}") from None


@dataclass(frozen=True)
class Embedding:
    """Injective letter -> residue map with zero -> 0 and one -> 1"""

    p: int
    to_field: Tuple[int, ...]
    to_letter: Dict[int, int] = field(compare=False)

    def field_of(self, letters) -> np.ndarray:
        return np.asarray(self.to_field, dtype=np.int64)[np.asarray(letters, dtype=np.int64)]


def embedding_for(system: DynamicalSystem, p: int) -> Embedding:
    if p < system.size:
        raise ModulusTooSmall(p, system.size)
    order = [system.zero, system.one] + [
        i for i in range(system.size) if i not in (system.zero, system.one)
    ]
    to_field = [0] * system.size
    for residue, letter in enumerate(order):
        to_field[letter] = residue
    return Embedding(p, tuple(to_field), {r: l for l, r in enumerate(to_field)})


def embed_system(
    system: DynamicalSystem, p: int, max_modulus: int = MAX_MODULUS
) -> Tuple[Poly2, Embedding]:
    """Interpolate the rule table, extended by 0 off the embedded alphabet"""
    check_prime(p)
    if p > max_modulus:
        raise QuarterplaneError(f"modulus {p} exceeds the interpolation limit {max_modulus}")
    embedding = embedding_for(system, p)

    ids = np.arange(system.size, dtype=np.int64)
    north, west = np.meshgrid(ids, ids, indexing="ij")
    images = system.table.lookup(north.ravel(), west.ravel()).reshape(north.shape)

    grid = np.zeros((p, p), dtype=np.int64)
    positions = embedding.field_of(ids)
    grid[np.ix_(positions, positions)] = embedding.field_of(images)

    poly = interpolate2(grid, p)
    log.info("system_embedded", p=p, letters=system.size, symmetric=poly.is_symmetric())
    return poly, embedding


def develop_poly(poly: Poly2, embedding: Embedding, n_max: int) -> Iterator[Diagonal]:
    """Development driven by F; cells are residues"""
    if poly.p != embedding.p:
        raise ValueError("polynomial and embedding use different moduli")
    one = 1

    cells = np.array([one], dtype=np.int64)
    yield Diagonal(0, cells)
    for n in range(1, n_max + 1):
        nxt = np.empty(n + 1, dtype=np.int64)
        nxt[0] = nxt[n] = one
        if n > 1:
            nxt[1:n] = poly.evaluate(cells[1:n], cells[0 : n - 1])
        cells = nxt
        yield Diagonal(n, cells)


@dataclass
class PolyVerifyReport:
    p: int
    diagonals: int
    compared: int = 0
    divergence: Optional[DivergenceAt] = None

    @property
    def ok(self) -> bool:
        return self.divergence is None

    def raise_for_status(self):
        if self.divergence is not None:
            raise self.divergence


def verify_embedding(
    system: DynamicalSystem, poly: Poly2, embedding: Embedding, n_max: int
) -> PolyVerifyReport:
    """Compare table-driven and polynomial-driven developments cell for cell"""
    report = PolyVerifyReport(poly.p, n_max)
    for table_diag, poly_diag in zip(develop(system, n_max), develop_poly(poly, embedding, n_max)):
        expected = embedding.field_of(table_diag.cells)
        diff = np.flatnonzero(expected != poly_diag.cells)
        if diff.size:
            k = int(diff[0])
            n = table_diag.n
            report.divergence = DivergenceAt(
                n - k, k, int(expected[k]), int(poly_diag.cells[k])
            )
            log.info("embedding_diverged", i=n - k, j=k)
            break
        report.compared += 1
    return report


def random_grid(p: int, size: int, seed: int, symmetric: bool = False) -> np.ndarray:
    """Random table values over the first ``size`` residues, zero elsewhere"""
    rng = np.random.default_rng(seed)
    grid = np.zeros((p, p), dtype=np.int64)
    block = rng.integers(0, size, size=(size, size))
    if symmetric:
        block = np.triu(block) + np.triu(block, 1).T
    grid[:size, :size] = block
    return grid

