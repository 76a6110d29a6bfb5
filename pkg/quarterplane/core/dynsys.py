"""
Quarterplane Dynamical Systems

A system is a finite alphabet with a rule table f and distinguished letters
one and zero. Its development fills the quarter plane from a wall of ones by
a(i, j) = f(a(i-1, j), a(i, j-1)). Everything here works diagonal by
diagonal: entry k of diagonal D_n is the cell (n - k, k).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import structlog

from .errors import StructuralError, SymmetryViolation

log = structlog.get_logger(__name__)

DEFAULT_DENSE_LIMIT = 2048


class Role(str, Enum):
    """What a letter is used for"""

    ONE = "one"
    ZERO = "zero"
    BOTTOM = "bottom"
    BOOTSTRAP = "bootstrap"
    TYPE0 = "type0"
    PAIR = "pair"


class Provenance(str, Enum):
    DEFINED = "defined"
    DEFAULTED = "defaulted"


@dataclass(frozen=True)
class Letter:
    """One element of a system's alphabet"""

    id: int
    name: str
    role: Role
    level: int = 0

    @property
    def tag(self) -> str:
        """Role as written in system files, e.g. ``pair3``"""
        if self.role is Role.PAIR:
            return f"pair{self.level}"
        return self.role.value

    @classmethod
    def from_tag(cls, letter_id: int, name: str, tag: str) -> "Letter":
        if tag.startswith(Role.PAIR.value):
            suffix = tag[len(Role.PAIR.value) :]
            if not suffix.isdigit():
                raise StructuralError(f"bad pair role {tag!r} for letter {letter_id}")
            return cls(letter_id, name, Role.PAIR, int(suffix))
        try:
            return cls(letter_id, name, Role(tag))
        except ValueError:
            raise StructuralError(f"unknown role {tag!r} for letter {letter_id}") from None


class RuleTable:
    """
    Total map (id x id) -> id.

    Pairs without an explicit rule fall back to ``default`` (the Bottom
    letter of compiled systems). A table without a default must define
    every ordered pair.
    """

    def __init__(
        self,
        size: int,
        entries: Mapping[Tuple[int, int], int],
        default: Optional[int] = None,
        dense_limit: int = DEFAULT_DENSE_LIMIT,
    ):
        if size <= 0:
            raise StructuralError("rule table needs at least one letter")
        if default is not None and not 0 <= default < size:
            raise StructuralError(f"default letter {default} out of range")
        for (a, b), c in entries.items():
            if not (0 <= a < size and 0 <= b < size and 0 <= c < size):
                raise StructuralError(f"rule R {a} {b} {c} references an unknown letter")

        self.size = size
        self.default = default
        self.dense_limit = dense_limit
        self._entries: Dict[Tuple[int, int], int] = dict(entries)
        self._dense: Optional[np.ndarray] = None
        self._keys: Optional[np.ndarray] = None
        self._values: Optional[np.ndarray] = None
        self._build_lookup()

    def __len__(self) -> int:
        return len(self._entries)

    def __getitem__(self, pair: Tuple[int, int]) -> int:
        value = self._entries.get(pair, self.default)
        if value is None:
            raise StructuralError(f"rule table has no image for pair {pair}")
        return value

    def provenance(self, a: int, b: int) -> Provenance:
        return Provenance.DEFINED if (a, b) in self._entries else Provenance.DEFAULTED

    def defined_pairs(self) -> List[Tuple[int, int, int]]:
        """Explicit rules sorted by pair"""
        return [(a, b, c) for (a, b), c in sorted(self._entries.items())]

    def is_total(self) -> bool:
        return self.default is not None or len(self._entries) == self.size * self.size

    def first_asymmetric_pair(self) -> Optional[Tuple[int, int]]:
        """Smallest pair (a, b) with f(a,b) != f(b,a), if any"""
        for (a, b), c in sorted(self._entries.items()):
            if self._entries.get((b, a), self.default) != c:
                return (min(a, b), max(a, b))
        return None

    def is_symmetric(self) -> bool:
        return self.first_asymmetric_pair() is None

    def _build_lookup(self):
        if self.size <= self.dense_limit:
            fill = -1 if self.default is None else self.default
            dense = np.full((self.size, self.size), fill, dtype=np.int64)
            if self._entries:
                pairs = np.array(list(self._entries.keys()), dtype=np.int64)
                dense[pairs[:, 0], pairs[:, 1]] = np.fromiter(
                    self._entries.values(), dtype=np.int64, count=len(self._entries)
                )
            self._dense = dense
        else:
            pairs = np.array(list(self._entries.keys()), dtype=np.int64).reshape(-1, 2)
            keys = pairs[:, 0] * self.size + pairs[:, 1]
            values = np.fromiter(self._entries.values(), dtype=np.int64, count=len(self._entries))
            order = np.argsort(keys, kind="stable")
            self._keys = keys[order]
            self._values = values[order]
        log.debug(
            "rule_table_indexed",
            size=self.size,
            rules=len(self._entries),
            dense=self._dense is not None,
        )

    def lookup(self, north: np.ndarray, west: np.ndarray) -> np.ndarray:
        """Vectorized f(north, west)"""
        if self._dense is not None:
            out = self._dense[north, west]
        else:
            key = north.astype(np.int64) * self.size + west
            if len(self._keys) == 0:
                out = np.full(key.shape, -1 if self.default is None else self.default)
            else:
                idx = np.searchsorted(self._keys, key)
                idx = np.minimum(idx, len(self._keys) - 1)
                found = self._keys[idx] == key
                fill = -1 if self.default is None else self.default
                out = np.where(found, self._values[idx], fill)

        if self.default is None and out.size and out.min() < 0:
            bad = int(np.argmin(out))
            raise StructuralError(
                f"rule table has no image for pair ({int(north[bad])}, {int(west[bad])})"
            )
        return out


@dataclass(frozen=True)
class DynamicalSystem:
    """The tuple (A, f, 0, 1) plus an optional absorbing Bottom letter"""

    letters: Tuple[Letter, ...]
    table: RuleTable
    one: int
    zero: int
    bottom: Optional[int] = None
    symmetric: bool = False
    _by_name: Dict[str, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        size = len(self.letters)
        if self.table.size != size:
            raise StructuralError(f"table size {self.table.size} != alphabet size {size}")

        for index, letter in enumerate(self.letters):
            if letter.id != index:
                raise StructuralError(
                    f"letter ids must be contiguous; found {letter.id} at {index}"
                )
            if letter.name in self._by_name:
                raise StructuralError(f"duplicate letter name {letter.name!r}")
            self._by_name[letter.name] = index

        for name, letter_id in (("one", self.one), ("zero", self.zero), ("bottom", self.bottom)):
            if letter_id is not None and not 0 <= letter_id < size:
                raise StructuralError(f"{name} letter {letter_id} is not in the alphabet")
        if self.one == self.zero:
            raise StructuralError("one and zero must differ")
        if self.bottom is not None and self.bottom in (self.one, self.zero):
            raise StructuralError("bottom must differ from one and zero")

        roles = [letter.role for letter in self.letters]
        if roles.count(Role.ONE) != 1 or self.letters[self.one].role is not Role.ONE:
            raise StructuralError("exactly one letter must have role one")
        if roles.count(Role.ZERO) != 1 or self.letters[self.zero].role is not Role.ZERO:
            raise StructuralError("exactly one letter must have role zero")
        if roles.count(Role.BOTTOM) > 1:
            raise StructuralError("at most one letter may have role bottom")
        if self.bottom is not None and self.letters[self.bottom].role is not Role.BOTTOM:
            raise StructuralError("bottom letter must have role bottom")

    @property
    def size(self) -> int:
        return len(self.letters)

    def letter(self, letter_id: int) -> Letter:
        return self.letters[letter_id]

    def by_name(self, name: str) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise StructuralError(f"no letter named {name!r}") from None

    def f(self, north: int, west: int) -> int:
        return self.table[(north, west)]

    def zero_closed(self) -> bool:
        """f(0,0) = f(0,1) = f(1,0) = 0"""
        z, o = self.zero, self.one
        return self.f(z, z) == z and self.f(z, o) == z and self.f(o, z) == z


@dataclass(frozen=True)
class Diagonal:
    """D_n: the cells with i + j = n; entry k is a(n - k, k)"""

    n: int
    cells: np.ndarray

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def interior(self) -> np.ndarray:
        return self.cells[1:-1]

    def tolist(self) -> List[int]:
        return [int(c) for c in self.cells]


def diagonal_cell(n: int, k: int) -> Tuple[int, int]:
    """(n, k) -> (i, j)"""
    return (n - k, k)


def cell_diagonal(i: int, j: int) -> Tuple[int, int]:
    """(i, j) -> (n, k)"""
    return (i + j, j)


def develop(system: DynamicalSystem, n_max: int) -> Iterator[Diagonal]:
    """
    Yield D_0 ... D_n_max.

    Only the previous diagonal is kept alive; each yielded array is read-only.
    """
    if n_max < 0:
        raise ValueError("diagonal count must be non-negative")

    cells = np.array([system.one], dtype=np.int64)
    cells.flags.writeable = False
    yield Diagonal(0, cells)

    for n in range(1, n_max + 1):
        nxt = np.empty(n + 1, dtype=np.int64)
        nxt[0] = nxt[n] = system.one
        if n > 1:
            # north parent a(i-1, j) is prev[k], west parent a(i, j-1) is prev[k-1]
            nxt[1:n] = system.table.lookup(cells[1:n], cells[0 : n - 1])
        nxt.flags.writeable = False
        cells = nxt
        yield Diagonal(n, cells)


class VerdictKind(str, Enum):
    CERTIFIED = "ZeroCertifiedFrom"
    NOT_ZERO = "NotZeroWithin"
    UNCERTIFIED = "InteriorZeroButUncertified"


@dataclass(frozen=True)
class ZeroVerdict:
    """
    Outcome of a bounded ultimately-zero scan.

    Only ``CERTIFIED`` is a proof; ``notes`` lists every scanned diagonal
    whose interior was zero without the closure condition.
    """

    kind: VerdictKind
    n: int
    bound: int
    notes: Tuple[int, ...] = ()

    @property
    def certified(self) -> bool:
        return self.kind is VerdictKind.CERTIFIED

    def scan_log(self) -> List["ZeroVerdict"]:
        """The uncertified zero-interior diagonals as verdict entries"""
        return [ZeroVerdict(VerdictKind.UNCERTIFIED, n, self.bound) for n in self.notes]

    def __str__(self) -> str:
        return f"{self.kind.value}({self.n})"


def scan_ultimately_zero(system: DynamicalSystem, n_max: int) -> ZeroVerdict:
    """Scan D_2 ... D_n_max for a zero-closure certificate"""
    if n_max < 2:
        raise ValueError("scan bound must be at least 2")

    closed = system.zero_closed()
    notes: List[int] = []

    for diagonal in develop(system, n_max):
        if diagonal.n < 2:
            continue
        if np.all(diagonal.interior == system.zero):
            if closed:
                log.debug("scan_finished", verdict="certified", n=diagonal.n)
                return ZeroVerdict(VerdictKind.CERTIFIED, diagonal.n, n_max, tuple(notes))
            notes.append(diagonal.n)

    verdict = ZeroVerdict(VerdictKind.NOT_ZERO, n_max, n_max, tuple(notes))
    log.debug("scan_finished", verdict=verdict.kind.value, uncertified=len(notes))
    return verdict


@dataclass
class ValidationReport:
    """Properties of a system probed over D_0 ... D_probe"""

    probe: int
    total: bool
    declared_symmetric: bool
    actually_symmetric: bool
    asymmetric_pair: Optional[Tuple[int, int]] = None
    bottom_at: Optional[Tuple[int, int]] = None
    bottom_rule: Optional[Tuple[int, int, Provenance]] = None
    one_off_wall_at: Optional[Tuple[int, int]] = None
    zero_closed: bool = False

    @property
    def ok(self) -> bool:
        return (
            self.total
            and self.declared_symmetric == self.actually_symmetric
            and self.bottom_at is None
            and self.one_off_wall_at is None
        )

    def violations(self) -> List[str]:
        found = []
        if not self.total:
            found.append("rule table is not total")
        if self.declared_symmetric != self.actually_symmetric:
            found.append(
                f"declared symmetric={self.declared_symmetric} but table symmetric="
                f"{self.actually_symmetric} (pair {self.asymmetric_pair})"
            )
        if self.bottom_at is not None:
            message = f"bottom appears at a{self.bottom_at}"
            if self.bottom_rule is not None:
                north, west, provenance = self.bottom_rule
                message += f" from f({north}, {west}) ({provenance.value})"
            found.append(message)
        if self.one_off_wall_at is not None:
            found.append(f"one appears off the walls at a{self.one_off_wall_at}")
        return found

    def raise_for_status(self):
        if self.declared_symmetric != self.actually_symmetric:
            raise SymmetryViolation(self.asymmetric_pair or (0, 0), "; ".join(self.violations()))
        if not self.ok:
            raise StructuralError("; ".join(self.violations()))


def validate_system(system: DynamicalSystem, n_max: int) -> ValidationReport:
    """Check totality, declared symmetry, Bottom leaks and One leaks"""
    asymmetric = system.table.first_asymmetric_pair()
    report = ValidationReport(
        probe=n_max,
        total=system.table.is_total(),
        declared_symmetric=system.symmetric,
        actually_symmetric=asymmetric is None,
        asymmetric_pair=asymmetric,
    )
    if not report.total:
        return report

    report.zero_closed = system.zero_closed()
    previous = None
    for diagonal in develop(system, n_max):
        if diagonal.n < 2:
            previous = diagonal.cells
            continue
        interior = diagonal.interior
        if report.bottom_at is None and system.bottom is not None:
            hits = np.flatnonzero(interior == system.bottom)
            if hits.size:
                report.bottom_at = diagonal_cell(diagonal.n, int(hits[0]) + 1)
                north, west = int(previous[hits[0] + 1]), int(previous[hits[0]])
                report.bottom_rule = (north, west, system.table.provenance(north, west))
        if report.one_off_wall_at is None:
            hits = np.flatnonzero(interior == system.one)
            if hits.size:
                report.one_off_wall_at = diagonal_cell(diagonal.n, int(hits[0]) + 1)
        if report.bottom_at is not None and report.one_off_wall_at is not None:
            break
        previous = diagonal.cells

    if not report.ok:
        log.info("validation_failed", violations=report.violations())
    return report


def constant_system(value_is_one: bool) -> DynamicalSystem:
    """Two-letter system with f identically zero or identically one"""
    letters = (Letter(0, "0", Role.ZERO), Letter(1, "1", Role.ONE))
    image = 1 if value_is_one else 0
    entries = {(a, b): image for a in range(2) for b in range(2)}
    return DynamicalSystem(letters, RuleTable(2, entries), one=1, zero=0, symmetric=True)


def xor_system() -> DynamicalSystem:
    """Two-letter system with f = exclusive-or"""
    letters = (Letter(0, "0", Role.ZERO), Letter(1, "1", Role.ONE))
    entries = {(a, b): a ^ b for a in range(2) for b in range(2)}
    return DynamicalSystem(letters, RuleTable(2, entries), one=1, zero=0, symmetric=True)


def random_system(size: int, seed: int, symmetric: bool = False) -> DynamicalSystem:
    """Total random table over ``size`` letters, zero = 0 and one = 1"""
    if size < 2:
        raise ValueError("a system needs at least the letters zero and one")
    rng = np.random.default_rng(seed)
    grid = rng.integers(0, size, size=(size, size))
    if symmetric:
        grid = np.triu(grid) + np.triu(grid, 1).T
    letters = [Letter(0, "0", Role.ZERO), Letter(1, "1", Role.ONE)]
    letters += [Letter(i, f"x{i}", Role.TYPE0) for i in range(2, size)]
    entries = {(a, b): int(grid[a, b]) for a in range(size) for b in range(size)}
    return DynamicalSystem(
        tuple(letters), RuleTable(size, entries), one=1, zero=0, symmetric=symmetric
    )


def system_from_rules(
    names: Sequence[str], rules: Mapping[Tuple[int, int], int], symmetric: bool = False
) -> DynamicalSystem:
    """Small hand-made systems: names[0] is zero, names[1] is one"""
    letters = [Letter(0, names[0], Role.ZERO), Letter(1, names[1], Role.ONE)]
    letters += [Letter(i, name, Role.TYPE0) for i, name in enumerate(names[2:], start=2)]
    return DynamicalSystem(
        tuple(letters), RuleTable(len(names), rules), one=1, zero=0, symmetric=symmetric
    )
