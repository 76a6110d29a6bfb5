"""
Quarterplane UW Reduction

Compiles a machine and input word into a dynamical system whose diagonals
alternate between tape contents (type 0) and neighbour pairs (type 1).
Type-0 diagonal dW + 2t holds the configuration at time t; tape cell c
sits at index 3 + t + c.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..core.config import QuarterplaneConfig
from ..core.dynsys import (
    DEFAULT_DENSE_LIMIT,
    DynamicalSystem,
    Role,
    ZeroVerdict,
    develop,
    diagonal_cell,
    scan_ultimately_zero,
)
from ..core.errors import MismatchAt, StructuralError, TwoHeads, VerdictDisagreement
from ..core.turing import Cell, Configuration, RunReport, TuringMachine, classify_trace, run_trace
from .bootstrap import SystemBuilder, paint_bootstrap

log = structlog.get_logger(__name__)

MARGIN = 2
CELL0_INDEX = 3


def uw_local_update(machine: TuringMachine, left: Cell, centre: Cell, right: Cell) -> Cell:
    """Next content of ``centre`` from its two neighbours"""
    if sum(cell.has_head for cell in (left, centre, right)) > 1:
        raise TwoHeads(f"more than one head in {left.label()} {centre.label()} {right.label()}")

    if centre.has_head:
        if centre.state == machine.halt:
            return Cell(machine.blank) if centre.symbol == machine.blank else centre
        tr = machine.transition(centre.state, centre.symbol)
        return Cell(tr.symbol, tr.state) if tr.move == "S" else Cell(tr.symbol)

    if left.has_head and left.state != machine.halt:
        tr = machine.transition(left.state, left.symbol)
        if tr.move == "R":
            return Cell(centre.symbol, tr.state)
    if right.has_head and right.state != machine.halt:
        tr = machine.transition(right.state, right.symbol)
        if tr.move == "L":
            return Cell(centre.symbol, tr.state)
    return centre


def settled_cells(machine: TuringMachine, config: Configuration) -> Dict[int, Cell]:
    """Cell contents one type-0 diagonal after a halt: a head on a blank is erased"""
    cells = config.cells(machine.blank)
    if cells[config.head].symbol == machine.blank:
        del cells[config.head]
    return cells


@dataclass
class UwMeta:
    d_w: int
    gamma0: Dict[Cell, int]
    gamma1: Dict[Tuple[Cell, Cell], int]
    bootstrap: Tuple[int, ...]
    machine: str = ""
    word: Tuple[str, ...] = ()
    cell0_index: int = CELL0_INDEX

    def cell_index(self, t: int, c: int) -> int:
        return self.cell0_index + t + c

    def diagonal(self, t: int) -> int:
        return self.d_w + 2 * t

    def sidecar(self, system: DynamicalSystem) -> Dict[str, object]:
        return {
            "reduction": "uw",
            "machine": self.machine,
            "word": ",".join(self.word) or "-",
            "dW": self.d_w,
            "cell0": self.cell0_index,
            "letters": system.size,
            "rules": len(system.table),
        }


def compile_uw(
    machine: TuringMachine, word: Sequence[str], dense_limit: int = DEFAULT_DENSE_LIMIT
) -> Tuple[DynamicalSystem, UwMeta]:
    word = machine.check_word(word)
    builder = SystemBuilder()
    cells = machine.cells()
    blank = Cell(machine.blank)

    gamma0: Dict[Cell, int] = {}
    for cell in cells:
        gamma0[cell] = builder.zero if cell == blank else builder.add_letter(
            f"g0[{cell.label()}]", Role.TYPE0
        )

    gamma1: Dict[Tuple[Cell, Cell], int] = {}
    for u, v in itertools.product(cells, repeat=2):
        if u == blank and v == blank:
            continue
        gamma1[(u, v)] = builder.add_letter(f"g1[{u.label()}|{v.label()}]", Role.PAIR, 1)

    def pair(u: Cell, v: Cell) -> int:
        return builder.zero if u == blank and v == blank else gamma1[(u, v)]

    start = gamma0[Cell(machine.blank, machine.start)]
    target = [builder.zero] * MARGIN + [start] + [gamma0[Cell(s)] for s in word]
    target += [builder.zero] * MARGIN
    bootstrap = paint_bootstrap(builder, target)
    d_w = len(target) + 1

    builder.zero_closure()
    for u, v in itertools.product(cells, repeat=2):
        if u == blank and v == blank:
            continue
        builder.define(gamma0[v], gamma0[u], pair(u, v))

    for x, y, z in itertools.product(cells, repeat=3):
        if sum(cell.has_head for cell in (x, y, z)) > 1:
            continue
        out = uw_local_update(machine, x, y, z)
        builder.define(pair(y, z), pair(x, y), gamma0[out])

    builder.margin_law()
    system = builder.build(dense_limit)
    meta = UwMeta(d_w, gamma0, gamma1, tuple(bootstrap), machine.name, word)

    log.info(
        "system_compiled",
        reduction="uw",
        machine=machine.name,
        word_length=len(word),
        letters=system.size,
        rules=len(system.table),
        d_w=d_w,
    )
    return system, meta


@dataclass
class UwVerifyReport:
    """Cell-for-cell comparison of type-0 diagonals with the machine trace"""

    steps: int
    diagonals: int
    run: RunReport
    verdict: ZeroVerdict
    expected_certified: Optional[int]
    checked: int = 0
    mismatch: Optional[MismatchAt] = None
    margin_violation: Optional[int] = None
    bottom_at: Optional[Tuple[int, int]] = None
    role_violation: Optional[Tuple[int, int]] = None
    matches: List[bool] = field(default_factory=list)

    @property
    def bottom_free(self) -> bool:
        return self.bottom_at is None

    @property
    def agreement(self) -> bool:
        if self.expected_certified is None or self.expected_certified > self.diagonals:
            return not self.verdict.certified
        return self.verdict.certified and self.verdict.n == self.expected_certified

    @property
    def ok(self) -> bool:
        return (
            self.mismatch is None
            and self.margin_violation is None
            and self.bottom_free
            and self.role_violation is None
            and self.agreement
        )

    def raise_for_status(self):
        if self.mismatch is not None:
            raise self.mismatch
        if self.bottom_at is not None:
            raise StructuralError(f"bottom appears at a{self.bottom_at}")
        if self.role_violation is not None:
            raise StructuralError(f"letter of the wrong kind at a{self.role_violation}")
        if self.margin_violation is not None:
            raise StructuralError(f"content reaches the margin on diagonal {self.margin_violation}")
        if not self.agreement:
            raise VerdictDisagreement(
                f"scan gave {self.verdict}, expected certification at {self.expected_certified}"
            )


def _allowed_roles(meta: UwMeta, n: int) -> Tuple[Role, ...]:
    if n < meta.d_w:
        return (Role.BOOTSTRAP,)
    if (n - meta.d_w) % 2 == 0:
        return (Role.ZERO, Role.TYPE0)
    return (Role.ZERO, Role.PAIR)


def verify_uw(
    system: DynamicalSystem,
    meta: UwMeta,
    machine: TuringMachine,
    word: Sequence[str],
    steps: int,
    n_max: int,
) -> UwVerifyReport:
    """Develop ``n_max`` diagonals and decode diagonal dW + 2t for t <= steps"""
    if n_max < meta.diagonal(steps):
        raise ValueError(f"need at least {meta.diagonal(steps)} diagonals for {steps} steps")

    trace = run_trace(machine, word, max(steps, (n_max - meta.d_w) // 2))
    run = classify_trace(iter(trace), machine.halt, len(trace) - 1)
    verdict = scan_ultimately_zero(system, n_max)
    expected = meta.diagonal(run.steps) + 2 if run.uw_accept else None
    report = UwVerifyReport(steps, n_max, run, verdict, expected)

    roles = np.array([letter.role.value for letter in system.letters])
    gamma_of = {letter_id: cell for cell, letter_id in meta.gamma0.items()}
    names = [letter.name for letter in system.letters]
    halted_cells = settled_cells(machine, trace[-1]) if run.halted else None

    for diagonal in develop(system, n_max):
        n = diagonal.n
        if n < 2:
            continue
        interior = diagonal.interior

        if report.bottom_at is None and system.bottom is not None:
            hits = np.flatnonzero(interior == system.bottom)
            if hits.size:
                report.bottom_at = diagonal_cell(n, int(hits[0]) + 1)

        if report.role_violation is None:
            allowed = [role.value for role in _allowed_roles(meta, n)]
            bad = np.flatnonzero(~np.isin(roles[interior], allowed))
            if bad.size:
                report.role_violation = diagonal_cell(n, int(bad[0]) + 1)

        offset = n - meta.d_w
        if offset < 0 or offset % 2:
            continue
        t = offset // 2

        cells = diagonal.cells
        if any(cells[k] != system.zero for k in (1, 2, n - 2, n - 1)):
            if report.margin_violation is None:
                report.margin_violation = n

        if t > steps or report.mismatch is not None:
            continue
        if t < len(trace):
            content = trace[t].cells(machine.blank)
        elif halted_cells is not None:
            content = halted_cells
        else:
            continue

        expected_cells = np.full(n + 1, system.zero, dtype=np.int64)
        expected_cells[0] = expected_cells[n] = system.one
        for c, cell in content.items():
            expected_cells[meta.cell_index(t, c)] = meta.gamma0[cell]

        diff = np.flatnonzero(expected_cells != cells)
        report.matches.append(diff.size == 0)
        report.checked += 1
        if diff.size:
            k = int(diff[0])
            c = k - meta.cell_index(t, 0)
            want = gamma_of.get(int(expected_cells[k]))
            report.mismatch = MismatchAt(
                t, c, want.label() if want else names[expected_cells[k]], names[cells[k]]
            )
            log.warning("verification_mismatch", reduction="uw", step=t, cell=c)

    log.info(
        "uw_verified",
        machine=machine.name,
        checked=report.checked,
        verdict=str(verdict),
        uw_accept=run.uw_accept,
        ok=report.ok,
    )
    return report


class UwReduction:
    """UW compiler bound to a configuration"""

    def __init__(self, config: Optional[QuarterplaneConfig] = None):
        self.config = config or QuarterplaneConfig()

    def compile(
        self, machine: TuringMachine, word: Sequence[str]
    ) -> Tuple[DynamicalSystem, UwMeta]:
        return compile_uw(machine, word, self.config.development.dense_table_limit)

    def verify(
        self,
        machine: TuringMachine,
        word: Sequence[str],
        steps: Optional[int] = None,
        diagonals: Optional[int] = None,
    ) -> UwVerifyReport:
        system, meta = self.compile(machine, word)
        steps = self.config.verification.uw_steps if steps is None else steps
        diagonals = diagonals or max(meta.diagonal(steps), self.config.development.scan_bound)
        return verify_uw(system, meta, machine, word, steps, diagonals)
