"""
Quarterplane SUW Reduction

Compiles a machine and input word into a symmetric dynamical system. Each
tape cell is written as three tagged letters c c' c'', the right half of a
diagonal carries the tape and the left half its mirror image around a
central 000 block. Eight diagonals make one machine step: seven levels of
pair codes followed by the local update of a decoded 9-window.

Type-0 diagonal dW + 8t holds the configuration at time t, with the base
letter of cell c at index dW/2 + 4t + 2 + 3c.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
import structlog

from ..core.config import CROSSING_RULES, QuarterplaneConfig
from ..core.dynsys import (
    DEFAULT_DENSE_LIMIT,
    DynamicalSystem,
    Role,
    ZeroVerdict,
    develop,
    diagonal_cell,
    scan_ultimately_zero,
)
from ..core.errors import (
    AsymmetryAt,
    MismatchAt,
    PhaseError,
    StructuralError,
    TagInconsistency,
    VerdictDisagreement,
)
from ..core.symcode import (
    TAGS,
    WINDOW,
    CodeBook,
    TaggedAlphabet,
    Word,
    central_word,
    generic_word,
    sigma,
    windows_of,
)
from ..core.turing import Cell, RunReport, TuringMachine, classify_trace, run_trace
from .bootstrap import RuleBuilder, SystemBuilder, paint_bootstrap
from .uw import settled_cells, uw_local_update

log = structlog.get_logger(__name__)

SPAN = WINDOW + 1
CENTRE = SPAN // 2
MARGIN = 9
MIN_MARGIN = 4


def _tag_of(tagged: TaggedAlphabet, letter: int) -> Tuple[Cell, int]:
    try:
        found = tagged.base(letter)
    except KeyError:
        found = None
    if found is None:
        raise PhaseError(f"letter {letter} carries no cell tag")
    return found


def _read_cells(
    tagged: TaggedAlphabet, word: Sequence[int], start: int, phase: int
) -> Optional[List[Cell]]:
    """
    Split ``word[start:]`` into cells, position i carrying tag
    (i - start + phase) mod 3. None when a cell is not a consistent triple.
    """
    groups: Dict[int, List[Tuple[int, int]]] = {}
    for i in range(start, len(word)):
        r, tag = divmod(i - start + phase, TAGS)
        groups.setdefault(r, []).append((tag, word[i]))

    cells: List[Cell] = []
    for r in sorted(groups):
        letters = groups[r]
        nonzero = [(tag, letter) for tag, letter in letters if letter != CodeBook.ZERO]
        if not nonzero:
            cells.append(tagged.zero_cell)
            continue
        if len(nonzero) != len(letters):
            return None
        cell = _tag_of(tagged, nonzero[0][1])[0]
        if any(_tag_of(tagged, letter) != (cell, tag) for tag, letter in nonzero):
            return None
        cells.append(cell)
    return cells


def _generic_reading(machine: TuringMachine, tagged: TaggedAlphabet, word: Word) -> Optional[int]:
    """Update of the centre letter reading the window as right-side tape"""
    first = next(i for i, letter in enumerate(word) if letter != CodeBook.ZERO)
    phase = (_tag_of(tagged, word[first])[1] - first) % TAGS
    cells = _read_cells(tagged, word, 0, phase)
    if cells is None:
        return None
    r, tag = divmod(CENTRE + phase, TAGS)
    result = uw_local_update(machine, cells[r - 1], cells[r], cells[r + 1])
    return tagged.letter(result, tag)


def _separator_at(word: Word, m: int) -> bool:
    if any(word[i] != CodeBook.ZERO for i in (m - 1, m, m + 1)):
        return False
    return all(word[m - d] == word[m + d] for d in range(2, min(m, WINDOW - m) + 1))


def _central_reading(
    machine: TuringMachine, tagged: TaggedAlphabet, word: Word, crossing_rule: str
) -> Optional[int]:
    """Update of the centre letter when the window shows the central 000 and its mirror"""
    for m in range(2, WINDOW - 1):
        if not _separator_at(word, m):
            continue
        view, mm = (word, m) if m <= CENTRE else (sigma(word), WINDOW - m)
        if view[mm + 2] == CodeBook.ZERO or _tag_of(tagged, view[mm + 2])[1] != 0:
            continue
        cells = _read_cells(tagged, view, mm + 2, 0)
        if cells is None:
            continue
        if mm != 2:
            # centre lies inside the separator
            return CodeBook.ZERO

        cell0 = cells[0]
        right = cells[1] if len(cells) > 1 else tagged.zero_cell
        if (
            crossing_rule == "read"
            and cell0.has_head
            and cell0.state != machine.halt
            and machine.transition(cell0.state, cell0.symbol).move == "L"
        ):
            return tagged.letter(Cell(cell0.symbol), 0)
        result = uw_local_update(machine, tagged.zero_cell, cell0, right)
        return tagged.letter(result, 0)
    return None


def suw_window_update(
    machine: TuringMachine,
    tagged: TaggedAlphabet,
    window: Sequence[int],
    crossing_rule: str = "read",
) -> int:
    """
    Next value of the centre letter of a 9-window of level-0 letters.

    The window is read as right-side tape, as mirrored left-side tape, or as
    the neighbourhood of the central 000 block, whichever is consistent.
    """
    word = tuple(window)
    if len(word) != SPAN:
        raise ValueError(f"window must have {SPAN} letters, got {len(word)}")
    if all(letter == CodeBook.ZERO for letter in word):
        return CodeBook.ZERO

    right = _generic_reading(machine, tagged, word)
    left = _generic_reading(machine, tagged, sigma(word))
    if right is not None and left is not None and right != left:
        raise TagInconsistency(f"window {word} reads differently in both orientations")
    if right is not None:
        return right
    if left is not None:
        return left

    central = _central_reading(machine, tagged, word, crossing_rule)
    if central is not None:
        return central
    raise TagInconsistency(f"window {word} has no consistent reading")


def rule_windows(machine: TuringMachine, tagged: TaggedAlphabet) -> List[Word]:
    """Every 9-window of a zero-padded configuration with at most one head"""
    cells = machine.cells()
    found: Set[Word] = set()

    for quad in itertools.product(cells, repeat=4):
        if sum(cell.has_head for cell in quad) <= 1:
            found.update(windows_of(generic_word(tagged, quad), SPAN))

    for trio in itertools.product(cells, repeat=3):
        if sum(cell.has_head for cell in trio) <= 1:
            found.update(windows_of(central_word(tagged, trio), SPAN))

    return sorted(found)


@dataclass
class SuwMeta:
    d_w: int
    codebook: CodeBook
    tagged: TaggedAlphabet
    bootstrap: Tuple[int, ...]
    crossing_rule: str = "read"
    machine: str = ""
    word: Tuple[str, ...] = ()
    windows: int = 0

    @property
    def center(self) -> int:
        return self.d_w // 2

    @staticmethod
    def system_id(term: int) -> int:
        return term + 1 if term else 0

    def base_index(self, t: int, c: int) -> int:
        return self.center + 4 * t + 2 + 3 * c

    def diagonal(self, t: int) -> int:
        return self.d_w + 8 * t

    def diagonal_level(self, n: int) -> int:
        return (n - self.d_w) % 8

    @property
    def level7_terms(self) -> int:
        return len(self.codebook.terms_at(CodeBook.MAX_LEVEL))

    def sidecar(self, system: DynamicalSystem) -> Dict[str, object]:
        return {
            "reduction": "suw",
            "machine": self.machine,
            "word": ",".join(self.word) or "-",
            "dW": self.d_w,
            "center": self.center,
            "crossing": self.crossing_rule,
            "letters": system.size,
            "rules": len(system.table),
            "windows": self.windows,
            "level7": self.level7_terms,
        }


def compile_suw(
    machine: TuringMachine,
    word: Sequence[str],
    crossing_rule: str = "read",
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> Tuple[DynamicalSystem, SuwMeta]:
    if crossing_rule not in CROSSING_RULES:
        raise ValueError(f"crossing rule must be one of {CROSSING_RULES}")
    word = machine.check_word(word)
    codebook = CodeBook()
    tagged = TaggedAlphabet(codebook, machine.cells(), machine.blank)

    coded = RuleBuilder(symmetric=True)
    windows = rule_windows(machine, tagged)
    eight: Set[Word] = set()
    for window in windows:
        level = window
        for _ in range(WINDOW - 1):
            nxt = codebook.pi_level(level)
            for x, y, out in zip(level, level[1:], nxt):
                coded.define(y, x, out)
            level = nxt
        x, y = level
        coded.define(y, x, suw_window_update(machine, tagged, window, crossing_rule))
        for half in (window[:-1], window[1:]):
            codebook.register(half)
            eight.add(half)

    builder = SystemBuilder(symmetric=True)
    for term in range(1, len(codebook)):
        level = codebook.level(term)
        if level == 0:
            builder.add_letter(f"g0[{codebook.name(term)}]", Role.TYPE0)
        else:
            builder.add_letter(codebook.name(term), Role.PAIR, level)

    sid = SuwMeta.system_id
    for (north, west), out in coded.rules.items():
        builder.define(sid(north), sid(west), sid(out))

    right: List[int] = []
    for cell in [Cell(machine.blank, machine.start)] + [Cell(s) for s in word]:
        right.extend(sid(term) for term in tagged.triple(cell))
    zeros = [builder.zero]
    target = zeros * MARGIN + right[::-1] + zeros * 3 + right + zeros * MARGIN
    bootstrap = paint_bootstrap(builder, target, palindromic=True)

    builder.zero_closure()
    builder.margin_law()
    system = builder.build(dense_limit)

    meta = SuwMeta(
        len(target) + 1,
        codebook,
        tagged,
        tuple(bootstrap),
        crossing_rule,
        machine.name,
        word,
        len(eight),
    )
    log.info(
        "system_compiled",
        reduction="suw",
        machine=machine.name,
        word_length=len(word),
        letters=system.size,
        rules=len(system.table),
        d_w=meta.d_w,
        windows=len(eight),
        level7=meta.level7_terms,
    )
    return system, meta


@dataclass
class SuwVerifyReport:
    """Mirrored simulation check up to the first move onto the negative side"""

    steps: int
    diagonals: int
    run: RunReport
    verdict: ZeroVerdict
    expected_certified: Optional[int]
    crossing_rule: str
    checked: int = 0
    matches: List[bool] = field(default_factory=list)
    mismatch: Optional[MismatchAt] = None
    asymmetry: Optional[AsymmetryAt] = None
    bottom_at: Optional[Tuple[int, int]] = None
    level_violation: Optional[Tuple[int, int]] = None
    min_margin: Optional[int] = None

    @property
    def symmetric(self) -> bool:
        return self.asymmetry is None

    @property
    def bottom_free(self) -> bool:
        return self.bottom_at is None

    @property
    def margin_ok(self) -> bool:
        return self.min_margin is None or self.min_margin >= MIN_MARGIN

    @property
    def suw_accept(self) -> bool:
        return self.run.suw_accept

    @property
    def agreement(self) -> bool:
        if self.expected_certified is None or self.expected_certified > self.diagonals:
            return not self.verdict.certified
        return self.verdict.certified and self.verdict.n == self.expected_certified

    @property
    def ok(self) -> bool:
        return (
            self.mismatch is None
            and self.symmetric
            and self.bottom_free
            and self.level_violation is None
            and self.margin_ok
            and self.agreement
        )

    def raise_for_status(self):
        if self.asymmetry is not None:
            raise self.asymmetry
        if self.mismatch is not None:
            raise self.mismatch
        if self.bottom_at is not None:
            raise StructuralError(f"bottom appears at a{self.bottom_at}")
        if self.level_violation is not None:
            raise StructuralError(f"letter of the wrong level at a{self.level_violation}")
        if not self.margin_ok:
            raise StructuralError(f"content came within {self.min_margin} cells of the wall")
        if not self.agreement:
            raise VerdictDisagreement(
                f"scan gave {self.verdict}, expected certification at {self.expected_certified}"
            )


def _letter_levels(system: DynamicalSystem) -> np.ndarray:
    """0..7 for code letters, -1 for zero, -2 for anything else"""
    levels = np.full(system.size, -2, dtype=np.int64)
    for letter in system.letters:
        if letter.role is Role.TYPE0:
            levels[letter.id] = 0
        elif letter.role is Role.PAIR:
            levels[letter.id] = letter.level
        elif letter.role is Role.ZERO:
            levels[letter.id] = -1
    return levels


def _expected_right(
    system: DynamicalSystem,
    meta: SuwMeta,
    content: Dict[int, Cell],
    width: int,
    overrides: Optional[Dict[int, int]] = None,
) -> np.ndarray:
    """Letters right of the separator for a cell map; ``overrides`` replaces single positions"""
    expected = np.full(width, system.zero, dtype=np.int64)
    for c, cell in content.items():
        for tag in range(TAGS):
            pos = 3 * c + tag
            if 0 <= pos < width:
                expected[pos] = meta.system_id(meta.tagged.letter(cell, tag))
    for pos, letter in (overrides or {}).items():
        if 0 <= pos < width:
            expected[pos] = letter
    return expected


def verify_suw(
    system: DynamicalSystem,
    meta: SuwMeta,
    machine: TuringMachine,
    word: Sequence[str],
    steps: int,
    n_max: int,
) -> SuwVerifyReport:
    """Develop ``n_max`` diagonals and decode diagonal dW + 8t for t <= steps"""
    if n_max < meta.diagonal(steps):
        raise ValueError(f"need at least {meta.diagonal(steps)} diagonals for {steps} steps")

    trace = run_trace(machine, word, max(steps, (n_max - meta.d_w) // 8))
    run = classify_trace(iter(trace), machine.halt, len(trace) - 1)
    t_neg = run.first_negative_move_step

    # tape right after the head left cell 0 to the left; the head is gone
    crossing: Optional[Tuple[Dict[int, Cell], Dict[int, int]]] = None
    if t_neg is not None:
        after = trace[t_neg]
        content = {c: Cell(s) for c, s in after.tape.items()}
        overrides: Dict[int, int] = {}
        if meta.crossing_rule == "read":
            read = trace[t_neg - 1].symbol_at(0, machine.blank)
            overrides[0] = meta.system_id(meta.tagged.letter(Cell(read), 0))
        crossing = (content, overrides)

    expected_certified = None
    if crossing is not None:
        content, overrides = crossing
        if not content and all(v == system.zero for v in overrides.values()):
            expected_certified = meta.diagonal(t_neg)
    elif run.uw_accept:
        expected_certified = meta.diagonal(run.steps + 1)

    verdict = scan_ultimately_zero(system, n_max)
    report = SuwVerifyReport(
        steps, n_max, run, verdict, expected_certified, meta.crossing_rule
    )

    levels = _letter_levels(system)
    bootstrap = np.zeros(system.size, dtype=bool)
    bootstrap[list(meta.bootstrap)] = True
    names = [letter.name for letter in system.letters]
    halted_cells = settled_cells(machine, trace[-1]) if run.halted else None
    last_t = min(steps, t_neg) if t_neg is not None else steps

    for diagonal in develop(system, n_max):
        n = diagonal.n
        if n < 2:
            continue
        cells = diagonal.cells
        interior = diagonal.interior

        if report.asymmetry is None:
            diff = np.flatnonzero(cells != cells[::-1])
            if diff.size:
                k = int(diff[0])
                report.asymmetry = AsymmetryAt(n - k, k)
                log.warning("development_asymmetric", i=n - k, j=k)

        if report.bottom_at is None and system.bottom is not None:
            hits = np.flatnonzero(interior == system.bottom)
            if hits.size:
                report.bottom_at = diagonal_cell(n, int(hits[0]) + 1)

        if report.level_violation is None:
            if n < meta.d_w:
                bad = np.flatnonzero(~bootstrap[interior])
            else:
                lv = levels[interior]
                bad = np.flatnonzero((lv != -1) & (lv != meta.diagonal_level(n)))
            if bad.size:
                report.level_violation = diagonal_cell(n, int(bad[0]) + 1)

        if n < meta.d_w or meta.diagonal_level(n):
            continue
        t = (n - meta.d_w) // 8

        nonzero = np.flatnonzero(interior != system.zero)
        margin = int(nonzero[0]) if nonzero.size else len(interior)
        report.min_margin = margin if report.min_margin is None else min(report.min_margin, margin)

        if t > last_t or report.mismatch is not None:
            continue
        overrides = None
        if t_neg is not None and t == t_neg:
            content, overrides = crossing
        elif t < len(trace):
            content = trace[t].cells(machine.blank)
        elif halted_cells is not None:
            content = halted_cells
        else:
            continue

        sep = meta.center + 4 * t
        if any(cells[k] != system.zero for k in (sep - 1, sep, sep + 1)):
            report.mismatch = MismatchAt(t, -1, "000", "separator overwritten")
            log.warning("verification_mismatch", reduction="suw", step=t, cell=-1)
            continue

        start = meta.base_index(t, 0)
        actual = cells[start:n]
        expected = _expected_right(system, meta, content, len(actual), overrides)
        diff = np.flatnonzero(expected != actual)
        report.matches.append(diff.size == 0)
        report.checked += 1
        if diff.size:
            k = int(diff[0])
            report.mismatch = MismatchAt(t, k // 3, names[expected[k]], names[actual[k]])
            log.warning("verification_mismatch", reduction="suw", step=t, cell=k // 3)

    log.info(
        "suw_verified",
        machine=machine.name,
        checked=report.checked,
        verdict=str(verdict),
        suw_accept=run.suw_accept,
        ok=report.ok,
    )
    return report


class SuwReduction:
    """SUW compiler bound to a configuration"""

    def __init__(self, config: Optional[QuarterplaneConfig] = None):
        self.config = config or QuarterplaneConfig()

    def compile(
        self, machine: TuringMachine, word: Sequence[str], crossing_rule: Optional[str] = None
    ) -> Tuple[DynamicalSystem, SuwMeta]:
        return compile_suw(
            machine,
            word,
            crossing_rule or self.config.verification.crossing_rule,
            self.config.development.dense_table_limit,
        )

    def verify(
        self,
        machine: TuringMachine,
        word: Sequence[str],
        steps: Optional[int] = None,
        diagonals: Optional[int] = None,
        crossing_rule: Optional[str] = None,
    ) -> SuwVerifyReport:
        system, meta = self.compile(machine, word, crossing_rule)
        steps = self.config.verification.suw_steps if steps is None else steps
        diagonals = diagonals or max(meta.diagonal(steps), self.config.verification.suw_diagonals)
        return verify_suw(system, meta, machine, word, steps, diagonals)
