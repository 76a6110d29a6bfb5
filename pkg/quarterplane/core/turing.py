"""
Quarterplane Turing Machines

Deterministic single-tape machines on a two-way infinite tape. The head
starts on cell 0, a blank, and the input word occupies cells 1..n.
"""

from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import structlog

from .errors import MachineFormatError

log = structlog.get_logger(__name__)

MOVES = {"R": 1, "L": -1, "S": 0}
EMPTY_WORDS = ("", "-", "ε")


class Transition(NamedTuple):
    state: str
    symbol: str
    move: str


class Cell(NamedTuple):
    """Content of one tape cell as a simulation letter: symbol plus state when the head is here"""

    symbol: str
    state: Optional[str] = None

    @property
    def has_head(self) -> bool:
        return self.state is not None

    def label(self) -> str:
        return self.symbol if self.state is None else f"{self.symbol}@{self.state}"


@dataclass(frozen=True)
class TuringMachine:
    """
    Machine (Sigma, Q, q0, qs, delta). ``alphabet[0]`` is the blank.

    delta must be total on Sigma x (Q - {qs}) and undefined on qs.
    """

    alphabet: Tuple[str, ...]
    states: Tuple[str, ...]
    start: str
    halt: str
    delta: Mapping[Tuple[str, str], Transition]
    name: str = "machine"

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "delta", MappingProxyType(dict(self.delta)))

        if len(self.alphabet) < 1 or len(set(self.alphabet)) != len(self.alphabet):
            raise MachineFormatError("alphabet must be non-empty with distinct symbols")
        if len(set(self.states)) != len(self.states):
            raise MachineFormatError("states must be distinct")
        if self.start not in self.states:
            raise MachineFormatError(f"start state {self.start!r} is not a state")
        if self.halt not in self.states:
            raise MachineFormatError(f"halt state {self.halt!r} is not a state")

        for (state, symbol), tr in self.delta.items():
            if state == self.halt:
                raise MachineFormatError(f"halt state {state!r} must not have transitions")
            if state not in self.states or symbol not in self.alphabet:
                raise MachineFormatError(f"transition from unknown pair ({state}, {symbol})")
            if tr.state not in self.states or tr.symbol not in self.alphabet:
                raise MachineFormatError(f"transition ({state}, {symbol}) targets unknown {tr}")
            if tr.move not in MOVES:
                raise MachineFormatError(f"transition ({state}, {symbol}) has bad move {tr.move!r}")

        missing = [
            (state, symbol)
            for state in self.states
            if state != self.halt
            for symbol in self.alphabet
            if (state, symbol) not in self.delta
        ]
        if missing:
            raise MachineFormatError(f"transition function is not total; missing {missing}")

    @property
    def blank(self) -> str:
        return self.alphabet[0]

    def transition(self, state: str, symbol: str) -> Transition:
        return self.delta[(state, symbol)]

    def cells(self) -> List[Cell]:
        """Every simulation letter: plain symbols, then symbol/state pairs"""
        plain = [Cell(symbol) for symbol in self.alphabet]
        heads = [Cell(symbol, state) for state in self.states for symbol in self.alphabet]
        return plain + heads

    def check_word(self, word: Sequence[str]) -> Tuple[str, ...]:
        word = tuple(word)
        for symbol in word:
            if symbol == self.blank:
                raise MachineFormatError("input words must not contain the blank")
            if symbol not in self.alphabet:
                raise MachineFormatError(f"input symbol {symbol!r} is not in the alphabet")
        return word


@dataclass(frozen=True)
class Configuration:
    """Instantaneous description; the tape stores no blanks"""

    tape: Mapping[int, str]
    head: int
    state: str
    touched: Tuple[int, int]
    time: int = 0

    def symbol_at(self, cell: int, blank: str) -> str:
        return self.tape.get(cell, blank)

    @property
    def clean(self) -> bool:
        return not self.tape

    def cells(self, blank: str) -> Dict[int, Cell]:
        """Non-blank cells, with the head cell always present"""
        content = {cell: Cell(symbol) for cell, symbol in self.tape.items()}
        content[self.head] = Cell(self.symbol_at(self.head, blank), self.state)
        return content


@dataclass(frozen=True)
class Halted:
    """Result of stepping a configuration that is already in the halt state"""

    configuration: Configuration


def initial_configuration(machine: TuringMachine, word: Sequence[str]) -> Configuration:
    word = machine.check_word(word)
    tape = {i + 1: symbol for i, symbol in enumerate(word)}
    return Configuration(MappingProxyType(tape), 0, machine.start, (0, len(word)))


def step(machine: TuringMachine, config: Configuration) -> Union[Configuration, Halted]:
    """Apply delta once"""
    if config.state == machine.halt:
        return Halted(config)

    symbol = config.symbol_at(config.head, machine.blank)
    tr = machine.delta[(config.state, symbol)]

    tape = dict(config.tape)
    if tr.symbol == machine.blank:
        tape.pop(config.head, None)
    else:
        tape[config.head] = tr.symbol

    head = config.head + MOVES[tr.move]
    lo, hi = config.touched
    return Configuration(
        MappingProxyType(tape), head, tr.state, (min(lo, head), max(hi, head)), config.time + 1
    )


def iter_run(
    machine: TuringMachine, word: Sequence[str], max_steps: int
) -> Iterator[Configuration]:
    """Configurations at t = 0 .. halt or max_steps"""
    config = initial_configuration(machine, word)
    yield config
    while config.time < max_steps:
        nxt = step(machine, config)
        if isinstance(nxt, Halted):
            return
        config = nxt
        yield config


def run_trace(machine: TuringMachine, word: Sequence[str], max_steps: int) -> List[Configuration]:
    return list(iter_run(machine, word, max_steps))


@dataclass
class RunReport:
    """Bounded run summary and the two acceptance conditions"""

    halted: bool
    steps: int
    tape_clean_at_halt: bool
    visited_negative: bool
    first_negative_move_step: Optional[int] = None
    tape_clean_at_first_negative_move: Optional[bool] = None
    max_steps: int = 0

    @property
    def timed_out(self) -> bool:
        return not self.halted

    @property
    def uw_accept(self) -> bool:
        """Halts with a blank tape"""
        return self.halted and self.tape_clean_at_halt

    @property
    def suw_accept(self) -> bool:
        """Halts clean without visiting the negative side, or first goes negative on a clean tape"""
        if self.visited_negative:
            return bool(self.tape_clean_at_first_negative_move)
        return self.halted and self.tape_clean_at_halt


def classify_trace(configs: Iterator[Configuration], halt: str, max_steps: int = 0) -> RunReport:
    """Recompute a RunReport from recorded configurations"""
    last: Optional[Configuration] = None
    first_negative: Optional[Configuration] = None

    for config in configs:
        last = config
        if first_negative is None and config.head < 0:
            first_negative = config

    if last is None:
        raise ValueError("empty trace")

    halted = last.state == halt
    return RunReport(
        halted=halted,
        steps=last.time,
        tape_clean_at_halt=halted and last.clean,
        visited_negative=first_negative is not None,
        first_negative_move_step=None if first_negative is None else first_negative.time,
        tape_clean_at_first_negative_move=None if first_negative is None else first_negative.clean,
        max_steps=max_steps,
    )


def run_classify(machine: TuringMachine, word: Sequence[str], max_steps: int) -> RunReport:
    report = classify_trace(iter_run(machine, word, max_steps), machine.halt, max_steps)
    log.debug(
        "run_classified",
        machine=machine.name,
        steps=report.steps,
        halted=report.halted,
        uw_accept=report.uw_accept,
        suw_accept=report.suw_accept,
    )
    return report


def run_dense(
    machine: TuringMachine, word: Sequence[str], max_steps: int
) -> Tuple[RunReport, Dict[int, str]]:
    """Reference simulator on a growing list tape; returns the report and final non-blank tape"""
    word = machine.check_word(word)
    blank = machine.blank
    tape = [blank] + list(word)
    origin = 0  # list index of cell 0
    head, state, t = 0, machine.start, 0
    halted = state == machine.halt
    negative_step = None
    clean_at_negative = None

    while not halted and t < max_steps:
        index = head + origin
        symbol = tape[index]
        new_state, new_symbol, move = machine.delta[(state, symbol)]
        tape[index] = new_symbol
        head += MOVES[move]
        state = new_state
        t += 1
        if head + origin < 0:
            tape.insert(0, blank)
            origin += 1
        elif head + origin >= len(tape):
            tape.append(blank)
        if negative_step is None and head < 0:
            negative_step = t
            clean_at_negative = all(s == blank for s in tape)
        halted = state == machine.halt

    final = {i - origin: s for i, s in enumerate(tape) if s != blank}
    report = RunReport(
        halted=halted,
        steps=t,
        tape_clean_at_halt=halted and not final,
        visited_negative=negative_step is not None,
        first_negative_move_step=negative_step,
        tape_clean_at_first_negative_move=clean_at_negative,
        max_steps=max_steps,
    )
    return report, final


def split_word(text: str) -> Tuple[str, ...]:
    """``"ab"`` -> (a, b); commas separate multi-character symbols; ``-`` is the empty word"""
    text = text.strip()
    if text in EMPTY_WORDS:
        return ()
    if "," in text:
        return tuple(part.strip() for part in text.split(",") if part.strip())
    return tuple(text)


def parse_machine(text: str, name: str = "machine") -> TuringMachine:
    """
    Parse the machine file format::

        alphabet: _ a b
        states: q0 q1 qs
        start: q0
        halt: qs
        rule: q0 _ -> q1 a R
    """
    header: Dict[str, List[str]] = {}
    delta: Dict[Tuple[str, str], Transition] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        if not sep:
            raise MachineFormatError(f"line {lineno}: expected 'key: value'")

        if key == "rule":
            parts = value.split()
            if len(parts) != 6 or parts[2] != "->":
                raise MachineFormatError(f"line {lineno}: expected 'rule: q s -> q' s' D'")
            state, symbol, _, new_state, new_symbol, move = parts
            if (state, symbol) in delta:
                raise MachineFormatError(f"line {lineno}: duplicate rule for ({state}, {symbol})")
            delta[(state, symbol)] = Transition(new_state, new_symbol, move)
        elif key in ("alphabet", "states", "start", "halt"):
            if key in header:
                raise MachineFormatError(f"line {lineno}: duplicate {key!r}")
            header[key] = value.split()
        else:
            raise MachineFormatError(f"line {lineno}: unknown key {key!r}")

    for key in ("alphabet", "states", "start", "halt"):
        if not header.get(key):
            raise MachineFormatError(f"missing {key!r}")
    if len(header["start"]) != 1 or len(header["halt"]) != 1:
        raise MachineFormatError("start and halt take exactly one state")

    return TuringMachine(
        alphabet=tuple(header["alphabet"]),
        states=tuple(header["states"]),
        start=header["start"][0],
        halt=header["halt"][0],
        delta=delta,
        name=name,
    )


def dump_machine(machine: TuringMachine) -> str:
    lines = [
        f"alphabet: {' '.join(machine.alphabet)}",
        f"states: {' '.join(machine.states)}",
        f"start: {machine.start}",
        f"halt: {machine.halt}",
    ]
    for state in machine.states:
        for symbol in machine.alphabet:
            tr = machine.delta.get((state, symbol))
            if tr is not None:
                lines.append(f"rule: {state} {symbol} -> {tr.state} {tr.symbol} {tr.move}")
    return "\n".join(lines) + "\n"


def load_machine(path: Union[str, Path]) -> TuringMachine:
    path = Path(path)
    try:
        return parse_machine(path.read_text(encoding="utf-8"), name=path.stem)
    except MachineFormatError as e:
        raise MachineFormatError(f"{path}: {e}") from None
