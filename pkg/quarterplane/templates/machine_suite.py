"""
Quarterplane Machine Suite
Sample Turing machines with known acceptance behaviour
"""

from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np

from ..core.turing import Transition, TuringMachine, dump_machine, parse_machine

SYMBOLS = ("_", "a", "b")
MOVES = ("R", "L", "S")

CLEAN = """\
# writes a right of the head, returns, erases it and halts
alphabet: _ a
states: q0 q1 q2 q3 qs
start: q0
halt: qs
rule: q0 _ -> q1 _ R
rule: q0 a -> q1 a R
rule: q1 _ -> q2 a L
rule: q1 a -> q2 a L
rule: q2 _ -> q3 _ R
rule: q2 a -> q3 a R
rule: q3 _ -> qs _ S
rule: q3 a -> qs _ S
"""

DIRTY = """\
# writes a and halts on the spot
alphabet: _ a
states: q0 qs
start: q0
halt: qs
rule: q0 _ -> qs a S
rule: q0 a -> qs a S
"""

RIGHT = """\
# walks right forever
alphabet: _ a
states: q0 qs
start: q0
halt: qs
rule: q0 _ -> q0 _ R
rule: q0 a -> q0 a R
"""

NEGCLEAN = """\
# walks left forever on a clean tape
alphabet: _ a
states: q0 qs
start: q0
halt: qs
rule: q0 _ -> q0 _ L
rule: q0 a -> q0 a L
"""

NEGDIRTY = """\
# writes a right of cell 0, returns and crosses to the negative side
alphabet: _ a
states: q0 q1 q2 q3 qs
start: q0
halt: qs
rule: q0 _ -> q1 _ R
rule: q0 a -> q1 a R
rule: q1 _ -> q2 a L
rule: q1 a -> q2 a L
rule: q2 _ -> q3 _ L
rule: q2 a -> q3 a L
rule: q3 _ -> q3 _ L
rule: q3 a -> q3 a L
"""


class MachineSuite:
    """Named sample machines and seeded random machines"""

    def __init__(self):
        self.machines = {
            "clean": {
                "description": "Halts after 4 steps with a blank tape, never moves left of cell 0",
                "uw_accept": True,
                "suw_accept": True,
                "text": CLEAN,
            },
            "dirty": {
                "description": "Writes a and halts immediately",
                "uw_accept": False,
                "suw_accept": False,
                "text": DIRTY,
            },
            "right": {
                "description": "Never halts, marches right",
                "uw_accept": False,
                "suw_accept": False,
                "text": RIGHT,
            },
            "negclean": {
                "description": "First move goes to cell -1 with a blank tape",
                "uw_accept": False,
                "suw_accept": True,
                "text": NEGCLEAN,
            },
            "negdirty": {
                "description": "Crosses to cell -1 at step 3 leaving a on cell 1",
                "uw_accept": False,
                "suw_accept": False,
                "text": NEGDIRTY,
            },
        }

    def available(self) -> Dict[str, Dict[str, Any]]:
        """Name -> description and expected acceptance"""
        return {
            name: {
                "description": info["description"],
                "uw_accept": info["uw_accept"],
                "suw_accept": info["suw_accept"],
            }
            for name, info in self.machines.items()
        }

    def names(self) -> List[str]:
        return list(self.machines)

    def get(self, name: str) -> TuringMachine:
        if name not in self.machines:
            raise ValueError(f"Unknown machine: {name}")
        return parse_machine(self.machines[name]["text"], name=name)

    def random_machine(self, seed: int, max_symbols: int = 3, max_states: int = 4) -> TuringMachine:
        """Total machine over 2..max_symbols symbols and 2..max_states states (halt included)"""
        rng = np.random.default_rng(seed)
        alphabet = SYMBOLS[: int(rng.integers(2, min(max_symbols, len(SYMBOLS)) + 1))]
        working = int(rng.integers(1, max_states))
        states = tuple(f"q{i}" for i in range(working)) + ("qs",)

        delta: Dict[Tuple[str, str], Transition] = {}
        for state in states[:-1]:
            for symbol in alphabet:
                delta[(state, symbol)] = Transition(
                    states[int(rng.integers(len(states)))],
                    alphabet[int(rng.integers(len(alphabet)))],
                    MOVES[int(rng.integers(len(MOVES)))],
                )
        return TuringMachine(alphabet, states, "q0", "qs", delta, name=f"random{seed}")

    def random_word(
        self, machine: TuringMachine, seed: int, max_length: int = 3
    ) -> Tuple[str, ...]:
        rng = np.random.default_rng(seed)
        symbols: Sequence[str] = machine.alphabet[1:]
        if not symbols:
            return ()
        length = int(rng.integers(0, max_length + 1))
        return tuple(symbols[int(rng.integers(len(symbols)))] for _ in range(length))

    def export(self, directory: Union[str, Path]) -> List[Path]:
        """Write every sample machine as ``<name>.tm``"""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        written = []
        for name in self.machines:
            path = directory / f"{name}.tm"
            path.write_text(dump_machine(self.get(name)), encoding="utf-8")
            written.append(path)
        return written
