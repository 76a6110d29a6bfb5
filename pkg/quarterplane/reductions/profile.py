"""
Quarterplane Compile Profiling

Times both compilers over growing input words and fits log-log growth
exponents against the seeded diagonal index.
"""

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import structlog

from ..core.turing import TuringMachine
from .suw import compile_suw
from .uw import compile_uw

log = structlog.get_logger(__name__)

REDUCTIONS = ("uw", "suw")
MAX_EXPONENT = 3.0


@dataclass
class ProfileRow:
    length: int
    seconds: float
    letters: int
    rules: int
    d_w: int
    level7: Optional[int] = None
    windows: Optional[int] = None


@dataclass
class ProfileReport:
    reduction: str
    machine: str
    rows: List[ProfileRow] = field(default_factory=list)

    def exponents(self) -> Dict[str, float]:
        """Slopes of log(letters), log(rules) and log(seconds) against log(dW)"""
        if len(self.rows) < 2:
            return {}
        x = np.log([row.d_w for row in self.rows])
        series = {
            "letters": [row.letters for row in self.rows],
            "rules": [row.rules for row in self.rows],
            "seconds": [max(row.seconds, 1e-6) for row in self.rows],
        }
        return {
            name: float(np.polyfit(x, np.log(values), 1)[0]) for name, values in series.items()
        }

    @property
    def polynomial(self) -> bool:
        slopes = self.exponents()
        return all(slopes.get(key, 0.0) <= MAX_EXPONENT for key in ("letters", "rules"))

    @property
    def level7_bounded(self) -> bool:
        return all(
            row.level7 is None or row.windows is None or row.level7 <= row.windows
            for row in self.rows
        )


def profile_word(machine: TuringMachine, length: int) -> Sequence[str]:
    """Input of the given length over the first non-blank symbol"""
    if length and len(machine.alphabet) < 2:
        raise ValueError("machine has no non-blank symbol to build words from")
    return tuple(machine.alphabet[1:2]) * length


def profile_compile(
    machine: TuringMachine,
    lengths: Sequence[int],
    reduction: str = "uw",
    crossing_rule: str = "read",
) -> ProfileReport:
    if reduction not in REDUCTIONS:
        raise ValueError(f"reduction must be one of {REDUCTIONS}")

    report = ProfileReport(reduction, machine.name)
    for length in lengths:
        word = profile_word(machine, length)
        started = time.perf_counter()
        if reduction == "uw":
            system, meta = compile_uw(machine, word)
            level7 = windows = None
        else:
            system, meta = compile_suw(machine, word, crossing_rule)
            level7, windows = meta.level7_terms, meta.windows
        elapsed = time.perf_counter() - started

        report.rows.append(
            ProfileRow(length, elapsed, system.size, len(system.table), meta.d_w, level7, windows)
        )
        log.debug("compile_profiled", reduction=reduction, length=length, seconds=elapsed)

    log.info("profile_finished", reduction=reduction, exponents=report.exponents())
    return report
