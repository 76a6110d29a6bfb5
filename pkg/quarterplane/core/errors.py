"""
Quarterplane Errors

Construction bugs raise. Verification findings are stored on reports and
raised on demand through ``raise_for_status()``.
"""

from typing import Any, Optional, Tuple


class QuarterplaneError(Exception):
    """Base class for every error raised by quarterplane"""


class StructuralError(QuarterplaneError):
    """A system, dump or sidecar file is malformed or references unknown ids"""


class MachineFormatError(QuarterplaneError):
    """A Turing machine description or input word is invalid"""


class ConflictingRule(QuarterplaneError):
    """Two different images were assigned to the same ordered pair"""

    def __init__(self, pair: Tuple[int, int], existing: int, new: int):
        self.pair = pair
        self.existing = existing
        self.new = new
        super().__init__(f"conflicting rule for pair {pair}: {existing} vs {new}")


class SymmetryViolation(QuarterplaneError):
    """A table flagged symmetric has f(a,b) != f(b,a)"""

    def __init__(self, pair: Tuple[int, int], message: Optional[str] = None):
        self.pair = pair
        super().__init__(message or f"rule table is not symmetric at pair {pair}")


class TwoHeads(QuarterplaneError):
    """More than one cell of a local update carries a machine state"""


class LevelMismatch(QuarterplaneError):
    """Code terms of different levels were combined"""


class CollisionFound(QuarterplaneError):
    """Two windows that are not reversals of each other share a code"""

    def __init__(self, first: Tuple[int, ...], second: Tuple[int, ...]):
        self.first = first
        self.second = second
        super().__init__(f"code collision between {first} and {second}")


class PhaseError(QuarterplaneError):
    """A tagged letter sits at a position its tag does not allow"""


class TagInconsistency(PhaseError):
    """A window admits no consistent reading as simulation content"""


class MismatchAt(QuarterplaneError):
    """A decoded diagonal disagrees with the machine trace"""

    def __init__(self, step: int, cell: int, expected: Any = None, actual: Any = None):
        self.step = step
        self.cell = cell
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"mismatch at step {step}, cell {cell}: expected {expected!r}, decoded {actual!r}"
        )


class AsymmetryAt(QuarterplaneError):
    """A development cell differs from its transpose"""

    def __init__(self, i: int, j: int):
        self.i = i
        self.j = j
        super().__init__(f"a({i},{j}) != a({j},{i})")


class DivergenceAt(QuarterplaneError):
    """Table-driven and polynomial-driven developments disagree"""

    def __init__(
        self, i: int, j: int, expected: Optional[int] = None, actual: Optional[int] = None
    ):
        self.i = i
        self.j = j
        self.expected = expected
        self.actual = actual
        super().__init__(f"developments diverge at a({i},{j}): {expected} vs {actual}")


class NonPrimeModulus(QuarterplaneError):
    """Field arithmetic was requested over a non-prime modulus"""

    def __init__(self, p: int):
        self.p = p
        super().__init__(f"modulus {p} is not prime")


class ModulusTooSmall(QuarterplaneError):
    """The field has fewer elements than the alphabet to embed"""

    def __init__(self, p: int, size: int):
        self.p = p
        self.size = size
        super().__init__(f"modulus {p} cannot embed an alphabet of {size} letters")


class VerdictDisagreement(QuarterplaneError):
    """The zero scan and the machine's acceptance condition disagree"""
