"""
Quarterplane - Dynamical Systems with Double Recursion

Develops finite systems into their quarter-plane carpets, compiles halting
instances into such systems and checks the simulations against the machine.
"""

__version__ = "1.0.0"
__license__ = "MIT"

from .core.config import QuarterplaneConfig
from .core.dynsys import DynamicalSystem, develop, scan_ultimately_zero
from .core.turing import TuringMachine, run_classify
from .reductions import SuwReduction, UwReduction

__all__ = [
    "QuarterplaneConfig",
    "DynamicalSystem",
    "develop",
    "scan_ultimately_zero",
    "TuringMachine",
    "run_classify",
    "UwReduction",
    "SuwReduction",
]
