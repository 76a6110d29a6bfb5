"""
Quarterplane Reductions
Halting instances compiled into dynamical systems
"""

from .suw import SuwReduction
from .uw import UwReduction

__all__ = [
    "UwReduction",
    "SuwReduction",
]
