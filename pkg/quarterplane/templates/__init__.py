"""
Quarterplane Templates
Sample machines for tests, demos and the command line
"""

from .machine_suite import MachineSuite

__all__ = ["MachineSuite"]
