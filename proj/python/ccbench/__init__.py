"""Python bindings for the ccbench C++ core."""

from ._ccbench import *  # noqa: F401,F403
from ._ccbench import __doc__  # noqa: F401

__version__ = "0.1.0"
