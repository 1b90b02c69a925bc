"""Spectra and radial eigenfunctions of the singular oscillator
V(r) = -V0/r^2 + g r^2 for every self-adjoint extension parameter tau.

tau is a float; ``math.inf`` stands for the additional branch.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
