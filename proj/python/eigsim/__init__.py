"""Steady-state optical response of a standing-wave-coupled three-level vapor.

The package wraps the C++ core: harmonic lineshape solver, Doppler
averaging, phase matching, coupled-mode Bragg reflection, and the sweep
engine. All rates, Rabi frequencies and detunings are angular frequencies
in rad/s; lengths are meters.
"""

from ._eigsim import *  # noqa: F401,F403
from ._eigsim import __version__  # noqa: F401
