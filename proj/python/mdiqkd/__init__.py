"""Secret key rates for measurement-device-independent QKD with heralded
quantum memories.

Analytic rate formulas for single-photon and decoy-state weak-coherent-pulse
sources, cross-validated against a Fock-space linear-optics oracle and a
seeded discrete-event Monte Carlo simulation. All computation lives in the
compiled extension; this package re-exports it.
"""

from mdiqkd._core import *  # noqa: F401,F403
from mdiqkd._core import __version__  # noqa: F401
