"""Numerical laboratory for area-preserving and reversible annulus maps.

The package wraps the C++ core: map families given through lifts, rotation
number estimation, gcd-filtered periodic orbit search, symmetry-line methods
for reversible maps, and the Henon-Heiles Poincare return map.
"""

from ._annulab import *  # noqa: F401,F403
from ._annulab import __version__  # noqa: F401
