"""Anti-jamming analysis for mode-frequency hopping cognitive radio links.

The package pairs closed-form expressions for sensing false alarm, outage,
and link capacity under hostile jamming with numeric-integration oracles and
a seeded Monte Carlo simulator of the slotted hopping protocol, so every
formula can be checked by two independent routes.
"""

from modehop.channel import FadingDraw, SystemParams
from modehop.specfun import ConvergenceError, QuadratureSpec

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "FadingDraw",
    "QuadratureSpec",
    "SystemParams",
    "__version__",
]
