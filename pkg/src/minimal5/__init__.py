"""Explicit conformal minimal immersions into R^5 from holomorphic null curves."""
from .errors import BranchPoint, DegenerateSeedWarning, DegreeCapError, FrameDiscontinuity
from .holomorphic import HoloPoly
from .monomial_family import MonomialSeed
from .seed_family import SeedData
from .weierstrass import Immersion, NullCurve, WeierstrassData

__version__ = "0.1.0"
