"""Exact combinatorial intersection theory of complete rational
complexity-one torus varieties.

The package manipulates the polyhedral shadow of such a variety: a family
of complete polyhedral complexes over marked points of the projective
line, sharing one recession fan.  On top of that it provides Cartier
support functions, balanced (generalized Minkowski) weights, the
divisor-weight intersection pairing, measures, top intersection numbers,
and an independent toric cross-check for two-point inputs.
"""

from .exceptions import (
    DimensionMismatch,
    IntersectionNotFace,
    MarkedCone,
    MarkedFan,
    MissingStabilizer,
    NonLinearOnCone,
    NotAFacet,
    NotTwoPoints,
    TVarError,
    UnbalancedInput,
    UnsupportedMarking,
)

__all__ = [
    "TVarError",
    "IntersectionNotFace",
    "DimensionMismatch",
    "NotAFacet",
    "MarkedCone",
    "MarkedFan",
    "UnbalancedInput",
    "MissingStabilizer",
    "NotTwoPoints",
    "NonLinearOnCone",
    "UnsupportedMarking",
]

__version__ = "0.1.0"
