"""Exception types shared across the package."""


class TVarError(Exception):
    """Base class for all domain errors raised by this package."""


class IntersectionNotFace(TVarError):
    """Two cells of a would-be complex overlap improperly."""


class DimensionMismatch(TVarError):
    """A cell does not have the dimension the operation requires."""


class NotAFacet(TVarError):
    """The second argument is not a one-step coface of the first."""


class MarkedCone(TVarError):
    """Operation requested on a marked cone where only unmarked ones are allowed."""


class MarkedFan(TVarError):
    """Operation requires a contraction-free fan (no marked cones)."""


class UnbalancedInput(TVarError):
    """The pairing received a weight that fails the balancing conditions."""


class MissingStabilizer(TVarError):
    """Marked cones are present but no stabilizer index was supplied."""


class NotTwoPoints(TVarError):
    """The toric cross-check only exists for exactly two marked points."""


class NonLinearOnCone(TVarError):
    """Per-cone data does not glue to a piecewise linear function."""


class UnsupportedMarking(TVarError):
    """A marked neighbor whose recession cone has smaller dimension than the
    cell itself; the pushforward class has no supported expansion."""
