"""Exception hierarchy. Every error is a ValueError so callers can catch broadly."""


class RcwbError(ValueError):
    pass


class OverlappingBott(RcwbError):
    """Two classes sharing a Bott coordinate were summed."""


class DimensionMismatch(RcwbError):
    """Classes over different numbers of sphere factors."""


class BadBlock(RcwbError):
    pass


class StageMismatch(RcwbError):
    pass


class NotTwoSummand(RcwbError):
    pass


class RhoTooLarge(RcwbError):
    """No certificate exists for the requested rho at this precision."""


class Divergent(RcwbError):
    """The dimension/size ratio does not settle into a non-increasing tail."""


class BadRange(RcwbError):
    pass


class NotPSD(RcwbError):
    pass


class DimMismatch(RcwbError):
    pass


class RankDeficit(RcwbError):
    pass


class NotInvariant(RcwbError):
    pass


class NotHereditary(RcwbError):
    pass
