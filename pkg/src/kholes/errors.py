"""Exception hierarchy shared by every kholes module."""


class KHolesError(Exception):
    """Base class for all errors raised by this package."""


class GeneralPositionError(KHolesError):
    """A point set has duplicate points or three collinear points."""


class CollinearInput(GeneralPositionError):
    """An orientation determinant was exactly zero."""


class CoordinateOverflow(KHolesError):
    """A coordinate left the supported range |c| <= 2**26."""


class CenterNotOnHull(KHolesError):
    """A radial order was requested about a point interior to the hull."""


class PreconditionViolated(KHolesError):
    pass


class NoCandidate(KHolesError):
    """No admissible 5-hole for a block; indicates a bug upstream."""


class BudgetExceeded(KHolesError):
    pass


class RangeTooSmall(KHolesError):
    pass


class UnknownSuite(KHolesError, KeyError):
    pass


class PointSetFormatError(KHolesError, ValueError):
    pass
