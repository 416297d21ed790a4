"""Exception types shared across the package."""


class ZGUnitsError(Exception):
    """Base class for all package errors."""


class ParseError(ZGUnitsError):
    pass


class GroupMismatch(ZGUnitsError):
    pass


class ConductorMismatch(ZGUnitsError):
    pass


class NotCoprime(ZGUnitsError):
    pass


class NotAUnit(ZGUnitsError):
    pass


class HalfPowerUndefined(ZGUnitsError):
    pass


class BadParameters(ZGUnitsError):
    pass


class UnsupportedConductor(ZGUnitsError):
    pass


class PrecisionExhausted(ZGUnitsError):
    pass


class EnumerationBoundExceeded(ZGUnitsError):
    pass


class NotASublattice(ZGUnitsError):
    pass


class NotASubgroup(ZGUnitsError):
    pass


class NotInImage(ZGUnitsError):
    pass
