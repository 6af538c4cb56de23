"""Exception hierarchy shared by the numerical modules, the CLI and the service."""


class StrohhackerError(Exception):
    """Base class for every error raised by this package."""


class DomainError(StrohhackerError, ValueError):
    """Parameters lie outside the range a theorem or formula is stated for."""


class SingularDenominator(DomainError):
    pass


class Infeasible(DomainError):
    """The T37 feasibility condition fails; exits with its own code."""


class NotNormalized(StrohhackerError, ValueError):
    pass


class ZeroLeadingCoefficient(StrohhackerError, ZeroDivisionError):
    pass


class OutOfDisk(StrohhackerError, ValueError):
    pass


class PoleHit(StrohhackerError, ZeroDivisionError):
    pass


class UnitVanishes(StrohhackerError, ValueError):
    pass


class ClassMismatch(StrohhackerError, ValueError):
    pass


class NotLocallyValent(StrohhackerError, ValueError):
    pass
