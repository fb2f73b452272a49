"""Exception types shared across the package."""


class ToricountError(Exception):
    """Base class for all structured errors raised by this package."""


# fan validation
class MalformedCone(ToricountError):
    pass


class NotSmooth(ToricountError):
    pass


class NotComplete(ToricountError):
    pass


class PreconditionViolated(ToricountError):
    pass


# cones / integrals
class NotPointed(ToricountError):
    pass


class DualNotPointed(ToricountError):
    pass


class DivergentIntegral(ToricountError):
    pass


# multiplicity sets
class NotFinitelyGenerated(ToricountError):
    pass


# pairs / invariants
class NotQuasiProper(ToricountError):
    pass


class InfeasibleLP(ToricountError):
    pass


class NonPositiveAlpha(ToricountError):
    pass


class DivergentAlpha(ToricountError):
    pass


# constants
class NonSummable(ToricountError):
    pass


class DivergentProduct(ToricountError):
    pass


class OutsideRegion(ToricountError):
    pass


class InfiniteIndex(ToricountError):
    pass


# counting
class UnboundedCoordinate(ToricountError):
    pass


class BudgetExceeded(ToricountError):
    pass


class UnsupportedFan(ToricountError):
    pass


# cli / config
class ConfigError(ToricountError):
    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
