"""Exception hierarchy shared by every module."""


class WittError(Exception):
    """Base class for all library errors."""


class MalformedNumber(WittError, ValueError):
    pass


class ZeroDenominator(WittError, ZeroDivisionError):
    pass


class NoModuleFamily(WittError):
    """Raised when an operation needs a module family but the algebra is pure Witt."""


class ForeignBasisSymbol(WittError):
    """A basis symbol that does not belong to the algebra it was used with."""


class WindowTooSmall(WittError):
    pass


class NotASubspace(WittError):
    pass


class DomainMismatch(WittError):
    pass


class InvalidAutForAlgebra(WittError):
    pass


class InvalidDerForAlgebra(WittError):
    pass


class DuplicateCentralName(WittError):
    pass
