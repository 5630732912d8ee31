"""Exception hierarchy shared by all modules."""


class BellScatterError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BellScatterError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class NotHermitian(DomainError):
    pass


class NotUnitary(DomainError):
    pass


class ZeroState(DomainError):
    """The coefficient matrix of a two-photon state vanishes."""


class GainMedium(DomainError):
    """A transmission eigenvalue exceeds one: the medium amplifies."""


class SingularChannel(DomainError):
    """The smaller transmission eigenvalue is zero, so the ratio diverges."""


class FullyBlocked(DomainError):
    """No photon pair survives the two media (normalization Z vanishes)."""


class ConsistencyError(BellScatterError, ArithmeticError):
    """An analytic result left its allowed range by more than rounding."""
