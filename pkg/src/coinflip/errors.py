class CoinflipError(Exception):
    """Base class for errors raised by this package."""


class SizingError(CoinflipError, ValueError):
    """Register too large for the requested construction."""


class ConvergenceError(CoinflipError, ArithmeticError):
    """An iterative solver hit its iteration cap."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConsistencyError(CoinflipError, ArithmeticError):
    """Two independent routes to the same quantity disagree."""


class StrategyError(CoinflipError, ValueError):
    """A cheating strategy does not define a valid measurement."""


class AnalyticPathError(CoinflipError, ArithmeticError):
    """The closed-form two-qubit route produced no admissible root."""


class FairPointNotFound(CoinflipError, ArithmeticError):
    def __init__(self, message, g_low=None, g_high=None):
        super().__init__(message)
        self.g_low = g_low
        self.g_high = g_high


class RunawayError(CoinflipError, RuntimeError):
    """A simulated run exceeded the restart cap."""


class PrimalRecoveryWarning(UserWarning):
    """Recovered primal does not close the duality gap."""
