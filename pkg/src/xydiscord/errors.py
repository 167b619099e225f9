"""Exception types raised by the package."""


class XYDiscordError(Exception):
    """Base class for all package errors."""


class QuadratureFailure(XYDiscordError, ArithmeticError):
    """Adaptive integration did not reach the requested tolerance."""


class DistanceTooLarge(XYDiscordError, ValueError):
    """Site separation exceeds the Toeplitz determinant cap."""


class NotPositive(XYDiscordError, ValueError):
    """Assembled density matrix has a significantly negative eigenvalue."""


class StepTooLarge(XYDiscordError, ValueError):
    """Finite-difference step is not smaller than the grid spacing."""


class WindowTooNarrow(XYDiscordError, ValueError):
    """Lambda window cannot bracket the critical point."""
