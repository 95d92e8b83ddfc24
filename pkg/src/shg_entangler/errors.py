"""Exception types raised across the package."""


class ShgError(Exception):
    """Base class for all package errors."""


class DegenerateHarmonicLoss(ShgError, ValueError):
    """Harmonic loss is zero, so the oscillation threshold vanishes and the
    pump parameter is undefined."""


class BranchUnavailable(ShgError, ValueError):
    """An asymmetric branch was requested below threshold."""


class InvalidSteadyState(ShgError, ValueError):
    """A steady state does not satisfy the stationary equations."""


class StepTooLarge(ShgError, ValueError):
    pass


class Diverged(ShgError, ArithmeticError):
    pass


class SingularSystem(ShgError, ArithmeticError):
    """The frequency-domain linear system is rank deficient."""


class NonFiniteSample(ShgError, ArithmeticError):
    pass


class InsufficientData(ShgError, ValueError):
    pass


class ConfigError(ShgError, ValueError):
    pass
