"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An input broke an operation's precondition (shape, Hermiticity, range)."""


class HorizonExceeded(RuntimeError):
    """A step would carry amplitude past the edge of the position window."""


class ConfigurationError(ValueError):
    """A run was configured inconsistently, e.g. horizon larger than the window."""


class QuadratureWarning(UserWarning):
    """Momentum-space quadrature did not settle when the grid was refined."""


class AsymptoticRegimeWarning(UserWarning):
    """An asymptotic formula was used where its normalization defect is large."""


class OptimizerWarning(UserWarning):
    """The measurement optimizer stopped before meeting its tolerance."""
