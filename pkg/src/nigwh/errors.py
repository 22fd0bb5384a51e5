"""Exception types raised across the package."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class PoleError(ArithmeticError):
    """Evaluation at (or numerically on top of) a pole."""


class BranchError(DomainError):
    """Evaluation point lies on a branch cut / the support ray of a measure."""


class SingularSystemError(ArithmeticError):
    """Linear system is numerically singular at the working precision."""


class ConvergenceError(ArithmeticError):
    """An iterative method did not reach its accuracy target."""


class NonFiniteError(ArithmeticError):
    """An integrand produced a non-finite value away from the endpoints."""


class NotGGCError(DomainError):
    """The Thorin measure is signed, so no gamma-convolution approximation exists."""


class NonPositiveResidueError(ArithmeticError):
    """A Pade residue came out non-positive (precision exhausted)."""


class NegativeWeightError(ArithmeticError):
    """An exponential-mixture weight came out negative (precision exhausted)."""
