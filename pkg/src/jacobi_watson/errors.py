"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class DegenerateInputError(ValueError):
    """An input is degenerate (zero-mass interval, empty grid, and so on)."""


class RegimeError(ValueError):
    """The parameters are outside the regime where the formula is valid."""


class RegionError(ValueError):
    """The evaluation point is outside the convergence region of a representation."""


class SingularEvaluationError(ValueError):
    """Evaluation requested at a point where the quantity is singular."""


class ConvergenceError(RuntimeError):
    """An iterative computation failed to converge within its budget."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics
