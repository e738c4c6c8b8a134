"""Exceptions raised by the Dynamic Transfer Library."""


class ContractViolation(ValueError):
    """Raised when an operation is called outside its preconditions."""

    def __init__(self, message: str) -> None:
        """Raise contract violation."""
        self.message = message
        super().__init__(self.message)


class DomainError(ContractViolation):
    """Raised when a decision vector leaves the problem's box.

    Attributes:
        dimension -- zero-based index of the first violating variable
        value -- the offending value
        bounds -- (lower, upper) of that variable
    """

    def __init__(self, dimension: int, value: float, bounds: tuple[float, float]) -> None:
        """Raise out of bounds error."""
        self.dimension = dimension
        self.value = value
        self.bounds = bounds
        super().__init__(
            f"x[{dimension}]={value!r} outside [{bounds[0]}, {bounds[1]}]"
        )


class PerfectHypothesis(Exception):
    """Raised when a weak hypothesis reproduces every training target."""


class UnknownProblem(KeyError):
    """Raised when a problem name is not in the registry."""

    def __init__(self, name: str) -> None:
        """Raise unknown problem."""
        self.name = name
        self.message = f"Unknown problem '{name}'"
        super().__init__(self.message)


class UnknownOptimizer(KeyError):
    """Raised when an optimizer name is not available."""

    def __init__(self, name: str, message: str | None = None) -> None:
        """Raise unknown optimizer."""
        self.name = name
        self.message = message or f"Unknown optimizer '{name}'"
        super().__init__(self.message)
