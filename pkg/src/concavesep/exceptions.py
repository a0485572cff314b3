"""Exception types raised across the package."""


class GraphFormatError(ValueError):
    """Malformed graph, point or matrix text input."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class EnumerationLimitError(ValueError):
    """An exhaustive enumeration was requested above the configured size limit."""


class ConvergenceError(RuntimeError):
    """An iterative numerical routine ran out of its iteration budget."""


class InfeasibleError(ValueError):
    """A point or instance falls outside the region an operation requires."""


class PropertyViolation(AssertionError):
    """A structural claim that is checked at runtime turned out false."""

    def __init__(self, message, evidence=None):
        self.evidence = evidence
        super().__init__(message)
