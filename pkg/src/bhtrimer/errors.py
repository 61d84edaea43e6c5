"""Exception hierarchy. The CLI maps each category to its own exit code."""


class TrimerError(Exception):
    exit_code = 1


class InvalidParameterError(TrimerError, ValueError):
    exit_code = 2


class ConvergenceError(TrimerError, RuntimeError):
    exit_code = 5

    def __init__(self, message, worst_residual=float("nan")):
        super().__init__(message)
        self.worst_residual = worst_residual


class InsufficientDataError(TrimerError, ValueError):
    exit_code = 5


class UnsupportedCaseError(TrimerError, ValueError):
    exit_code = 5


class ConfigError(TrimerError, ValueError):
    exit_code = 2

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class StateSpecError(TrimerError, ValueError):
    exit_code = 2


class CacheError(TrimerError):
    exit_code = 3


class ResolutionError(TrimerError, LookupError):
    exit_code = 4
