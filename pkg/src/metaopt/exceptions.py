"""Exception hierarchy."""


class MetaoptError(Exception):
    pass


class InvalidArgumentError(MetaoptError, ValueError):
    """Raised when an argument violates an operation's precondition."""


class InvalidStateError(MetaoptError, RuntimeError):
    """Raised when an optimizer is stepped without an initialized state."""


class EvaluationError(MetaoptError, ArithmeticError):
    """Raised when an objective produces a non-finite value or hits a domain error."""

    def __init__(self, message, x=None, iteration=None):
        super().__init__(message)
        self.x = x
        self.iteration = iteration


class ConfigError(MetaoptError):
    """Raised on invalid run configuration.

    ``key`` and ``line`` locate the offending entry when known.
    """

    def __init__(self, message, key=None, line=None):
        super().__init__(message)
        self.key = key
        self.line = line

    def __str__(self):
        msg = super().__str__()
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.key is not None:
            where.append(f"key '{self.key}'")
        return f"{msg} ({', '.join(where)})" if where else msg
