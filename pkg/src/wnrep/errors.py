"""Exception types shared across the package."""


class WnrepError(Exception):
    """Base class for all library errors."""

    code = "error"


class DimensionError(WnrepError):
    """Operands live in weight spaces of different ambient dimension."""

    code = "dimension-mismatch"


class ValidationError(WnrepError):
    """Input violates a construction precondition."""

    code = "invalid-input"


class EmptyModuleError(WnrepError):
    """A construction produced the zero module."""

    code = "empty-module"


class UnsupportedCaseError(WnrepError):
    """Configuration is outside the exactly supported family."""

    code = "unsupported-case"


class ParseError(WnrepError):
    """Descriptor text could not be parsed."""

    code = "parse-error"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
