"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid or inconsistent configuration (bad mode name, conflicting options)."""


class DataFormatError(ValueError):
    """Malformed input data; message carries the offending line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericsError(RuntimeError):
    """Training produced a non-finite loss or parameter value."""
