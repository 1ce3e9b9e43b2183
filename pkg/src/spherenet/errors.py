"""Shared exception types."""


class DomainError(ValueError):
    """A parameter lies outside the domain where a formula is defined."""


class DimensionError(ValueError):
    """Mismatched sphere or matrix dimensions."""


class CapacityError(RuntimeError):
    """Full enumeration would exceed the configured leaf cap."""


class ResolutionError(ValueError):
    """Quadrature grid too coarse for the requested degree."""


class NetFormatError(ValueError):
    """Malformed net file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
