"""Exception hierarchy.  CLI exit codes key off these classes."""


class EvanesimError(Exception):
    """Base class for all library errors."""


class DomainError(EvanesimError, ValueError):
    """Input outside the physical regime an operation is defined for."""


class ResonanceError(DomainError):
    """Transfer matrix has m22 == 0 (pole of the scattering amplitudes)."""


class GridError(DomainError):
    """Frequency grid too coarse or not covering the required band."""


class ConfigError(EvanesimError, ValueError):
    """Invalid run configuration.

    ``code`` is one of ``syntax``, ``unknown_key``, ``out_of_range``,
    ``bad_value``; ``key``, ``line`` and ``column`` are set when known.
    """

    def __init__(self, message, *, code, key=None, line=None, column=None):
        super().__init__(message)
        self.code = code
        self.key = key
        self.line = line
        self.column = column

    def as_dict(self):
        return {
            "error": self.code,
            "message": str(self),
            "key": self.key,
            "line": self.line,
            "column": self.column,
        }
