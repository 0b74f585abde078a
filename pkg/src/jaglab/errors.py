"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed user input: files, family specs, programs, parameters."""


class GraphFormatError(InputError):
    """Graph file violates the text format or its invariants."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ProgramError(InputError):
    """Pebble program rejected by the parser or its static checks."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CapExceeded(RuntimeError):
    """A configured size cap would be exceeded by the requested construction."""


class ResourceLimitExceeded(RuntimeError):
    """A search hit its configuration or run-length budget before deciding."""


class DiagnosticError(RuntimeError):
    """A caller-supplied assumption (e.g. traversability of an automaton) failed."""
