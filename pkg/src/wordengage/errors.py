"""Exception hierarchy shared by every pipeline stage.

The CLI maps :class:`InputError` to exit code 1 and
:class:`DegenerateDataError` to exit code 2.
"""


class WordEngageError(Exception):
    """Base class for all package errors."""


class InputError(WordEngageError, ValueError):
    """Malformed or otherwise unusable input."""


class LexiconError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CorpusError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InsufficientTextError(InputError):
    """A user has too few tokens to be scored."""


class DegenerateDataError(WordEngageError, ValueError):
    """Data is well formed but statistically unusable (no variance, one class, ...)."""
