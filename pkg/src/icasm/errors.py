"""Exception hierarchy shared across the package."""


class ICASMError(Exception):
    """Base class for all errors raised by this package."""


class HFError(ICASMError):
    """Malformed hereditarily finite object or illegal operation on one."""


class StructureError(ICASMError):
    """Bad signature, input structure, or structure file."""


class ParseError(ICASMError):
    """Syntax or name-resolution error in a program text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(where + message)


class EvaluationError(ICASMError):
    """Runtime error while evaluating a term or rule."""


class ExplosionError(EvaluationError):
    """The number of update sets exceeded the configured cap."""


class SearchLimitError(ICASMError):
    """A brute-force search was asked to run beyond its size limit."""


class SupportError(ICASMError):
    """The intersection of qualifying supports failed to be a support."""
