"""Exception hierarchy shared by all modules."""


class GMTError(Exception):
    """Base class for domain errors raised by gmtkit."""


class StructureError(GMTError, ValueError):
    """Invalid indices, duplicated simplices or inconsistent dimensions."""


class DegenerateSimplexError(GMTError, ValueError):
    """A triangle with (numerically) zero area."""


class SolverIntegrityError(GMTError, RuntimeError):
    """The LP solver reported a status that cannot occur for a valid problem."""


class NonSimplePolygonError(GMTError, ValueError):
    pass


class NoSolutionError(GMTError, ValueError):
    pass


class InfeasibleStartError(GMTError, RuntimeError):
    pass


class ParseError(GMTError, ValueError):
    """Malformed input file. ``lineno`` is 1-based, or None for file-level errors."""

    def __init__(self, message, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)
