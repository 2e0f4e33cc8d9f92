"""Exception types shared across the package."""


class WellconnError(Exception):
    """Base class for all package errors."""


class ContractViolation(WellconnError, ValueError):
    """An operation was called with arguments outside its contract."""


class ParseError(WellconnError, ValueError):
    """Malformed input file. ``lineno`` is 1-based when known."""

    def __init__(self, message, lineno=None, source=None):
        self.lineno = lineno
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}:"
        self.message = message
        super().__init__(f"{where} {message}".strip() if where else message)

    def __reduce__(self):
        return (type(self), (self.message, self.lineno, self.source))


class TreatmentError(WellconnError):
    """A treatment could not complete (e.g. a reclusterer broke its contract)."""


class ExternalCommandError(TreatmentError):
    """An external reclusterer command failed, timed out or wrote bad output."""

    def __init__(self, message, returncode=None, stderr=""):
        self.returncode = returncode
        self.stderr = stderr
        super().__init__(message)

    def __reduce__(self):
        return (type(self), (self.args[0], self.returncode, self.stderr))


class FetchError(WellconnError):
    """Dataset download, lookup or cache verification failed."""
