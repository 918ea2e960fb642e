"""Exception hierarchy shared by all btiepi components."""


class BtiepiError(Exception):
    """Base class for every error raised by btiepi."""


class DomainError(BtiepiError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConfigurationError(BtiepiError):
    """A cost model, instance or command was configured inconsistently."""


class CapExceededError(BtiepiError):
    """An enumeration was requested beyond its hard cap."""

    def __init__(self, what: str, requested: int, cap: int) -> None:
        super().__init__(f"{what} refused: requested {requested} exceeds cap {cap}")
        self.what = what
        self.requested = requested
        self.cap = cap


class ModelError(BtiepiError):
    """A model references undeclared variables or has inconsistent dimensions."""


class LPFormatError(BtiepiError):
    """The LP text could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None) -> None:
        where = f" (line {line_number})" if line_number is not None else ""
        super().__init__(f"{message}{where}")
        self.line_number = line_number


class SolverError(BtiepiError):
    """The LP or MIP solver could not produce a usable result."""
