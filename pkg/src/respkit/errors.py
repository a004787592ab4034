"""Exception hierarchy shared across the toolkit."""


class RespkitError(Exception):
    """Base class for all toolkit errors."""


class ParseError(RespkitError):
    """A corpus file could not be parsed; carries path and line number."""

    def __init__(self, message, path=None, line_no=None):
        self.path = path
        self.line_no = line_no
        loc = f"{path}:{line_no}: " if path is not None else ""
        super().__init__(f"{loc}{message}")


class ValidationError(RespkitError):
    """Loaded data violates a structural invariant (e.g. dangling sentence id)."""


class RequestValidationError(RespkitError):
    """A generation request is missing a field its setting requires."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(message)


class SchemaError(RespkitError):
    """Structured provider output failed schema validation; raw payload retained."""

    def __init__(self, message, raw=None):
        self.raw = raw
        super().__init__(message)


class ProviderError(RespkitError):
    """A provider call failed after the configured retries."""

    def __init__(self, message, attempts=1):
        self.attempts = attempts
        super().__init__(message)


class ProtocolError(ProviderError):
    """The provider answered, but not with the expected payload shape."""


class UndefinedMetricError(RespkitError):
    """The metric is undefined for this input (e.g. zero word mass, no edits)."""


class InsufficientDataError(RespkitError):
    """Not enough samples to compute the requested statistic."""
