"""Exception types shared across the package."""


class FeedbackError(Exception):
    """Base class for all errors raised by feedbackclf."""


class DataError(FeedbackError, ValueError):
    """Malformed or inconsistent input data.

    ``line`` is the 1-based line number in the offending file, when known.
    """

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip() if where else message)


class ConfigError(FeedbackError, ValueError):
    """Invalid configuration. ``key`` names the offending config entry."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


class NotFittedError(FeedbackError, RuntimeError):
    """A fitted dependency (tf-idf model, embeddings, ...) is missing."""
