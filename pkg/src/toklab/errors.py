"""Exception types raised across the package."""


class ToklabError(Exception):
    """Base class for all package errors."""


class CorpusError(ToklabError):
    """Invalid corpus data: parse failures, duplicate ids, missing fields."""


class ConfigError(ToklabError):
    """Invalid configuration: bad schema, bad pattern, closure violations."""


class NotFittedError(ToklabError):
    """transform() called on a preprocessor that was never fitted."""


class ModelFormatError(ToklabError):
    """Model or preprocessor file is corrupt or has an unsupported version."""


class LeakageError(ToklabError):
    """An operation restricted to the test split saw a training document."""
