"""Shared exception types.

Everything user-facing raises a :class:`ValidationError` subclass so the CLI
can map bad inputs to exit code 1 and genuine I/O failures (plain OSError)
to exit code 2.
"""


class ValidationError(ValueError):
    """Input violates a documented contract."""


class ConfigurationError(ValidationError):
    """A configuration value or file is unusable."""


class BucketTooLargeError(ValidationError):
    """A length bucket exceeds the pairwise-distance cap; shard the input."""


class EmptyProfileError(ValidationError):
    """No distances available to build a histogram from."""


class UndefinedMetricError(ValidationError):
    """Metric has no defined value (e.g. empty reference)."""


class TraceReplayError(ValidationError):
    """A noise trace does not replay onto its clean sentence."""
