"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration, e.g. an unsupported
    estimator/loss combination or a bad flag value."""


class DataError(ValueError):
    """Malformed input data or model file."""


class InternalError(RuntimeError):
    """A violated internal invariant; indicates a bug, not bad input."""
