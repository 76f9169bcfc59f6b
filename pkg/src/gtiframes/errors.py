"""Exception types shared across the package."""


class GtiError(Exception):
    """Base class for domain errors raised by this package."""


class StructureMismatchError(GtiError):
    """Two systems do not share group, channel count, layers or weights."""


class CapExceededError(GtiError):
    """A dense-matrix operation was requested above the configured size cap."""


class NotAFrameError(GtiError):
    """The lower frame bound is numerically zero."""


class NotAMultiplierError(GtiError):
    """The operator does not commute with translations, so it has no symbol."""


class UncertifiedPairError(GtiError):
    """A multiplexing call was made with a pair that is not certified dual."""


class ConfigError(GtiError):
    """A configuration file or document could not be interpreted."""
