class PostOCRError(Exception):
    """Base class for errors raised by this package."""


class DataError(PostOCRError):
    """Malformed or insufficient input data."""


class ConfigError(PostOCRError):
    """Inconsistent configuration or incompatible model files."""
