"""Adapter error types."""


class AdapterError(Exception):
    """Base class for adapter failures."""


class ConfigError(AdapterError):
    """Invalid adapter configuration."""


class TranscriptError(AdapterError):
    """Transcript file missing, malformed, or lacking a required entry."""


class ResponseInvalidError(AdapterError):
    """Label response failed the identification-code check."""


class BackendError(AdapterError):
    """A model backend returned an unusable payload."""


class ImageFormatError(AdapterError):
    """Image file whose dimensions cannot be determined."""
