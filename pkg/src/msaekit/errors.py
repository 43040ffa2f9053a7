"""Exception hierarchy shared by every module."""


class MsaeError(Exception):
    """Base class for library errors."""


class DomainError(MsaeError, ValueError):
    """An argument lies outside the admissible range."""


class ConfigurationError(MsaeError, ValueError):
    """A configuration is internally inconsistent or degenerate."""


class ConsistencyError(MsaeError, ValueError):
    """Tensors, kernels or frames do not agree in shape or layout."""


class WavFormatError(MsaeError, ValueError):
    """A file is not a well-formed RIFF/WAVE file."""


class UnsupportedFormatError(WavFormatError):
    """A well-formed WAV file uses an encoding this library does not read."""
