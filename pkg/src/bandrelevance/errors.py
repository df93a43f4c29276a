"""Exception hierarchy shared across the package."""


class BandRelevanceError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(BandRelevanceError, ValueError):
    """Signal samples or parameters violate a precondition."""


class ZeroWidthBandError(BandRelevanceError, ValueError):
    """A band maps to an empty bin range."""


class DegenerateBandError(BandRelevanceError, ValueError):
    """A band holds fewer than two spectral bins."""


class ZeroEnergyBandError(BandRelevanceError, ValueError):
    """A band carries no energy, so no distribution can be formed."""


class LevelTooDeepError(BandRelevanceError, ValueError):
    """Requested decomposition level yields bands narrower than two bins."""


class InvalidConfigError(BandRelevanceError, ValueError):
    """Synthesis or CLI configuration is inconsistent."""


class ConfigurationError(BandRelevanceError):
    """Required metadata (e.g. sample rate) is missing."""


class SignalParseError(BandRelevanceError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SignalFormatError(BandRelevanceError, ValueError):
    """Audio container is not uncompressed PCM or uses an unsupported depth."""


class ReportFormatError(BandRelevanceError, ValueError):
    """A serialized report is malformed or has an unsupported schema version."""
