"""Automatic ranking of informative frequency bands in vibration signals.

Each dyadic band of a spectrum is scored by the Band Relevance Factor, which
combines how ordered the band is (spectral entropy relative to the whole
signal) with how much energy it carries.
"""

__version__ = "0.1.0"

from .bands import BandSpec, band_slice, bands_at_level, max_level_for  # noqa: E402
from .brf import (  # noqa: E402
    AnalysisReport,
    BandScore,
    GateVerdict,
    LevelResult,
    analyze,
    band_relevance_factor,
    correction_factor,
    entropy_difference_factor,
    gate,
    normalize_level,
)
from .entropy import EnergyDistribution, energy_distribution, entropy_db, spectral_entropy  # noqa: E402
from .rankmetrics import RankingPair, position_analysis, values_analysis  # noqa: E402
from .signal import Signal, Spectrum, rms, rms_db, spectrum  # noqa: E402

__all__ = [
    "AnalysisReport",
    "BandScore",
    "BandSpec",
    "EnergyDistribution",
    "GateVerdict",
    "LevelResult",
    "RankingPair",
    "Signal",
    "Spectrum",
    "analyze",
    "band_relevance_factor",
    "band_slice",
    "bands_at_level",
    "correction_factor",
    "energy_distribution",
    "entropy_db",
    "entropy_difference_factor",
    "gate",
    "max_level_for",
    "normalize_level",
    "position_analysis",
    "rms",
    "rms_db",
    "spectral_entropy",
    "spectrum",
    "values_analysis",
]
