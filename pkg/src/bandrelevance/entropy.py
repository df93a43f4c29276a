"""Normalised (spectral) Shannon entropy of energy distributions."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bands import BandSpec, band_slice
from .errors import DegenerateBandError, InvalidInputError, ZeroEnergyBandError
from .signal import Spectrum


@dataclass(frozen=True, eq=False)
class EnergyDistribution:
    """Probability mass over the ``source_bin_count`` bins of one band."""

    probabilities: np.ndarray
    source_bin_count: int

    def __post_init__(self) -> None:
        p = np.array(self.probabilities, dtype=np.float64)
        if p.ndim != 1:
            raise InvalidInputError("probabilities must be one-dimensional")
        if self.source_bin_count < 2 or p.size != self.source_bin_count:
            raise DegenerateBandError(
                f"need at least 2 bins and one probability per bin, got n={self.source_bin_count}, len={p.size}"
            )
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise InvalidInputError("probabilities must be finite and non-negative")
        if abs(float(np.sum(p)) - 1.0) > 1e-12:
            raise InvalidInputError(f"probabilities sum to {float(np.sum(p))!r}, not 1")
        p.flags.writeable = False
        object.__setattr__(self, "probabilities", p)

    @classmethod
    def from_energies(cls, energies: np.ndarray) -> EnergyDistribution:
        e = np.asarray(energies, dtype=np.float64)
        if e.size < 2:
            raise DegenerateBandError(f"need at least 2 bins, got {e.size}")
        total = float(np.sum(e))
        if not total > 0:
            raise ZeroEnergyBandError("band carries no energy")
        return cls(e / total, int(e.size))


def energy_distribution(spec: Spectrum, band: BandSpec) -> EnergyDistribution:
    """Distribution of the band's energy over its own bins (band-local normalisation)."""
    sl = band_slice(spec, band, min_bins=2)
    return EnergyDistribution.from_energies(spec.bin_energy[sl])


def spectral_entropy(dist: EnergyDistribution) -> float:
    """``-sum(p * ln p) / ln(n)``, with ``0 * ln 0 = 0``; always in ``[0, 1]``."""
    p = dist.probabilities
    nz = p[p > 0]
    h = -float(np.sum(nz * np.log(nz)))
    s = h / math.log(dist.source_bin_count)
    return min(max(s, 0.0), 1.0)


def entropy_db(s: float) -> float:
    """Entropy on the dB scale, ``10*log10(s)``; ``s == 0`` gives ``-inf``."""
    if not 0.0 <= s <= 1.0:
        raise InvalidInputError(f"spectral entropy must lie in [0, 1], got {s!r}")
    if s == 0.0:
        return -math.inf
    return 10.0 * math.log10(s)

