"""Time series and one-sided energy spectra.

The spectrum is normalised so that the bin energies sum to the mean square of
the time signal. With that convention the rms of any group of bins is the rms
that the band-limited time signal would have, and the full-band rms equals the
familiar time-domain rms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np

from .errors import InvalidInputError, ZeroWidthBandError

if TYPE_CHECKING:
    from .bands import BandSpec


def _frozen(values: np.ndarray) -> np.ndarray:
    values.flags.writeable = False
    return values


@dataclass(frozen=True, eq=False)
class Signal:
    """Uniformly sampled real time series.

    ``metadata`` carries free-form provenance (tone set, realized SNR, ...)
    and is ignored by every numerical routine.
    """

    samples: np.ndarray
    sample_rate_hz: float
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        samples = np.array(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise InvalidInputError(f"samples must be one-dimensional, got shape {samples.shape}")
        if samples.size < 2:
            raise InvalidInputError(f"need at least 2 samples, got {samples.size}")
        if not np.all(np.isfinite(samples)):
            raise InvalidInputError("samples contain NaN or Inf")
        fs = float(self.sample_rate_hz)
        if not (math.isfinite(fs) and fs > 0):
            raise InvalidInputError(f"sample_rate_hz must be positive, got {self.sample_rate_hz!r}")
        object.__setattr__(self, "samples", _frozen(samples))
        object.__setattr__(self, "sample_rate_hz", fs)

    @property
    def n_samples(self) -> int:
        return int(self.samples.size)

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate_hz

    def mean_square(self) -> float:
        return float(np.mean(self.samples**2))

    def rms(self) -> float:
        return math.sqrt(self.mean_square())

    def scaled(self, factor: float) -> Signal:
        return Signal(self.samples * factor, self.sample_rate_hz, dict(self.metadata))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided energy spectrum; bin ``i`` sits at ``i * bin_width_hz``."""

    bin_energy: np.ndarray
    bin_width_hz: float
    nyquist_hz: float
    n_samples: int

    def __post_init__(self) -> None:
        energy = np.array(self.bin_energy, dtype=np.float64)
        if energy.ndim != 1 or energy.size < 1:
            raise InvalidInputError("bin_energy must be a non-empty 1-D array")
        if not np.all(np.isfinite(energy)) or np.any(energy < 0):
            raise InvalidInputError("bin_energy must be finite and non-negative")
        object.__setattr__(self, "bin_energy", _frozen(energy))

    @property
    def n_bins(self) -> int:
        return int(self.bin_energy.size)

    @property
    def sample_rate_hz(self) -> float:
        return 2.0 * self.nyquist_hz

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(self.n_bins) * self.bin_width_hz

    def total_energy(self) -> float:
        return float(np.sum(self.bin_energy))


def spectrum(signal: Signal) -> Spectrum:
    """Rectangular-window, single-frame, one-sided energy spectrum.

    ``bin_energy[i] = c_i * |X_i|^2 / N^2`` with ``c_i = 1`` for DC (and for
    the Nyquist bin when N is even) and ``c_i = 2`` otherwise, so that
    ``sum(bin_energy) == mean(x**2)``.
    """
    if not isinstance(signal, Signal):
        raise InvalidInputError("spectrum() expects a Signal")
    n = signal.n_samples
    coeffs = np.fft.rfft(signal.samples)
    energy = (coeffs.real**2 + coeffs.imag**2) / float(n) ** 2
    energy[1:] *= 2.0
    if n % 2 == 0:
        energy[-1] /= 2.0
    fs = signal.sample_rate_hz
    return Spectrum(bin_energy=energy, bin_width_hz=fs / n, nyquist_hz=fs / 2.0, n_samples=n)


def rms(spec: Spectrum, band: BandSpec) -> float:
    """Rms of the band-limited signal: sqrt of the summed bin energy in ``band``."""
    from .bands import band_slice

    sl = band_slice(spec, band, min_bins=0)
    if sl.stop <= sl.start:
        raise ZeroWidthBandError(f"band {band.label} contains no bins")
    return math.sqrt(float(np.sum(spec.bin_energy[sl])))


def rms_db(value: float) -> float:
    """``20*log10(value)`` with reference 1.0; zero maps to ``-inf``."""
    if value < 0 or math.isnan(value):
        raise InvalidInputError(f"rms must be non-negative, got {value!r}")
    if value == 0:
        return -math.inf
    return 20.0 * math.log10(value)
