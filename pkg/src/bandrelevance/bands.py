"""Dyadic decomposition of ``[0, nyquist]`` into ``2**k`` equal bands per level."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import DegenerateBandError, InvalidInputError, LevelTooDeepError

if TYPE_CHECKING:
    from .signal import Spectrum

DEFAULT_MAX_LEVEL = 8


def format_hz(value: float) -> str:
    """Compact frequency label: integers without a decimal point."""
    if float(value).is_integer():
        return str(int(value))
    return f"{value:.6f}".rstrip("0").rstrip(".")


@dataclass(frozen=True, order=False)
class BandSpec:
    level: int
    index: int
    f_lo_hz: float
    f_hi_hz: float

    def __post_init__(self) -> None:
        if self.level < 0:
            raise InvalidInputError(f"level must be >= 0, got {self.level}")
        if not 0 <= self.index < 2**self.level:
            raise InvalidInputError(f"index {self.index} outside [0, 2**{self.level})")
        if not 0 <= self.f_lo_hz < self.f_hi_hz:
            raise InvalidInputError(f"bad band edges [{self.f_lo_hz}, {self.f_hi_hz})")
        width = self.f_hi_hz - self.f_lo_hz
        if not math.isclose(self.f_lo_hz, self.index * width, rel_tol=1e-9, abs_tol=1e-9 * width):
            raise InvalidInputError("band edges are not on the dyadic grid")

    @property
    def width_hz(self) -> float:
        return self.f_hi_hz - self.f_lo_hz

    @property
    def nyquist_hz(self) -> float:
        """Upper edge of the level-0 band this band descends from."""
        return self.width_hz * 2**self.level

    @property
    def is_last(self) -> bool:
        return self.index == 2**self.level - 1

    @property
    def label(self) -> str:
        return f"{format_hz(self.f_lo_hz)}:{format_hz(self.f_hi_hz)}"

    def contains(self, freq_hz: float) -> bool:
        """Half-open membership; the top band also owns the Nyquist frequency."""
        if self.is_last:
            return self.f_lo_hz <= freq_hz <= self.f_hi_hz
        return self.f_lo_hz <= freq_hz < self.f_hi_hz

    def children(self) -> tuple[BandSpec, BandSpec]:
        mid = 0.5 * (self.f_lo_hz + self.f_hi_hz)
        k = self.level + 1
        return (
            BandSpec(k, 2 * self.index, self.f_lo_hz, mid),
            BandSpec(k, 2 * self.index + 1, mid, self.f_hi_hz),
        )


def bands_at_level(nyquist_hz: float, k: int, n_samples: int | None = None) -> list[BandSpec]:
    """The ``2**k`` contiguous bands of level ``k``.

    When ``n_samples`` is given the level is checked against
    :func:`max_level_for` and :class:`LevelTooDeepError` is raised if any band
    would hold fewer than two bins.
    """
    if k < 0:
        raise InvalidInputError(f"level must be >= 0, got {k}")
    if not nyquist_hz > 0:
        raise InvalidInputError(f"nyquist_hz must be positive, got {nyquist_hz}")
    if n_samples is not None and k > max_level_for(n_samples):
        raise LevelTooDeepError(
            f"level {k} exceeds the deepest level {max_level_for(n_samples)} supported by N={n_samples}"
        )
    count = 2**k
    width = nyquist_hz / count
    bands = [BandSpec(k, i, i * width, (i + 1) * width) for i in range(count)]
    # Pin the top edge so the last band ends exactly at Nyquist.
    last = bands[-1]
    bands[-1] = BandSpec(k, last.index, last.f_lo_hz, float(nyquist_hz))
    return bands


def n_bins_for(n_samples: int) -> int:
    return n_samples // 2 + 1


def level_edges(n_samples: int, k: int) -> np.ndarray:
    """Bin-index boundaries of level ``k``: band ``i`` is ``edges[i]:edges[i+1]``.

    Bin ``j`` (at ``j*fs/N``) belongs to band ``i`` iff
    ``i*N/2**(k+1) <= j < (i+1)*N/2**(k+1)``; the last band also takes the
    Nyquist bin. Exact integer arithmetic, so no bin lands in two bands.
    """
    denom = 2 ** (k + 1)
    edges = np.array([-((-i * n_samples) // denom) for i in range(2**k + 1)], dtype=np.int64)
    edges[-1] = n_bins_for(n_samples)
    return edges


def max_level_for(n_samples: int) -> int:
    """Deepest level at which every band still spans at least two bins."""
    if n_samples < 4:
        raise InvalidInputError(f"need at least 4 samples for a two-bin band, got {n_samples}")
    k = 0
    while np.min(np.diff(level_edges(n_samples, k + 1))) >= 2:
        k += 1
    return k


def band_slice(spec: Spectrum, band: BandSpec, min_bins: int = 2) -> slice:
    """Bin index range of ``band`` within ``spec``."""
    if not math.isclose(band.nyquist_hz, spec.nyquist_hz, rel_tol=1e-9):
        raise InvalidInputError(
            f"band {band.label} belongs to a {band.nyquist_hz} Hz range, spectrum covers {spec.nyquist_hz} Hz"
        )
    n = spec.n_samples
    denom = 2 ** (band.level + 1)
    start = -((-band.index * n) // denom)
    stop = spec.n_bins if band.is_last else -((-(band.index + 1) * n) // denom)
    if stop - start < min_bins:
        raise DegenerateBandError(f"band {band.label} spans {stop - start} bin(s), need {min_bins}")
    return slice(start, stop)
