"""Band Relevance Factor: noise gate, per-band scoring, normalisation and ranking.

Pipeline for one signal:

1. Spectral entropy of the whole spectrum (``s_base``). At or above -3 dB the
   signal is treated as noise and no band is analysed.
2. For every dyadic band of levels ``0..K``: the correction factor
   ``rms_diff = rms_base_db - rms_band_db`` and the entropy difference factor
   ``s_diff = 3 + s_base_db - s_filtered_db``.
3. ``brf = s_diff / rms_diff``. Positive values mark informative bands; within
   a level, larger is more informative.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bands import DEFAULT_MAX_LEVEL, BandSpec, band_slice, bands_at_level, max_level_for
from .entropy import EnergyDistribution, entropy_db, spectral_entropy
from .errors import InvalidInputError
from .signal import Signal, Spectrum, rms_db, spectrum

log = logging.getLogger(__name__)

GATE_THRESHOLD_DB = -3.0
ENTROPY_SHIFT_DB = 3.0
RMS_DIFF_FLOOR_DB = 1e-12
DEFAULT_TOP_N = 5


@dataclass(frozen=True)
class GateVerdict:
    s_base: float
    s_base_db: float
    relevant: bool


@dataclass(frozen=True)
class BandScore:
    """Scores for one band. ``s_filtered``/``s_diff_db`` are None for zero-energy bands."""

    band: BandSpec
    rms_band: float
    rms_diff_db: float
    s_filtered: float | None
    s_diff_db: float | None
    brf: float
    relevant: bool


@dataclass(frozen=True)
class LevelResult:
    level: int
    scores: tuple[BandScore, ...]
    brf_normalized: tuple[float, ...]
    rms_normalized: tuple[float, ...]
    ranking: tuple[BandSpec, ...]


@dataclass(frozen=True)
class ReportMetadata:
    source: str
    sample_rate_hz: float
    n_samples: int
    max_level: int
    top_n: int
    requested_max_level: int
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class AnalysisReport:
    """Result of :func:`analyze`.

    ``levels`` is empty when the gate rejects the signal. ``rms_rankings`` (the
    rms-only baseline, one tuple per level ``0..max_level``) is always filled,
    because the baseline does not depend on the gate.
    """

    gate: GateVerdict
    levels: tuple[LevelResult, ...]
    rms_rankings: tuple[tuple[BandSpec, ...], ...]
    metadata: ReportMetadata

    def brf_rankings(self) -> tuple[tuple[BandSpec, ...], ...]:
        """BRF ranking per level, empty tuples when the gate failed."""
        if not self.levels:
            return tuple(() for _ in range(self.metadata.max_level + 1))
        return tuple(level.ranking for level in self.levels)


def gate(spec: Spectrum) -> GateVerdict:
    """Classify the whole signal as informative (``relevant``) or noise."""
    if not spec.total_energy() > 0:
        raise InvalidInputError("signal has zero energy")
    s_base = spectral_entropy(EnergyDistribution.from_energies(spec.bin_energy))
    s_base_db = entropy_db(s_base)
    return GateVerdict(s_base=s_base, s_base_db=s_base_db, relevant=s_base_db < GATE_THRESHOLD_DB)


def correction_factor(rms_base_db: float, rms_filtered_db: float) -> float:
    """``rms_base_db - rms_filtered_db``; an empty band gives ``+inf``."""
    if rms_filtered_db == -math.inf:
        return math.inf
    # A band cannot hold more energy than the whole; clip rounding noise.
    return max(rms_base_db - rms_filtered_db, 0.0)


def entropy_difference_factor(s_base_db: float, s_filtered_db: float) -> float:
    """``3 + s_base_db - s_filtered_db``; relevant when >= 0."""
    if s_base_db == -math.inf and s_filtered_db == -math.inf:
        # both perfectly ordered: the band is exactly as ordered as the whole
        return ENTROPY_SHIFT_DB
    return ENTROPY_SHIFT_DB + s_base_db - s_filtered_db


def band_relevance_factor(s_diff: float, rms_diff: float) -> float:
    if rms_diff == math.inf:
        return 0.0
    if rms_diff < 0:
        raise InvalidInputError(f"rms_diff must be >= 0, got {rms_diff!r}")
    return s_diff / max(rms_diff, RMS_DIFF_FLOOR_DB)


def score_band(spec: Spectrum, band: BandSpec, verdict: GateVerdict, rms_base_db: float) -> BandScore:
    energies = spec.bin_energy[band_slice(spec, band, min_bins=2)]
    energy = float(np.sum(energies))
    rms_band = math.sqrt(energy)
    rms_diff = correction_factor(rms_base_db, rms_db(rms_band))
    if energy <= 0:
        return BandScore(band, 0.0, rms_diff, None, None, 0.0, False)
    s_filtered = spectral_entropy(EnergyDistribution.from_energies(energies))
    s_diff = entropy_difference_factor(verdict.s_base_db, entropy_db(s_filtered))
    value = band_relevance_factor(s_diff, rms_diff)
    return BandScore(
        band=band,
        rms_band=rms_band,
        rms_diff_db=rms_diff,
        s_filtered=s_filtered,
        s_diff_db=s_diff,
        brf=value,
        relevant=bool(s_diff >= 0 and value > 0),
    )


def _signed_scale(values: np.ndarray) -> np.ndarray:
    """Positives over the largest positive, negatives over the largest magnitude negative."""
    out = np.zeros_like(values)
    for mask, extreme in ((values > 0, np.max), (values < 0, np.min)):
        if not np.any(mask):
            continue
        ref = abs(float(extreme(values[mask])))
        part = values[mask]
        if math.isinf(ref):
            # infinite scores take the full scale, everything finite collapses to 0
            scaled = np.where(np.isinf(part), np.sign(part), 0.0)
        else:
            scaled = part / ref
        out[mask] = scaled
    return out


def normalize_level(scores: Sequence[BandScore]) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Per-level heatmap values: BRF to ``[-1, 1]`` and band rms to ``[0, 1]``."""
    if not scores:
        raise InvalidInputError("cannot normalise an empty level")
    brfs = np.array([s.brf for s in scores], dtype=np.float64)
    if len(scores) == 1 and scores[0].band.level == 0:
        brf_norm = np.array([1.0 if scores[0].relevant else 0.0])
    else:
        brf_norm = _signed_scale(brfs)
    rms_vals = np.array([s.rms_band for s in scores], dtype=np.float64)
    top = float(np.max(rms_vals))
    rms_norm = rms_vals / top if top > 0 else np.zeros_like(rms_vals)
    return tuple(float(v) for v in brf_norm), tuple(float(v) for v in rms_norm)


def rank_by_brf(scores: Sequence[BandScore], top_n: int | None = None) -> tuple[BandSpec, ...]:
    """Relevant bands by descending BRF; ties go to the lower band first."""
    chosen = sorted((s for s in scores if s.relevant), key=lambda s: (-s.brf, s.band.f_lo_hz))
    return tuple(s.band for s in chosen[:top_n])


def rank_by_rms(scores: Sequence[BandScore], top_n: int | None = None) -> tuple[BandSpec, ...]:
    chosen = sorted(scores, key=lambda s: (-s.rms_band, s.band.f_lo_hz))
    return tuple(s.band for s in chosen[:top_n])


def _level_zero_score(spec: Spectrum, band: BandSpec, verdict: GateVerdict) -> BandScore:
    # The full band is the whole signal: rms_diff is 0 and s_diff is 3 by construction.
    rms_band = math.sqrt(spec.total_energy())
    return BandScore(
        band=band,
        rms_band=rms_band,
        rms_diff_db=0.0,
        s_filtered=verdict.s_base,
        s_diff_db=ENTROPY_SHIFT_DB,
        brf=band_relevance_factor(ENTROPY_SHIFT_DB, 0.0),
        relevant=verdict.relevant,
    )


def _rms_only_ranking(spec: Spectrum, bands: Sequence[BandSpec], top_n: int) -> tuple[BandSpec, ...]:
    rms_vals = [math.sqrt(float(np.sum(spec.bin_energy[band_slice(spec, b)]))) for b in bands]
    order = sorted(range(len(bands)), key=lambda i: (-rms_vals[i], bands[i].f_lo_hz))
    return tuple(bands[i] for i in order[:top_n])


def analyze(
    signal: Signal,
    max_level: int = DEFAULT_MAX_LEVEL,
    top_n: int = DEFAULT_TOP_N,
    source: str = "",
) -> AnalysisReport:
    """Run the full gate + per-level BRF analysis on ``signal``.

    Levels deeper than the sample count supports are trimmed, and the trim is
    recorded in ``metadata.warnings``.
    """
    if max_level < 0:
        raise InvalidInputError(f"max_level must be >= 0, got {max_level}")
    if top_n < 1:
        raise InvalidInputError(f"top_n must be >= 1, got {top_n}")
    spec = spectrum(signal)
    verdict = gate(spec)

    warnings: list[str] = []
    deepest = max_level_for(signal.n_samples)
    k_max = max_level
    if max_level > deepest:
        k_max = deepest
        msg = f"max level {max_level} trimmed to {deepest} (N={signal.n_samples})"
        warnings.append(msg)
        log.info(msg)

    rms_base_db = rms_db(math.sqrt(spec.total_energy()))
    levels: list[LevelResult] = []
    rms_rankings: list[tuple[BandSpec, ...]] = []
    for k in range(k_max + 1):
        bands = bands_at_level(spec.nyquist_hz, k)
        if not verdict.relevant:
            rms_rankings.append(_rms_only_ranking(spec, bands, top_n))
            continue
        if k == 0:
            scores = [_level_zero_score(spec, bands[0], verdict)]
        else:
            scores = [score_band(spec, band, verdict, rms_base_db) for band in bands]
        brf_norm, rms_norm = normalize_level(scores)
        levels.append(
            LevelResult(
                level=k,
                scores=tuple(scores),
                brf_normalized=brf_norm,
                rms_normalized=rms_norm,
                ranking=rank_by_brf(scores, top_n),
            )
        )
        rms_rankings.append(rank_by_rms(scores, top_n))

    meta = ReportMetadata(
        source=source,
        sample_rate_hz=signal.sample_rate_hz,
        n_samples=signal.n_samples,
        max_level=k_max,
        top_n=top_n,
        requested_max_level=max_level,
        warnings=tuple(warnings),
    )
    return AnalysisReport(gate=verdict, levels=tuple(levels), rms_rankings=tuple(rms_rankings), metadata=meta)
