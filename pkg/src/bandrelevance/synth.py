"""Multi-tone test signals with Gaussian noise at a calibrated SNR."""
from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .errors import InvalidConfigError
from .signal import Signal

SnrConvention = Literal["paper", "power"]

CASE1_TONES_HZ: tuple[float, ...] = (30, 120, 500, 700, 750, 2300, 2450, 2600, 2700, 2800, 3450)
CASE1_SAMPLE_RATE_HZ = 20480.0
CASE1_DURATION_S = 1.0
CASE1_SNR_DB: dict[str, float] = {"low": 24.0, "medium": 12.0, "high": 6.0, "mixed": 0.0}

# Lower bound of the amplitude draw; 0.0 reproduces the unrestricted 0-1 range.
DEFAULT_AMPLITUDE_FLOOR = 0.05


@dataclass(frozen=True)
class Tone:
    frequency_hz: float
    amplitude: float = 1.0
    phase_rad: float = 0.0


@dataclass(frozen=True)
class SynthConfig:
    tones: tuple[Tone, ...]
    duration_s: float = CASE1_DURATION_S
    sample_rate_hz: float = CASE1_SAMPLE_RATE_HZ
    snr_db: float | None = None
    seed: int = 0
    snr_convention: SnrConvention = "paper"

    def __post_init__(self) -> None:
        if not self.tones:
            raise InvalidConfigError("at least one tone is required")
        if not self.sample_rate_hz > 0 or not self.duration_s > 0:
            raise InvalidConfigError("duration and sample rate must be positive")
        for tone in self.tones:
            if not 0 <= tone.frequency_hz < self.sample_rate_hz / 2:
                raise InvalidConfigError(
                    f"tone {tone.frequency_hz} Hz is not below Nyquist ({self.sample_rate_hz / 2} Hz)"
                )
            if not 0 < tone.amplitude <= 1:
                raise InvalidConfigError(f"tone amplitude {tone.amplitude} outside (0, 1]")
        n = self.duration_s * self.sample_rate_hz
        if abs(n - round(n)) > 1e-9 * max(n, 1.0) or round(n) < 2:
            raise InvalidConfigError(f"duration * sample rate = {n} is not a sample count >= 2")
        if self.snr_convention not in ("paper", "power"):
            raise InvalidConfigError(f"unknown SNR convention {self.snr_convention!r}")

    @property
    def n_samples(self) -> int:
        return int(round(self.duration_s * self.sample_rate_hz))


def sub_seed(seed: int, *key: int) -> int:
    """Independent 32-bit seed derived from ``seed`` and a spawn key."""
    return int(np.random.SeedSequence(seed, spawn_key=key).generate_state(1)[0])


def _snr_key(snr_db: float) -> int:
    return zlib.crc32(repr(float(snr_db)).encode())


def snr_db_from_rms(rms_signal: float, rms_noise: float, convention: SnrConvention = "paper") -> float:
    """SNR in dB from two rms values.

    ``paper`` puts the rms ratio straight into ``10*log10``; ``power`` uses the
    power ratio, i.e. ``20*log10`` of the rms ratio.
    """
    factor = 10.0 if convention == "paper" else 20.0
    return factor * math.log10(rms_signal / rms_noise)


def noise_coefficient(rms_signal: float, snr_db: float, convention: SnrConvention = "paper") -> float:
    factor = 10.0 if convention == "paper" else 20.0
    return rms_signal / 10.0 ** (snr_db / factor)


def tone_sum(config: SynthConfig) -> Signal:
    n = config.n_samples
    t = np.arange(n) / config.sample_rate_hz
    x = np.zeros(n)
    for tone in config.tones:
        x += tone.amplitude * np.sin(2.0 * np.pi * tone.frequency_hz * t + tone.phase_rad)
    meta = {
        "tones": [[tone.frequency_hz, tone.amplitude, tone.phase_rad] for tone in config.tones],
        "seed": config.seed,
    }
    return Signal(x, config.sample_rate_hz, meta)


def add_noise(
    signal: Signal,
    snr_db: float | None,
    seed: int,
    convention: SnrConvention = "paper",
) -> Signal:
    """Add ``alpha * G``, ``G ~ N(0, 1)``, with ``alpha`` set from the target SNR.

    ``snr_db`` of None or +inf returns the signal unchanged. The SNR actually
    realised by the noise draw is stored as ``metadata['snr_db_realized']``.
    """
    if snr_db is None or snr_db == math.inf:
        return signal
    rms_s = signal.rms()
    if not rms_s > 0:
        raise InvalidConfigError("cannot calibrate noise against a zero-rms signal")
    alpha = noise_coefficient(rms_s, snr_db, convention)
    noise = alpha * np.random.default_rng(seed).standard_normal(signal.n_samples)
    rms_n = math.sqrt(float(np.mean(noise**2)))
    meta = dict(signal.metadata)
    meta.update(
        snr_db_target=float(snr_db),
        snr_db_realized=snr_db_from_rms(rms_s, rms_n, convention),
        snr_convention=convention,
        noise_alpha=alpha,
        noise_seed=seed,
    )
    return Signal(signal.samples + noise, signal.sample_rate_hz, meta)


def synthesize(config: SynthConfig) -> Signal:
    """Tones plus noise; the noise stream depends only on ``(seed, snr_db)``."""
    clean = tone_sum(config)
    if config.snr_db is None:
        return clean
    return add_noise(clean, config.snr_db, sub_seed(config.seed, 1, _snr_key(config.snr_db)), config.snr_convention)


def case1_tones(
    seed: int,
    amplitude_floor: float = DEFAULT_AMPLITUDE_FLOOR,
    random_phase: bool = False,
    frequencies: tuple[float, ...] = CASE1_TONES_HZ,
) -> tuple[Tone, ...]:
    """Draw the tone amplitudes (uniform on ``(floor, 1]``) and optional phases."""
    if not 0 <= amplitude_floor < 1:
        raise InvalidConfigError(f"amplitude floor {amplitude_floor} outside [0, 1)")
    rng = np.random.default_rng(sub_seed(seed, 0))
    # 1 - U[0, 1) lands in (0, 1], so the floor itself is excluded
    amps = 1.0 - (1.0 - amplitude_floor) * rng.random(len(frequencies))
    phases = rng.uniform(0.0, 2.0 * np.pi, len(frequencies)) if random_phase else np.zeros(len(frequencies))
    return tuple(Tone(float(f), float(a), float(p)) for f, a, p in zip(frequencies, amps, phases))


def case1_config(
    seed: int,
    snr_db: float | None,
    amplitude_floor: float = DEFAULT_AMPLITUDE_FLOOR,
    random_phase: bool = False,
    snr_convention: SnrConvention = "paper",
) -> SynthConfig:
    return SynthConfig(
        tones=case1_tones(seed, amplitude_floor, random_phase),
        duration_s=CASE1_DURATION_S,
        sample_rate_hz=CASE1_SAMPLE_RATE_HZ,
        snr_db=snr_db,
        seed=seed,
        snr_convention=snr_convention,
    )


def case1_corpus(
    seed: int,
    amplitude_floor: float = DEFAULT_AMPLITUDE_FLOOR,
    random_phase: bool = False,
    snr_convention: SnrConvention = "paper",
) -> dict[str, Signal]:
    """The four noise variants (low/medium/high/mixed) sharing one tone draw."""
    base = case1_config(seed, None, amplitude_floor, random_phase, snr_convention)
    return {name: synthesize(replace(base, snr_db=snr)) for name, snr in CASE1_SNR_DB.items()}
