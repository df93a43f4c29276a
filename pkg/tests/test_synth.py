import math

import numpy as np
import pytest

from bandrelevance.brf import analyze
from bandrelevance.errors import InvalidConfigError
from bandrelevance.signal import Signal, spectrum
from bandrelevance.synth import (
    CASE1_TONES_HZ,
    SynthConfig,
    Tone,
    add_noise,
    case1_corpus,
    case1_tones,
    noise_coefficient,
    tone_sum,
)


def realized_snr(clean, noisy, factor):
    noise = noisy.samples - clean.samples
    return factor * math.log10(clean.rms() / math.sqrt(np.mean(noise**2)))


class TestToneSum:
    def test_single_tone_rms(self):
        sig = tone_sum(SynthConfig((Tone(100.0, 1.0),)))
        assert sig.n_samples == 20480
        assert sig.rms() == pytest.approx(1 / math.sqrt(2), rel=1e-9)

    def test_two_tones_two_bins(self):
        sig = tone_sum(SynthConfig((Tone(30.0, 1.0), Tone(120.0, 0.5))))
        energy = spectrum(sig).bin_energy
        top = set(np.argsort(energy)[-2:])
        assert top == {30, 120}
        assert np.sort(energy)[-3] < 1e-20

    def test_case1_tone_set(self):
        assert CASE1_TONES_HZ == (30, 120, 500, 700, 750, 2300, 2450, 2600, 2700, 2800, 3450)
        assert [t.frequency_hz for t in case1_tones(0)] == list(CASE1_TONES_HZ)

    def test_zero_phase_default(self):
        assert all(t.phase_rad == 0.0 for t in case1_tones(4))
        assert any(t.phase_rad != 0.0 for t in case1_tones(4, random_phase=True))

    def test_amplitude_range(self):
        amps = np.array([t.amplitude for s in range(200) for t in case1_tones(s)])
        assert amps.min() > 0.05 and amps.max() <= 1.0
        wide = np.array([t.amplitude for s in range(200) for t in case1_tones(s, amplitude_floor=0.0)])
        assert wide.min() < 0.05

    def test_no_leakage(self):
        sig = tone_sum(SynthConfig(case1_tones(1)))
        energy = spectrum(sig).bin_energy
        for tone in case1_tones(1):
            expected = tone.amplitude**2 / 2
            assert energy[int(tone.frequency_hz)] >= 0.99 * expected

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"tones": ()},
            {"tones": (Tone(10240.0),)},
            {"tones": (Tone(100.0, 1.5),)},
            {"tones": (Tone(100.0),), "duration_s": 0.00001},
            {"tones": (Tone(100.0),), "snr_convention": "volts"},
        ],
    )
    def test_invalid_config(self, kwargs):
        with pytest.raises(InvalidConfigError):
            SynthConfig(**kwargs)


class TestAddNoise:
    def test_zero_db_alpha_equals_rms(self):
        clean = tone_sum(SynthConfig(case1_tones(2)))
        assert noise_coefficient(clean.rms(), 0.0) == clean.rms()
        noisy = add_noise(clean, 0.0, seed=1)
        assert noisy.metadata["noise_alpha"] == clean.rms()

    def test_none_is_identity(self):
        clean = tone_sum(SynthConfig(case1_tones(2)))
        assert add_noise(clean, None, seed=1) is clean
        assert add_noise(clean, math.inf, seed=1) is clean

    @pytest.mark.parametrize("convention, factor", [("paper", 10.0), ("power", 20.0)])
    def test_realized_snr(self, convention, factor):
        clean = tone_sum(SynthConfig(case1_tones(5)))
        noisy = add_noise(clean, 12.0, seed=9, convention=convention)
        oracle = realized_snr(clean, noisy, factor)
        assert oracle == pytest.approx(12.0, abs=0.1)
        assert noisy.metadata["snr_db_realized"] == pytest.approx(oracle, abs=1e-9)

    def test_zero_signal(self):
        with pytest.raises(InvalidConfigError):
            add_noise(Signal(np.zeros(8), 8.0), 6.0, seed=0)


class TestCorpus:
    def test_shape(self, corpus0):
        assert list(corpus0) == ["low", "medium", "high", "mixed"]
        assert all(s.n_samples == 20480 and s.sample_rate_hz == 20480.0 for s in corpus0.values())

    def test_deterministic(self, corpus0):
        again = case1_corpus(0)
        for name in corpus0:
            assert corpus0[name].samples.tobytes() == again[name].samples.tobytes()

    def test_shared_tones_independent_noise(self, corpus0):
        assert len({tuple(map(tuple, s.metadata["tones"])) for s in corpus0.values()}) == 1
        clean = tone_sum(SynthConfig(case1_tones(0)))
        noises = [s.samples - clean.samples for s in corpus0.values()]
        normed = [n / np.linalg.norm(n) for n in noises]
        for i in range(4):
            for j in range(i + 1, 4):
                assert abs(float(normed[i] @ normed[j])) < 0.05

    def test_seeds_differ(self):
        assert case1_corpus(1)["low"].samples.tobytes() != case1_corpus(2)["low"].samples.tobytes()

    def test_mixed_fails_gate(self):
        failed = sum(not analyze(case1_corpus(seed)["mixed"], max_level=0).gate.relevant for seed in range(20))
        assert failed >= 18
