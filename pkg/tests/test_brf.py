import math

import numpy as np
import pytest

from bandrelevance.bands import BandSpec, bands_at_level
from bandrelevance.brf import (
    RMS_DIFF_FLOOR_DB,
    BandScore,
    analyze,
    band_relevance_factor,
    correction_factor,
    entropy_difference_factor,
    gate,
    normalize_level,
    rank_by_brf,
    rank_by_rms,
    score_band,
)
from bandrelevance.errors import InvalidInputError
from bandrelevance.signal import Signal, rms_db, spectrum
from bandrelevance.synth import CASE1_TONES_HZ, SynthConfig, Tone, add_noise, case1_tones, synthesize

FS = 20480.0
N = 20480


def white_noise(seed):
    return Signal(np.random.default_rng(seed).standard_normal(N), FS)


def score(index, brf, rms_band=1.0, level=2, relevant=None):
    bands = bands_at_level(10240.0, level)
    if relevant is None:
        relevant = brf > 0
    return BandScore(bands[index], rms_band, 1.0, 0.5, 0.0, brf, relevant)


def tone_in(band, tones=CASE1_TONES_HZ):
    return any(band.contains(f) for f in tones)


# ---------------------------------------------------------------------------
# gate
# ---------------------------------------------------------------------------


class TestGate:
    def test_pure_sine_passes(self, unit_sine):
        verdict = gate(spectrum(unit_sine))
        assert verdict.s_base < 1e-12
        assert verdict.s_base_db < -100
        assert verdict.relevant

    def test_exact_one_hot_gives_minus_inf(self):
        verdict = gate(spectrum(Signal(np.ones(128), 128.0)))
        assert verdict.s_base == 0.0
        assert verdict.s_base_db == -math.inf
        assert verdict.relevant

    @pytest.mark.parametrize("seed", range(5))
    def test_white_noise_fails(self, seed):
        verdict = gate(spectrum(white_noise(seed)))
        # exponential bin energies: S ~ 1 - (1 - euler_gamma) / ln(n)
        expected = 1 - (1 - np.euler_gamma) / math.log(N // 2 + 1)
        assert verdict.s_base == pytest.approx(expected, abs=0.01)
        assert -1.0 <= verdict.s_base_db <= 0.0
        assert not verdict.relevant

    def test_mixed_noise_fails(self, corpus0):
        assert not gate(spectrum(corpus0["mixed"])).relevant

    def test_zero_signal(self):
        with pytest.raises(InvalidInputError):
            gate(spectrum(Signal(np.zeros(16), 16.0)))


# ---------------------------------------------------------------------------
# factors
# ---------------------------------------------------------------------------


class TestFactors:
    def test_correction_factor(self):
        assert correction_factor(0.0, -6.02) == pytest.approx(6.02)
        assert correction_factor(-3.0, -3.0) == 0.0
        assert correction_factor(0.0, -math.inf) == math.inf

    def test_entropy_difference(self):
        assert entropy_difference_factor(-5.0, -2.0) == 0.0
        assert entropy_difference_factor(-4.0, 0.0) == -1.0
        assert entropy_difference_factor(-math.inf, -math.inf) == 3.0
        assert entropy_difference_factor(-4.0, -math.inf) == math.inf
        assert entropy_difference_factor(-math.inf, -1.0) == -math.inf

    def test_brf(self):
        assert band_relevance_factor(3.0, 1.5) == 2.0
        assert band_relevance_factor(-1.0, 20.0) == -0.05
        assert band_relevance_factor(1.0, math.inf) == 0.0
        assert band_relevance_factor(3.0, 0.0) == 3.0 / RMS_DIFF_FLOOR_DB

    def test_more_energy_higher_brf(self):
        # same s_diff, A holds more energy so its rms_diff is smaller
        s_diff = 2.0
        a = band_relevance_factor(s_diff, correction_factor(0.0, rms_db(0.5)))
        b = band_relevance_factor(s_diff, correction_factor(0.0, rms_db(0.1)))
        assert a > b > 0


class TestScoreBand:
    @pytest.mark.parametrize("k", range(1, 9))
    def test_harmonic_band_relevant(self, k):
        t = np.arange(N) / FS
        sig = add_noise(Signal(np.sin(2 * np.pi * 1000.0 * t), FS), 12.0, seed=k)
        spec = spectrum(sig)
        verdict = gate(spec)
        base_db = rms_db(math.sqrt(spec.total_energy()))
        scores = [score_band(spec, b, verdict, base_db) for b in bands_at_level(spec.nyquist_hz, k)]
        harmonic = next(s for s in scores if s.band.contains(1000.0))
        assert harmonic.relevant
        assert harmonic.s_diff_db > 0
        assert rank_by_brf(scores)[0] == harmonic.band
        if k == 1:
            assert not scores[1].relevant

    def test_pure_harmonic_band_sdiff_at_least_three(self):
        # noiseless tone: the tone band is at least as ordered as the whole signal
        t = np.arange(N) / FS
        spec = spectrum(Signal(np.sin(2 * np.pi * 1000.0 * t), FS))
        verdict = gate(spec)
        base_db = rms_db(math.sqrt(spec.total_energy()))
        band = bands_at_level(spec.nyquist_hz, 1)[0]
        s = score_band(spec, band, verdict, base_db)
        assert s.s_filtered <= verdict.s_base
        assert s.s_diff_db >= 3.0

    def test_zero_energy_band(self):
        spec = spectrum(Signal(np.ones(64), 64.0))
        verdict = gate(spec)
        upper = bands_at_level(spec.nyquist_hz, 1)[1]
        s = score_band(spec, upper, verdict, 0.0)
        assert s.rms_band == 0.0
        assert s.rms_diff_db == math.inf
        assert s.brf == 0.0
        assert s.s_filtered is None
        assert not s.relevant


# ---------------------------------------------------------------------------
# normalisation and ranking
# ---------------------------------------------------------------------------


class TestNormalize:
    def test_signed_scale(self):
        scores = [score(i, v) for i, v in enumerate([4.0, 2.0, -1.0, -0.5])]
        brf_norm, _ = normalize_level(scores)
        assert brf_norm == (1.0, 0.5, -1.0, -0.5)

    def test_all_negative(self):
        scores = [score(i, v) for i, v in enumerate([-4.0, -2.0, -1.0, -0.5])]
        brf_norm, _ = normalize_level(scores)
        assert all(-1.0 <= v < 0 for v in brf_norm)
        assert min(brf_norm) == -1.0
        assert rank_by_brf(scores) == ()

    def test_rms(self):
        scores = [score(i, 1.0, rms_band=v) for i, v in enumerate([2.0, 1.0, 0.0, 4.0])]
        _, rms_norm = normalize_level(scores)
        assert rms_norm == (0.5, 0.25, 0.0, 1.0)

    def test_infinite_brf(self):
        scores = [score(0, math.inf), score(1, 5.0), score(2, -2.0), score(3, 0.0)]
        brf_norm, _ = normalize_level(scores)
        assert brf_norm == (1.0, 0.0, -1.0, 0.0)

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            normalize_level([])


class TestRanking:
    def test_tie_goes_to_lower_band(self):
        scores = [score(3, 2.0), score(1, 2.0), score(0, 5.0), score(2, -1.0)]
        assert [b.index for b in rank_by_brf(scores)] == [0, 1, 3]

    def test_rms_ranking(self):
        scores = [score(i, -1.0, rms_band=v) for i, v in enumerate([1.0, 3.0, 3.0, 2.0])]
        assert [b.index for b in rank_by_rms(scores, 3)] == [1, 2, 3]

    def test_top_n(self):
        scores = [score(i, float(i + 1), level=3) for i in range(8)]
        assert [b.index for b in rank_by_brf(scores, 5)] == [7, 6, 5, 4, 3]


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


class TestAnalyze:
    def test_medium_noise_case1(self, medium0):
        report = analyze(medium0, max_level=8, top_n=5)
        assert report.gate.relevant
        assert [lvl.level for lvl in report.levels] == list(range(9))
        assert [b.label for b in report.levels[1].ranking] == ["0:5120"]
        for lvl in report.levels[1:]:
            assert all(b.f_lo_hz < 5120 for b in lvl.ranking)
            assert all(tone_in(b) for b in lvl.ranking)

    def test_dominant_700hz_tops_level8(self):
        tones = tuple(
            Tone(t.frequency_hz, 1.0 if t.frequency_hz == 700 else 0.8 * t.amplitude) for t in case1_tones(3)
        )
        report = analyze(synthesize(SynthConfig(tones, snr_db=12.0, seed=3)))
        assert report.levels[8].ranking[0].label == "680:720"
        assert report.levels[8].brf_normalized[17] == 1.0

    def test_level0_rule(self, medium0):
        report = analyze(medium0, max_level=2)
        lvl0 = report.levels[0]
        assert lvl0.brf_normalized == (1.0,)
        assert lvl0.ranking == (bands_at_level(10240.0, 0)[0],)
        assert lvl0.scores[0].relevant
        assert lvl0.scores[0].rms_diff_db == 0.0

    def test_normalisation_bounds(self, medium0):
        report = analyze(medium0)
        for lvl in report.levels:
            pos = [v for v in lvl.brf_normalized if v > 0]
            neg = [v for v in lvl.brf_normalized if v < 0]
            if pos:
                assert max(pos) == 1.0
            if neg:
                assert min(neg) == -1.0
            assert max(lvl.rms_normalized) == 1.0
            by_band = {s.band: s.brf for s in lvl.scores}
            brfs = [by_band[b] for b in lvl.ranking]
            assert brfs == sorted(brfs, reverse=True)
            assert all(v > 0 for v in brfs)

    def test_noise_gives_empty_report(self):
        report = analyze(white_noise(1), max_level=4)
        assert not report.gate.relevant
        assert report.levels == ()
        assert all(r == () for r in report.brf_rankings())
        assert len(report.brf_rankings()) == 5
        # the rms baseline does not depend on the gate
        assert [len(r) for r in report.rms_rankings] == [1, 2, 4, 5, 5]

    def test_trims_too_deep(self, medium0):
        report = analyze(medium0, max_level=13, top_n=2)
        assert report.metadata.max_level == 12
        assert report.metadata.requested_max_level == 13
        assert report.metadata.warnings

    def test_bad_args(self, medium0):
        with pytest.raises(InvalidInputError):
            analyze(medium0, top_n=0)
        with pytest.raises(InvalidInputError):
            analyze(medium0, max_level=-1)

    def test_deterministic(self, medium0):
        assert analyze(medium0) == analyze(medium0)

    @pytest.mark.parametrize("factor", [1e-3, 0.37, 2.0, 1e4])
    def test_amplitude_scale_equivariance(self, corpus0, factor):
        sig = corpus0["high"]
        a = analyze(sig)
        b = analyze(sig.scaled(factor))
        assert a.rms_rankings == b.rms_rankings
        for la, lb in zip(a.levels, b.levels):
            assert la.ranking == lb.ranking
            assert [s.relevant for s in la.scores] == [s.relevant for s in lb.scores]
            np.testing.assert_allclose([s.brf for s in la.scores], [s.brf for s in lb.scores], rtol=1e-9)

    def test_sine_plus_noise_top_band(self):
        hits = 0
        t = np.arange(N) / FS
        for seed in range(100):
            rng = np.random.default_rng(seed)
            f = float(rng.integers(20, 10000))
            sig = add_noise(Signal(np.sin(2 * np.pi * f * t), FS), 6.0, seed=seed)
            report = analyze(sig)
            hits += report.gate.relevant and all(lvl.ranking[0].contains(f) for lvl in report.levels[1:])
        assert hits >= 95

    def test_zero_energy_bands_excluded(self):
        sig = Signal(np.ones(256) + 0.0, 256.0)
        report = analyze(sig, max_level=3)
        for lvl in report.levels[1:]:
            assert [b.index for b in lvl.ranking] == [0]
            assert all(s.brf == 0.0 for s in lvl.scores[1:])
