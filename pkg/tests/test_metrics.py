from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import fiberlink as fl
from fiberlink.metrics import BER_FLOOR, Q_CAP

GRID = fl.make_grid(10e9, 64, 32, 1550e-9)


def ideal_nrz(bits, grid):
    return np.repeat(np.asarray(bits, dtype=np.float64), grid.samples_per_bit)


class TestBerFromQ:
    def test_zero_q_is_coin_flip(self):
        assert fl.ber_from_q(0.0) == 0.5

    def test_reference_point(self):
        # high-precision oracle: 0.5*erfc(5/sqrt(2)) evaluated at 30 digits
        assert fl.ber_from_q(5.0) == pytest.approx(2.8665157187919391e-07, rel=1e-12)

    def test_floor_clamp(self):
        assert fl.ber_from_q(50.0) == BER_FLOOR
        assert fl.ber_from_q(1e6) == BER_FLOOR

    def test_rejects_negative_or_nan(self):
        with pytest.raises(ValueError):
            fl.ber_from_q(-0.1)
        with pytest.raises(ValueError):
            fl.ber_from_q(float("nan"))

    @settings(max_examples=50, deadline=None)
    @given(q1=st.floats(0.0, 20.0), q2=st.floats(0.0, 20.0))
    def test_monotone_decreasing(self, q1, q2):
        lo, hi = sorted((q1, q2))
        assert fl.ber_from_q(hi) <= fl.ber_from_q(lo)


class TestQFromRails:
    def test_synthetic_gaussian_rails(self):
        rng = np.random.default_rng(1)
        ones = rng.normal(1.0, 0.1, 50000)
        zeros = rng.normal(0.0, 0.1, 50000)
        rail = fl.q_from_rails(ones, zeros)
        assert rail.q_linear == pytest.approx(5.0, rel=0.02)
        assert rail.q_db == pytest.approx(20 * np.log10(rail.q_linear), rel=1e-12)
        assert rail.ber == pytest.approx(fl.ber_from_q(rail.q_linear), rel=1e-12)

    def test_zero_sigma_caps(self):
        rail = fl.q_from_rails(np.full(16, 1.0), np.full(16, 0.0))
        assert rail.q_linear == Q_CAP
        assert rail.ber == BER_FLOOR

    def test_inverted_rails_clamp_to_zero(self):
        rng = np.random.default_rng(2)
        rail = fl.q_from_rails(rng.normal(0.0, 0.05, 1000), rng.normal(1.0, 0.05, 1000))
        assert rail.q_linear == 0.0
        assert rail.ber == 0.5
        assert rail.q_db == float("-inf")

    def test_identical_flat_rails(self):
        rail = fl.q_from_rails(np.full(16, 0.5), np.full(16, 0.5))
        assert rail.q_linear == 0.0
        assert rail.ber == 0.5

    def test_empty_rail_rejected(self):
        with pytest.raises(ValueError):
            fl.q_from_rails(np.empty(0), np.ones(4))


class TestFoldEye:
    def test_trace_shape_and_time_axis(self):
        bits = fl.prbs_generate(7, 1, 64)
        wave = fl.ElectricalWaveform(ideal_nrz(bits.bits, GRID), GRID)
        eye = fl.fold_eye(wave, GRID, skip_bits=8)
        assert eye.traces.shape == (56, 32)
        np.testing.assert_allclose(eye.time_ui, np.arange(32) / 32)
        assert not eye.degenerate

    def test_constant_waveform_degenerate(self):
        wave = fl.ElectricalWaveform(np.full(GRID.n_samples, 0.7), GRID)
        eye = fl.fold_eye(wave, GRID, skip_bits=8)
        assert eye.degenerate
        assert eye.crossing_times.size == 0
        assert eye.crossing_offsets.size == 0

    def test_alternating_trapezoid_crossings_near_boundaries(self):
        bits = fl.BitSequence(np.tile([0, 1], 32).astype(np.uint8), "alt")
        drive = fl.nrz_drive(bits, GRID, 0.25)
        eye = fl.fold_eye(drive, GRID, skip_bits=8)
        assert 0.4 < eye.threshold < 0.6
        # one transition per internal bit boundary of the kept region
        assert eye.crossing_times.size == 55
        # all crossings hug the bit boundaries (well within 1% of the UI)
        assert np.max(np.abs(eye.crossing_offsets)) < 0.01 * GRID.bit_period

    def test_skip_bits_drops_warmup(self):
        samples = ideal_nrz(np.ones(64, dtype=np.uint8), GRID)
        samples[: 8 * 32] = -99.0  # garbage confined to the warm-up region
        wave = fl.ElectricalWaveform(samples, GRID)
        eye = fl.fold_eye(wave, GRID, skip_bits=8)
        assert np.all(eye.traces == 1.0)

    def test_bad_skip_bits(self):
        wave = fl.ElectricalWaveform(np.zeros(GRID.n_samples), GRID)
        with pytest.raises(ValueError, match="skip_bits"):
            fl.fold_eye(wave, GRID, skip_bits=64)
        with pytest.raises(ValueError, match="skip_bits"):
            fl.fold_eye(wave, GRID, skip_bits=-1)


class TestEstimateQ:
    def test_recovers_circular_shift(self):
        bits = fl.prbs_generate(7, 1, 64)
        base = ideal_nrz(bits.bits, GRID)
        for shift in (0, 1, 17, 1000):
            wave = fl.ElectricalWaveform(np.roll(base, shift), GRID)
            q = fl.estimate_q(wave, bits, GRID, 8)
            assert q.delay_samples == shift % GRID.n_samples
            assert q.q_linear == Q_CAP  # clean rails separate perfectly

    def test_clean_waveform_caps_q(self):
        bits = fl.prbs_generate(7, 1, 64)
        drive = fl.nrz_drive(bits, GRID, 0.25)
        q = fl.estimate_q(drive, bits, GRID, 8)
        assert q.q_linear == Q_CAP
        assert q.ber == BER_FLOOR
        assert q.threshold == pytest.approx(0.5, abs=1e-12)
        assert q.n_ones + q.n_zeros == 56

    def test_gaussian_noise_pipeline(self):
        # per-bit noise keeps every sample phase statistically identical, so
        # the pipeline estimate must match the rail formula directly
        rng = np.random.default_rng(10)
        bits = (rng.random(1024) < 0.5).astype(np.uint8)
        bits[:16] = np.tile([0, 1], 8)  # guarantee both rails after warm-up
        grid = fl.make_grid(10e9, 1024, 8, 1550e-9)
        levels = bits.astype(np.float64) + rng.normal(0.0, 0.1, 1024)
        wave = fl.ElectricalWaveform(np.repeat(levels, 8), grid)
        q = fl.estimate_q(wave, bits, grid, 8)
        kept = levels[8:]
        expected = fl.q_from_rails(kept[bits[8:] == 1], kept[bits[8:] == 0])
        assert q.q_linear == pytest.approx(expected.q_linear, rel=1e-9)
        assert q.ber == pytest.approx(expected.ber, rel=1e-6)

    @settings(max_examples=20, deadline=None)
    @given(
        scale=st.floats(0.05, 50.0),
        offset=st.floats(-2.0, 2.0),
        seed=st.integers(0, 2**31 - 1),
    )
    def test_affine_invariance(self, scale, offset, seed):
        rng = np.random.default_rng(seed)
        bits = fl.prbs_generate(7, 1, 64)
        base = ideal_nrz(bits.bits, GRID) + rng.normal(0.0, 0.05, GRID.n_samples)
        q1 = fl.estimate_q(fl.ElectricalWaveform(base, GRID), bits, GRID, 8)
        q2 = fl.estimate_q(fl.ElectricalWaveform(scale * base + offset, GRID), bits, GRID, 8)
        assert q2.q_linear == pytest.approx(q1.q_linear, rel=1e-6)

    def test_insufficient_rail_population(self):
        bits = np.zeros(64, dtype=np.uint8)
        bits[:3] = 1
        wave = fl.ElectricalWaveform(ideal_nrz(bits, GRID), GRID)
        with pytest.raises(ValueError, match="8 bits"):
            fl.estimate_q(wave, bits, GRID, 8)

    def test_bit_count_mismatch(self):
        wave = fl.ElectricalWaveform(np.zeros(GRID.n_samples), GRID)
        with pytest.raises(ValueError, match="bits"):
            fl.estimate_q(wave, np.ones(32, dtype=np.uint8), GRID, 8)

    def test_jitter_tiny_for_symmetric_pattern(self):
        # identical rise/fall transitions leave only the sub-sample crossing
        # asymmetry from the cluster threshold, orders below one UI
        bits = fl.BitSequence(np.tile([0, 1], 32).astype(np.uint8), "alt")
        drive = fl.nrz_drive(bits, GRID, 0.25)
        q = fl.estimate_q(drive, bits, GRID, 8)
        assert q.jitter_ns < 1e-3


class TestFormatEye:
    def test_layout_and_roundtrip(self):
        bits = fl.prbs_generate(7, 1, 64)
        wave = fl.ElectricalWaveform(ideal_nrz(bits.bits, GRID), GRID)
        eye = fl.fold_eye(wave, GRID, skip_bits=8)
        text = fl.format_eye(eye)
        lines = text.strip().split("\n")
        assert lines[0].startswith("#")
        assert len(lines) == 1 + 56 * 32
        first = lines[1].split()
        assert first == ["0", "0", "0.0", repr(float(eye.traces[0, 0]))]
        # numeric parse-back reproduces the trace matrix exactly
        vals = np.array([float(ln.split()[3]) for ln in lines[1:]]).reshape(56, 32)
        np.testing.assert_array_equal(vals, eye.traces)


class TestQResultInvariants:
    def test_out_of_range_rejected(self):
        kwargs = dict(
            q_linear=5.0, q_db=13.97, ber=1e-7, jitter_ns=0.0, decision_phase=0,
            threshold=0.5, mu1=1.0, sigma1=0.1, mu0=0.0, sigma0=0.1,
            n_ones=10, n_zeros=10, delay_samples=0,
        )
        fl.QResult(**kwargs)  # sanity: valid values construct fine
        with pytest.raises(ValueError):
            fl.QResult(**{**kwargs, "ber": 0.7})
        with pytest.raises(ValueError):
            fl.QResult(**{**kwargs, "q_linear": -1.0})
        with pytest.raises(ValueError):
            fl.QResult(**{**kwargs, "jitter_ns": -0.5})
