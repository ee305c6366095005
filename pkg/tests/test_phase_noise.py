import numpy as np
import pytest

from ptrslink.errors import ConfigError
from ptrslink.phase_noise import (
    SET_A,
    SET_B,
    PhaseNoiseProcess,
    PoleZeroPsdModel,
    design_shaping_filter,
    estimate_psd,
    filter_response_db,
    generate,
    psd_at,
    warmup_length,
    with_carrier,
    write_psd_csv,
)

FS = 122.88e6

# Scalar evaluation of the PSD formula in an interpreter session, frozen
# before the module was written.
SET_A_AT_1MHZ = -111.67368423294947
SHIFT_30_TO_60 = 6.020599913279624


def all_pass(psd0=-80.0, f0=1e6):
    return PoleZeroPsdModel(psd0_dbc_hz=psd0, zeros_hz=(f0,), poles_hz=(f0,),
                            base_carrier_hz=30e9, carrier_hz=30e9)


class TestPsdAt:
    def test_set_a_at_zero(self):
        assert psd_at(SET_A, 0.0) == pytest.approx(-79.4, abs=1e-12)

    def test_set_b_at_zero(self):
        assert psd_at(SET_B, 0.0) == pytest.approx(-70.0, abs=1e-12)

    def test_carrier_shift_is_6db_for_doubling(self):
        at60 = with_carrier(SET_A, 60e9)
        for f in (0.0, 1e4, 1e6, 3e7):
            assert psd_at(at60, f) - psd_at(SET_A, f) == pytest.approx(SHIFT_30_TO_60, abs=1e-9)

    def test_set_a_1mhz_frozen_oracle(self):
        assert psd_at(SET_A, 1e6) == pytest.approx(SET_A_AT_1MHZ, abs=1e-9)

    def test_equal_scaling_of_carriers_is_invariant(self):
        scaled = PoleZeroPsdModel(SET_A.psd0_dbc_hz, SET_A.zeros_hz, SET_A.poles_hz,
                                  base_carrier_hz=SET_A.base_carrier_hz * 3.7,
                                  carrier_hz=SET_A.carrier_hz * 3.7)
        f = np.logspace(2, 7, 50)
        np.testing.assert_allclose(psd_at(scaled, f), psd_at(SET_A, f), atol=1e-9)

    def test_product_equals_per_section_db_sum(self):
        f = np.logspace(1, 7.5, 200)
        for model in (SET_A, SET_B):
            db_sum = np.zeros_like(f)
            for fz, fp in zip(model.zeros_hz, model.poles_hz):
                db_sum += 10 * np.log10(1 + (f / fz) ** 2)
                db_sum -= 10 * np.log10(1 + (f / fp) ** 2)
            expected = model.psd0_dbc_hz + db_sum + model.carrier_shift_db
            np.testing.assert_allclose(psd_at(model, f), expected, atol=1e-9)

    def test_array_and_scalar_agree(self):
        f = np.array([0.0, 1e5, 1e6])
        arr = psd_at(SET_A, f)
        assert arr.shape == (3,)
        assert arr[2] == pytest.approx(psd_at(SET_A, 1e6))

    @pytest.mark.parametrize("bad", [-1.0, np.nan, np.inf])
    def test_bad_frequency_rejected(self, bad):
        with pytest.raises(ValueError):
            psd_at(SET_A, bad)


class TestModelValidation:
    def test_length_mismatch(self):
        with pytest.raises(ConfigError):
            PoleZeroPsdModel(-80, (1e6,), (1e5, 1e6), 30e9, 30e9)

    def test_nonpositive_frequency(self):
        with pytest.raises(ConfigError):
            PoleZeroPsdModel(-80, (0.0,), (1e5,), 30e9, 30e9)

    def test_empty_sections(self):
        with pytest.raises(ConfigError):
            PoleZeroPsdModel(-80, (), (), 30e9, 30e9)


class TestShapingFilter:
    def test_all_pass_response_is_flat(self):
        filt = design_shaping_filter(all_pass(), FS)
        resp = filter_response_db(filt, np.logspace(3, 7, 60))
        np.testing.assert_allclose(resp, 0.0, atol=1e-9)

    @pytest.mark.parametrize("model,f_check", [(SET_A, 1e6), (SET_B, 1e5)])
    def test_response_matches_psd_shape(self, model, f_check):
        filt = design_shaping_filter(model, FS)
        resp = filter_response_db(filt, np.array([f_check]))[0]
        target = psd_at(model, f_check) - psd_at(model, 0.0)
        assert resp == pytest.approx(target, abs=0.5)

    def test_response_matches_on_grid(self):
        filt = design_shaping_filter(SET_A, FS)
        freqs = np.logspace(4, 7, 40)
        resp = filter_response_db(filt, freqs)
        target = psd_at(SET_A, freqs) - psd_at(SET_A, 0.0)
        assert np.max(np.abs(resp - target)) < 0.5

    def test_gain_includes_carrier_shift(self):
        g30 = design_shaping_filter(SET_A, FS).gain
        g60 = design_shaping_filter(with_carrier(SET_A, 60e9), FS).gain
        assert g60 / g30 == pytest.approx(2.0, rel=1e-12)

    def test_low_sample_rate_names_offender(self):
        with pytest.raises(ConfigError, match="4e\\+07"):
            design_shaping_filter(SET_A, 50e6)  # needs > 80 MHz for the 40 MHz zero


class TestGenerate:
    def test_deterministic_per_seed(self):
        a = generate(SET_A, FS, 5000, seed=42)
        b = generate(SET_A, FS, 5000, seed=42)
        assert np.array_equal(a.samples_rad, b.samples_rad)

    def test_seeds_differ(self):
        a = generate(SET_A, FS, 5000, seed=1)
        b = generate(SET_A, FS, 5000, seed=2)
        assert not np.array_equal(a.samples_rad, b.samples_rad)

    def test_requested_count(self):
        assert generate(SET_A, FS, 12345, seed=0).samples_rad.size == 12345

    def test_zero_count_rejected(self):
        with pytest.raises(ValueError):
            generate(SET_A, FS, 0, seed=0)

    def test_warmup_length(self):
        assert warmup_length(SET_A, FS) == int(np.ceil(8 * FS / 0.1e6))
        slow = PoleZeroPsdModel(-80, (1e3,), (1.0,), 30e9, 30e9)
        assert warmup_length(slow, FS) == 2**20

    def test_all_pass_unit_variance(self):
        # gain convention: variance of the stream is psd0_linear * fs
        fs = 10e6
        model = all_pass(psd0=-10 * np.log10(fs), f0=1e5)
        theta = generate(model, fs, 10**6, seed=7).samples_rad
        assert np.var(theta) == pytest.approx(1.0, rel=0.05)


class TestEstimatePsd:
    def test_sinusoid_dominant_bin(self):
        fs = 1e6
        n = 2**16
        f0 = 12500.0  # exactly bin 100 of a 8192-sample segment
        t = np.arange(n) / fs
        proc = PhaseNoiseProcess(0.3 * np.sin(2 * np.pi * f0 * t), fs, None, 0)
        freqs, psd = estimate_psd(proc, segment_len=8192, overlap_frac=0.0)
        assert freqs[np.argmax(psd)] == pytest.approx(f0, abs=fs / 8192)

    def test_flat_for_all_pass(self):
        fs = 10e6
        proc = generate(all_pass(psd0=-80.0, f0=1e5), fs, 2**19, seed=3)
        freqs, psd = estimate_psd(proc, segment_len=4096, overlap_frac=0.5)
        band = (freqs > 0.05 * fs) & (freqs < 0.45 * fs)
        assert np.max(np.abs(psd[band] - (-80.0))) < 2.0

    def test_set_a_stream_tracks_model(self):
        proc = generate(SET_A, FS, 2**19, seed=11)
        freqs, psd = estimate_psd(proc, segment_len=8192, overlap_frac=0.5)
        band = (freqs >= 1e5) & (freqs <= 1e7)
        err = psd[band] - psd_at(SET_A, freqs[band])
        assert np.max(np.abs(err)) < 3.0

    def test_segment_longer_than_data(self):
        proc = generate(SET_A, FS, 1000, seed=0)
        with pytest.raises(ValueError):
            estimate_psd(proc, segment_len=2048)

    @pytest.mark.parametrize("bad", [-0.1, 1.0, 1.5])
    def test_bad_overlap(self, bad):
        proc = generate(SET_A, FS, 4096, seed=0)
        with pytest.raises(ValueError):
            estimate_psd(proc, segment_len=1024, overlap_frac=bad)

    def test_more_segments_do_not_hurt(self):
        # band-averaged signed error should not move away from 0 dB when the
        # number of averaged segments doubles
        errs = {n: [] for n in (2**18, 2**19)}
        for seed in range(3):
            for n in errs:
                proc = generate(SET_A, FS, n, seed=seed)
                freqs, psd = estimate_psd(proc, segment_len=4096, overlap_frac=0.5)
                band = (freqs >= 1e5) & (freqs <= 1e7)
                errs[n].append(np.mean(psd[band] - psd_at(SET_A, freqs[band])))
        short = np.mean(np.abs(errs[2**18]))
        long = np.mean(np.abs(errs[2**19]))
        assert long <= short + 0.3

    def test_csv_export(self, tmp_path):
        proc = generate(SET_A, FS, 2**14, seed=5)
        freqs, psd = estimate_psd(proc, segment_len=1024)
        path = tmp_path / "psd.csv"
        write_psd_csv(path, freqs, psd)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "frequency_hz,psd_dbc_hz"
        assert len(lines) == freqs.size + 1
        f0, p0 = map(float, lines[1].split(","))
        assert f0 == pytest.approx(freqs[0])
        assert p0 == pytest.approx(psd[0])
