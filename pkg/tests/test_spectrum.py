import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jv

from ramanfm.propagation import CascadeStage, FieldTrace, ProbePulse, make_grid, propagate_mixture
from ramanfm.spectrum import (
    DegenerateSpectrum,
    Spectrum,
    dft_spectrum,
    envelope_fwhm,
    inverse_dft,
    modulation_depth,
    phase_compensate,
    predict_sidebands,
    spectral_extent,
)
from ramanfm.susceptibility import RamanMode, SusceptibilityProfile

from helpers import TIGHT


def trace_of(e, t0=0.0, dt=0.1):
    e = np.asarray(e, dtype=float)
    grid = t0 + dt * np.arange(e.size)
    return FieldTrace(grid, e, np.ones_like(e), grid)


def spectrum_of(mags):
    mags = np.asarray(mags, dtype=float)
    freqs = np.arange(mags.size, dtype=float)
    return Spectrum(freqs, mags.astype(complex), {"n": 2 * (mags.size - 1), "dt": 1.0, "t0": 0.0})


class TestDft:
    def test_pure_cosine_single_bin(self):
        n, dt = 256, 0.05
        grid = dt * np.arange(n)
        k = 9
        w = 2 * math.pi * k / (n * dt)
        sp = dft_spectrum(trace_of(np.cos(w * grid), dt=dt))
        mag = sp.magnitude
        assert np.argmax(mag) == k
        others = np.delete(mag, k)
        assert np.max(others) < 1e-10 * mag[k]
        assert mag[k] == pytest.approx(0.5 * n * dt, rel=1e-12)

    def test_bin_spacing(self):
        sp = dft_spectrum(trace_of(np.ones(100), dt=0.2))
        assert sp.freqs[1] - sp.freqs[0] == pytest.approx(2 * math.pi / (100 * 0.2))

    def test_zero_trace(self):
        sp = dft_spectrum(trace_of(np.zeros(64)))
        assert np.all(sp.amps == 0)

    @pytest.mark.parametrize("n", [255, 256])
    def test_parseval(self, n):
        rng = np.random.default_rng(n)
        tr = trace_of(rng.normal(size=n), t0=-3.0, dt=0.07)
        sp = dft_spectrum(tr)
        assert sp.energy() == pytest.approx(np.sum(tr.e**2) * tr.dt, rel=1e-9)

    def test_phase_referred_to_origin(self):
        # a cosine peaking at t = 0 has zero phase whatever the first sample is
        n, dt = 200, 0.1
        w = 2 * math.pi * 7 / (n * dt)
        t0 = -4.3
        grid = t0 + dt * np.arange(n)
        sp = dft_spectrum(FieldTrace(grid, np.cos(w * grid), np.ones(n), grid))
        assert sp.phase[7] == pytest.approx(0.0, abs=1e-9)

    def test_meta_and_taper(self):
        sp = dft_spectrum(trace_of(np.ones(32)), taper="hann")
        assert sp.window_meta["taper"] == "hann" and sp.window_meta["n"] == 32
        with pytest.raises(ValueError):
            dft_spectrum(trace_of(np.ones(32)), taper="kaiser")

    def test_line_magnitudes_range(self):
        sp = dft_spectrum(trace_of(np.ones(32)))
        with pytest.raises(ValueError):
            sp.line_magnitudes([1e6])


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 300), st.integers(0, 2**32 - 1), st.floats(-50, 50))
def test_round_trip(n, seed, t0):
    rng = np.random.default_rng(seed)
    tr = trace_of(rng.normal(size=n), t0=t0, dt=0.13)
    back = inverse_dft(dft_spectrum(tr))
    np.testing.assert_allclose(back, tr.e, rtol=1e-10, atol=1e-10 * np.max(np.abs(tr.e)))


class TestPhaseCompensate:
    def test_zero_phase_unchanged(self):
        n, dt = 128, 0.1
        grid = dt * (np.arange(n) - n // 2)
        e = np.exp(-grid**2)
        # symmetric about t = 0 on a periodic grid, so already zero phase
        sp = dft_spectrum(FieldTrace(grid, e, np.ones(n), grid))
        out = phase_compensate(sp)
        np.testing.assert_allclose(out.e, e, atol=1e-12)

    def test_zero_spectrum(self):
        out = phase_compensate(dft_spectrum(trace_of(np.zeros(16))))
        assert np.all(out.e == 0)

    def test_peak_at_origin(self):
        n, dt = 400, 0.05
        grid = dt * (np.arange(n) - 150)
        rng = np.random.default_rng(1)
        e = rng.normal(size=n)
        out = phase_compensate(dft_spectrum(FieldTrace(grid, e, np.ones(n), grid)))
        assert out.grid[np.argmax(out.e)] == pytest.approx(0.0, abs=1e-12)


class TestExtent:
    def test_single_bin(self):
        ext = spectral_extent(spectrum_of([0, 0, 3.0, 0]))
        assert (ext.lo, ext.hi, ext.asymmetry) == (2.0, 2.0, 0.0)

    def test_symmetric_three_bins(self):
        ext = spectral_extent(spectrum_of([0, 1.0, 2.0, 1.0, 0]))
        assert (ext.lo, ext.hi) == (1.0, 3.0)
        assert ext.asymmetry == pytest.approx(0.0, abs=1e-15)

    def test_skewed(self):
        ext = spectral_extent(spectrum_of([0, 4.0, 1.0, 1.0, 1.0]))
        assert ext.asymmetry > 0.0

    def test_floor_validation(self):
        with pytest.raises(ValueError):
            spectral_extent(spectrum_of([1.0, 2.0]), floor=1.0)

    def test_degenerate(self):
        with pytest.raises(DegenerateSpectrum):
            spectral_extent(spectrum_of([0.0, 0.0, 0.0]))


def test_envelope_fwhm_gaussian():
    grid = np.linspace(-20, 20, 8001)
    tr = FieldTrace(grid, np.exp(-(grid / 3.0) ** 2) * np.cos(8 * grid), np.ones_like(grid), grid)
    assert envelope_fwhm(tr) == pytest.approx(2 * 3.0 * math.sqrt(math.log(2)), rel=1e-3)


class TestModulationDepth:
    @pytest.mark.parametrize("depth,omega", [(0.587, 587.0), (0.179, 179.0)])
    def test_h2_d2(self, depth, omega):
        assert modulation_depth(RamanMode(depth, omega), 20000.0) == pytest.approx(20.0, abs=0.5)

    def test_zero_depth(self):
        assert modulation_depth(RamanMode(0.0, 3.0), 10.0) == 0.0

    def test_bad_carrier(self):
        with pytest.raises(ValueError):
            modulation_depth(RamanMode(0.1, 3.0), 0.0)


class TestPredictSidebands:
    def test_zero_depth(self):
        pulse = ProbePulse(20.0, math.inf)
        stages = [CascadeStage(SusceptibilityProfile.from_tuples([(0.0, 1.0, 0.0)])),
                  CascadeStage(SusceptibilityProfile.from_tuples([(0.0, 0.7, 0.0)]))]
        pred = predict_sidebands(pulse, stages, 3)
        assert pred.amplitude((0, 0)) == 1.0
        nonzero = [o for o, a in zip(pred.orders, pred.amps) if a != 0.0]
        assert nonzero == [(0, 0)]

    def test_first_sideband_ratio(self):
        prof = SusceptibilityProfile.from_tuples([(0.002, 1.0, 0.0)])
        pred = predict_sidebands(ProbePulse(20.0, math.inf), prof, 2)
        ratio = pred.amplitude((1,)) / pred.amplitude((0,))
        assert ratio == pytest.approx(jv(1, 0.04) / jv(0, 0.04), rel=1e-14)
        assert ratio == pytest.approx(0.02, rel=1e-3)
        assert pred.freqs[pred.orders.index((1,))] == 21.0

    def test_large_depth_warns(self):
        prof = SusceptibilityProfile.from_tuples([(0.5, 1.0, 0.0)])
        with pytest.warns(UserWarning):
            predict_sidebands(ProbePulse(20.0, math.inf), prof, 2)

    @pytest.mark.parametrize("xi", [0.3, 1.7, 5.0])
    def test_sum_rule(self, xi):
        prof = SusceptibilityProfile.from_tuples([(xi / 20.0, 1.0, 0.0)])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            pred = predict_sidebands(ProbePulse(20.0, math.inf), prof, int(math.ceil(xi)) + 20)
        assert np.sum(pred.amps**2) == pytest.approx(1.0, abs=1e-6)


def test_small_depth_convergence():
    # first-sideband/carrier ratio from the full pipeline tends to xi/2.
    # Each single sideband carries a (1 +- w/w0) factor from the amplitude
    # scaling by G, so the upper/lower pair average is the quantity compared.
    w0, n_periods = 20.0, 4
    errors = []
    for depth in (0.004, 0.002, 0.001):
        prof = SusceptibilityProfile.from_tuples([(depth, 1.0, 0.0)])
        n = 8192
        grid = np.arange(n) * (2 * math.pi * n_periods / n)
        sp = dft_spectrum(propagate_mixture(ProbePulse(w0, math.inf), prof, grid, TIGHT))
        carrier, upper, lower = sp.line_magnitudes([w0, w0 + 1.0, w0 - 1.0])
        xi = modulation_depth(prof.modes[0], w0)
        err = abs(0.5 * (upper + lower) / carrier - xi / 2)
        assert err <= xi**2
        errors.append(err)
    assert errors[0] > errors[1] > errors[2]
