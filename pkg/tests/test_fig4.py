"""Fig. 4 scale checks beyond the acceptance criteria (shared propagation run)."""

import numpy as np
import pytest

from ramanfm.observables import instantaneous_frequency
from ramanfm.spectrum import spectral_extent
from ramanfm.units import angular_to_wavenumber


def frequency_range(run, floor=1e-3):
    # instantaneous frequency over the output pulse support
    env = run.scenario.pulse.envelope(run.trace.s)
    support = env >= floor * env.max()
    w = angular_to_wavenumber(instantaneous_frequency(run.trace)[support])
    return float(w.min()), float(w.max())


def test_instantaneous_frequency_range(fig4_run):
    lo, hi = frequency_range(fig4_run)
    assert 8000.0 / 1.2 <= lo <= 8000.0 * 1.2
    assert 46000.0 / 1.2 <= hi <= 46000.0 * 1.2


@pytest.mark.xfail(strict=True, reason="Bessel tails carry the 1e-3 spectral floor "
                   "thousands of cm^-1 beyond the instantaneous-frequency range")
def test_spectral_extent_tracks_instantaneous_frequency(fig4_run):
    lo, hi = frequency_range(fig4_run)
    ext = spectral_extent(fig4_run.spectrum, fig4_run.scenario.floor)
    spacing = max(angular_to_wavenumber(m.omega) for m in fig4_run.scenario.profile.modes)
    assert abs(angular_to_wavenumber(ext.lo) - lo) <= spacing
    assert abs(angular_to_wavenumber(ext.hi) - hi) <= spacing


def test_map_fixed_point_at_pulse_peak(fig4_run):
    # both modes have a zero at t = 0
    i = int(np.argmin(np.abs(fig4_run.trace.grid)))
    assert fig4_run.trace.s[i] == pytest.approx(fig4_run.trace.grid[i], abs=1e-6)
