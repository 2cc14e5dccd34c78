"""Spectra of field traces, small-depth sideband prediction and zero-phase synthesis.

Normalisation: for a trace sampled at ``t_n = t_0 + n*dt`` the one-sided
spectrum is ``A_k = dt * sum_n e[n] exp(-i w_k t_n)`` with ``w_k = 2*pi*k/(N*dt)``.
Phases are referred to absolute time ``t = 0``, not to the first sample.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.signal import hilbert
from scipy.special import jv

from .propagation import CascadeStage, FieldTrace, ProbePulse
from .susceptibility import RamanMode, SusceptibilityProfile

TAPERS = ("none", "hann")
NORMALIZATION = "A_k = dt * sum_n e[n] exp(-i w_k t_n)"
SMALL_DEPTH_LIMIT = 0.1


class DegenerateSpectrum(ValueError):
    """No spectral content above the requested floor."""


@dataclass(frozen=True)
class Spectrum:
    freqs: np.ndarray
    amps: np.ndarray
    window_meta: dict = field(default_factory=dict)

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.amps)

    @property
    def phase(self) -> np.ndarray:
        return np.angle(self.amps)

    @property
    def n(self) -> int:
        return int(self.window_meta["n"])

    @property
    def dt(self) -> float:
        return float(self.window_meta["dt"])

    def _one_sided_weights(self) -> np.ndarray:
        w = np.full(self.amps.size, 2.0)
        w[0] = 1.0
        if self.n % 2 == 0:
            w[-1] = 1.0
        return w

    def energy(self) -> float:
        """``sum |e|^2 dt`` recovered from the spectrum (Parseval)."""
        return float(np.sum(self._one_sided_weights() * self.magnitude**2) / (self.n * self.dt))

    def centroid(self) -> float:
        """Amplitude-weighted mean frequency."""
        mag = self.magnitude
        total = mag.sum()
        if total == 0.0:
            raise DegenerateSpectrum("zero spectrum has no centroid")
        return float(np.sum(self.freqs * mag) / total)

    def line_magnitudes(self, freqs) -> np.ndarray:
        """Magnitude at the bins nearest to ``freqs``."""
        dw = self.freqs[1] - self.freqs[0]
        k = np.rint(np.asarray(freqs, dtype=float) / dw).astype(int)
        if np.any((k < 0) | (k >= self.freqs.size)):
            raise ValueError("requested frequency outside the spectrum")
        return self.magnitude[k]


def dft_spectrum(trace: FieldTrace, taper: str = "none") -> Spectrum:
    if taper not in TAPERS:
        raise ValueError(f"taper must be one of {TAPERS}, got {taper!r}")
    n, dt, t0 = trace.n, trace.dt, float(trace.grid[0])
    step = np.diff(trace.grid)
    if np.max(np.abs(step - dt)) > 1e-9 * dt + 1e-12 * max(abs(t0), abs(trace.grid[-1])):
        raise ValueError("dft_spectrum needs a uniform grid")
    e = trace.e * np.hanning(n) if taper == "hann" else trace.e
    freqs = 2.0 * math.pi * np.fft.rfftfreq(n, dt)
    amps = dt * np.fft.rfft(e) * np.exp(-1j * freqs * t0)
    meta = {"taper": taper, "n": n, "dt": dt, "t0": t0, "normalization": NORMALIZATION}
    return Spectrum(freqs, amps, meta)


def _to_time(spectrum: Spectrum, amps) -> np.ndarray:
    t0 = float(spectrum.window_meta["t0"])
    return np.fft.irfft(amps * np.exp(1j * spectrum.freqs * t0), n=spectrum.n) / spectrum.dt


def inverse_dft(spectrum: Spectrum) -> np.ndarray:
    """Samples of the (tapered) trace the spectrum was taken from."""
    return _to_time(spectrum, spectrum.amps)


def _grid_of(spectrum: Spectrum) -> np.ndarray:
    t0 = float(spectrum.window_meta["t0"])
    return t0 + spectrum.dt * np.arange(spectrum.n)


def phase_compensate(spectrum: Spectrum) -> FieldTrace:
    """Set every spectral component to zero phase and return to the time domain.

    With phases referred to ``t = 0`` the synthesised pulse peaks at ``t = 0``
    (modulo the grid's periodic extension).
    """
    grid = _grid_of(spectrum)
    e = _to_time(spectrum, spectrum.magnitude.astype(complex))
    return FieldTrace(grid, e, np.ones_like(grid), grid.copy())


@dataclass(frozen=True)
class SpectralExtent:
    lo: float
    hi: float
    centroid: float
    asymmetry: float


def spectral_extent(spectrum: Spectrum, floor: float = 1e-3) -> SpectralExtent:
    """Lowest and highest frequencies with ``|A| >= floor * max|A|``.

    ``asymmetry = (hi - c) / (c - lo) - 1`` with ``c`` the amplitude-weighted
    centroid; it is 0 when only one bin survives.
    """
    if not 0.0 < floor < 1.0:
        raise ValueError("floor must lie in (0, 1)")
    mag = spectrum.magnitude
    peak = mag.max() if mag.size else 0.0
    if not peak > 0.0:
        raise DegenerateSpectrum("spectrum is identically zero")
    keep = spectrum.freqs[mag >= floor * peak]
    lo, hi = float(keep.min()), float(keep.max())
    c = spectrum.centroid()
    if hi == lo:
        return SpectralExtent(lo, hi, c, 0.0)
    below = c - lo
    asym = math.inf if below <= 0.0 else (hi - c) / below - 1.0
    return SpectralExtent(lo, hi, c, asym)


def envelope_fwhm(trace: FieldTrace) -> float:
    """FWHM of the analytic-signal envelope around its global maximum."""
    env = np.abs(hilbert(trace.e))
    j = int(np.argmax(env))
    half = 0.5 * env[j]
    if not half > 0.0:
        raise DegenerateSpectrum("zero trace has no width")

    def crossing(direction):
        i = j
        while 0 <= i + direction < env.size and env[i + direction] > half:
            i += direction
        k = i + direction
        if not 0 <= k < env.size:
            raise ValueError("envelope does not fall to half maximum inside the grid")
        # linear interpolation between the last node above and the first below
        frac = (env[i] - half) / (env[i] - env[k])
        return trace.grid[i] + direction * frac * trace.dt

    return float(crossing(1) - crossing(-1))


def modulation_depth(mode: RamanMode, omega0: float) -> float:
    """Phase-modulation index ``comb_depth * w0 / w_j`` imparted on the carrier."""
    if not omega0 > 0.0:
        raise ValueError("omega0 must be positive")
    return mode.comb_depth * omega0 / mode.omega


@dataclass(frozen=True)
class SidebandPrediction:
    orders: list
    freqs: np.ndarray
    amps: np.ndarray

    def amplitude(self, order) -> float:
        return float(self.amps[self.orders.index(tuple(order))])


def _collect_modes(stages) -> list[RamanMode]:
    if isinstance(stages, SusceptibilityProfile):
        return list(stages.modes)
    modes = []
    for st in stages:
        prof = st.profile if isinstance(st, CascadeStage) else st
        modes.extend(prof.modes)
    return modes


def predict_sidebands(
    pulse: ProbePulse,
    stages: Union[SusceptibilityProfile, Sequence[CascadeStage]],
    max_order: int,
) -> SidebandPrediction:
    """Small-depth sideband amplitudes ``prod_j J_{q_j}(xi_j)`` relative to the input carrier.

    To first order the input time is ``s = eta - sum_j (d_j/w_j) sin(w_j eta + phi_j)``,
    so ``exp(i w0 s)`` is a product of pure phase modulations with indices
    ``xi_j = d_j w0 / w_j``.  The generating function of the Bessel functions
    splits each into lines at ``w0 + q_j w_j`` of magnitude ``|J_{q_j}(xi_j)|``;
    the per-line phases ``exp(-i q_j phi_j)`` and signs ``(-1)^q_j`` are dropped.
    Mixtures and cascades give the same prediction at this order.
    """
    modes = _collect_modes(stages)
    big = [m.comb_depth for m in modes if abs(m.comb_depth) > SMALL_DEPTH_LIMIT]
    if big:
        warnings.warn(
            f"comb depths {big} exceed {SMALL_DEPTH_LIMIT}; the Bessel sideband "
            "prediction is a small-depth approximation",
            stacklevel=2,
        )
    xi = [modulation_depth(m, pulse.omega0) for m in modes]
    orders = list(itertools.product(range(-max_order, max_order + 1), repeat=len(modes)))
    freqs = np.array(
        [pulse.omega0 + sum(q * m.omega for q, m in zip(qs, modes)) for qs in orders]
    )
    amps = np.array([math.prod(float(jv(q, x)) for q, x in zip(qs, xi)) for qs in orders])
    return SidebandPrediction(orders, freqs, amps)
