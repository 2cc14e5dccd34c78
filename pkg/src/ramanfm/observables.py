"""Conserved and non-conserved diagnostics of propagated traces.

Pulse area, photon number (with hbar and c*eps0/2 set to 1), the product of
window length and mean frequency, and the number of optical oscillations are
conserved; energy is not.  Integrals use composite Simpson quadrature on the
trace's uniform grid, over windows snapped to grid nodes.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy.integrate import simpson

from .propagation import FieldTrace, ProbePulse, sample_input

EPS_FLOOR = 1e-12


class ResolutionError(ValueError):
    """The grid does not resolve the local optical period."""


def _window(trace: FieldTrace, window):
    i1, i2 = trace.window_indices(window)
    return slice(i1, i2 + 1)


def _integrate(y, dx):
    return float(simpson(y, dx=dx))


def pulse_area(trace: FieldTrace, window=None) -> float:
    sl = _window(trace, window)
    return _integrate(trace.e[sl], trace.dt)


def energy(trace: FieldTrace, window=None) -> float:
    sl = _window(trace, window)
    return _integrate(trace.e[sl] ** 2, trace.dt)


def _require_omega0(trace):
    if trace.omega0 is None:
        raise ValueError("trace carries no carrier frequency omega0")
    return trace.omega0


def instantaneous_frequency(trace: FieldTrace) -> np.ndarray:
    """Local oscillation frequency ``G * w0``."""
    return trace.g * _require_omega0(trace)


def photon_number(trace: FieldTrace, window=None) -> float:
    sl = _window(trace, window)
    w = instantaneous_frequency(trace)[sl]
    return _integrate(trace.e[sl] ** 2 / w, trace.dt)


def mean_frequency(trace: FieldTrace, window=None) -> float:
    i1, i2 = trace.window_indices(window)
    w = instantaneous_frequency(trace)[i1 : i2 + 1]
    return _integrate(w, trace.dt) / (trace.grid[i2] - trace.grid[i1])


def count_oscillations(trace: FieldTrace, window=None) -> int:
    """Number of strict sign changes of the field, ignoring exact zeros.

    Raises :class:`ResolutionError` when the carrier advances by more than
    pi/2 between adjacent samples anywhere in the window.
    """
    sl = _window(trace, window)
    if trace.omega0 is not None:
        advance = float(np.max(trace.g[sl])) * trace.omega0 * trace.dt
        if advance > 0.5 * math.pi:
            raise ResolutionError(
                f"phase advance {advance:.3g} rad per sample exceeds pi/2; refine the grid"
            )
    sgn = np.sign(trace.e[sl])
    sgn = sgn[sgn != 0.0]
    return int(np.count_nonzero(sgn[1:] != sgn[:-1]))


@dataclass(frozen=True)
class ConservationReport:
    window: tuple
    input_window: tuple
    area_in: float
    area_out: float
    photons_in: float
    photons_out: float
    zero_count_in: int
    zero_count_out: int
    energy_in: float
    energy_out: float
    mean_freq_product_in: float
    mean_freq_product_out: float

    @staticmethod
    def rel_err(a, b) -> float:
        return abs(b - a) / max(abs(a), EPS_FLOOR)

    def ratios(self) -> dict:
        def ratio(a, b):
            if a == b:
                return 1.0
            return b / a if a != 0.0 else math.inf

        return {
            "area": ratio(self.area_in, self.area_out),
            "photons": ratio(self.photons_in, self.photons_out),
            "zero_count": ratio(self.zero_count_in, self.zero_count_out),
            "energy": ratio(self.energy_in, self.energy_out),
            "mean_freq_product": ratio(self.mean_freq_product_in, self.mean_freq_product_out),
        }

    def violations(self, tolerance: float = 1e-6) -> list[str]:
        """Names of conserved quantities that disagree beyond ``tolerance``."""
        out = []
        if self.rel_err(self.area_in, self.area_out) > tolerance:
            out.append("area")
        if self.rel_err(self.photons_in, self.photons_out) > tolerance:
            out.append("photons")
        if self.zero_count_in != self.zero_count_out:
            out.append("zero_count")
        if self.rel_err(self.mean_freq_product_in, self.mean_freq_product_out) > tolerance:
            out.append("mean_freq_product")
        return out

    def as_dict(self) -> dict:
        return asdict(self)


def input_side_trace(pulse: ProbePulse, output: FieldTrace, window=None) -> FieldTrace:
    """Input field sampled uniformly on the mapped window ``[s1, s2]``.

    Uses as many nodes as the output window so that both sides share the
    same quadrature rule.
    """
    i1, i2 = output.window_indices(window)
    s1, s2 = output.s[i1], output.s[i2]
    grid = np.linspace(s1, s2, i2 - i1 + 1)
    return sample_input(pulse, grid)


def conservation_report(
    pulse: ProbePulse, output: FieldTrace, window=None
) -> ConservationReport:
    """Compare the output trace on ``window`` with the input on its preimage."""
    i1, i2 = output.window_indices(window)
    inp = input_side_trace(pulse, output, window)
    win = (float(output.grid[i1]), float(output.grid[i2]))
    out_len = output.grid[i2] - output.grid[i1]
    in_len = inp.grid[-1] - inp.grid[0]
    return ConservationReport(
        window=win,
        input_window=(float(inp.grid[0]), float(inp.grid[-1])),
        area_in=pulse_area(inp),
        area_out=pulse_area(output, win),
        photons_in=photon_number(inp),
        photons_out=photon_number(output, win),
        zero_count_in=count_oscillations(inp),
        zero_count_out=count_oscillations(output, win),
        energy_in=energy(inp),
        energy_out=energy(output, win),
        mean_freq_product_in=mean_frequency(inp) * in_len,
        mean_freq_product_out=mean_frequency(output, win) * out_len,
    )
