"""Multimode sinusoidal Raman susceptibility in reduced form.

Every quantity downstream only needs the depth-scaled susceptibility

    psi(theta) = (z / 2c) * chi_m(theta) = sum_j (d_j / w_j) * sin(w_j * theta + phi_j)

where ``d_j`` is the comb depth (alpha_j * z) of mode ``j``.  The propagation
distance is therefore folded into the profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

SCAN_SAMPLES_PER_PERIOD = 256


@dataclass(frozen=True)
class RamanMode:
    """One coherently excited Raman transition.

    Parameters
    ----------
    comb_depth : float
        Dimensionless product alpha_j * z.  Negative depth is equivalent to a
        phase shift of pi.
    omega : float
        Angular frequency of the molecular oscillation, > 0.
    phase : float
        Phase offset in radians.
    """

    comb_depth: float
    omega: float
    phase: float = 0.0

    def __post_init__(self):
        for name in ("comb_depth", "omega", "phase"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.omega <= 0.0:
            raise ValueError(f"omega must be positive, got {self.omega!r}")

    @property
    def amplitude(self) -> float:
        """Reduced amplitude ``comb_depth / omega`` (time units)."""
        return self.comb_depth / self.omega

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def with_depth(self, comb_depth: float) -> "RamanMode":
        return RamanMode(comb_depth, self.omega, self.phase)


@dataclass(frozen=True)
class SusceptibilityProfile:
    """Ordered collection of Raman modes; the empty profile means no modulation."""

    modes: tuple[RamanMode, ...] = field(default_factory=tuple)

    def __post_init__(self):
        modes = tuple(self.modes)
        for m in modes:
            if not isinstance(m, RamanMode):
                raise TypeError(f"expected RamanMode, got {type(m).__name__}")
        object.__setattr__(self, "modes", modes)

    @classmethod
    def from_tuples(cls, items: Iterable[Sequence[float]]) -> "SusceptibilityProfile":
        """Build from ``(comb_depth, omega[, phase])`` tuples."""
        return cls(tuple(RamanMode(*item) for item in items))

    def __len__(self) -> int:
        return len(self.modes)

    def __add__(self, other: "SusceptibilityProfile") -> "SusceptibilityProfile":
        return SusceptibilityProfile(self.modes + other.modes)

    @property
    def depths(self) -> np.ndarray:
        return np.array([m.comb_depth for m in self.modes], dtype=float)

    @property
    def omegas(self) -> np.ndarray:
        return np.array([m.omega for m in self.modes], dtype=float)

    @property
    def phases(self) -> np.ndarray:
        return np.array([m.phase for m in self.modes], dtype=float)

    @property
    def amplitudes(self) -> np.ndarray:
        return self.depths / self.omegas if self.modes else np.zeros(0)

    @property
    def bound(self) -> float:
        """Upper bound ``sum_j |a_j|`` on ``|psi|``."""
        return float(np.sum(np.abs(self.amplitudes)))

    @property
    def total_depth(self) -> float:
        """``sum_j |d_j|``, a bound on ``|psi'|``."""
        return float(np.sum(np.abs(self.depths)))

    @property
    def omega_min(self) -> float:
        return float(self.omegas.min()) if self.modes else 1.0

    @property
    def omega_max(self) -> float:
        return float(self.omegas.max()) if self.modes else 1.0

    def negated(self) -> "SusceptibilityProfile":
        """Profile with every comb depth negated (runs the characteristics backwards)."""
        return SusceptibilityProfile(tuple(m.with_depth(-m.comb_depth) for m in self.modes))

    def components(self) -> list["SusceptibilityProfile"]:
        """Single-mode decomposition."""
        return [SusceptibilityProfile((m,)) for m in self.modes]


@dataclass(frozen=True)
class FrameConvention:
    """Lab-frame bookkeeping for the reduced local time.

    The reduced time is ``eta = tau - z / v`` with ``tau = t - z / c`` and the
    average velocity ``v = 2c / chi0``.  Nothing in the reduced-time
    computation depends on this record; it exists for unit conversion only.
    """

    chi0: float
    c: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.chi0) and math.isfinite(self.c)) or self.c <= 0.0:
            raise ValueError("chi0 must be finite and c positive")

    @property
    def velocity(self) -> float:
        return 2.0 * self.c / self.chi0 if self.chi0 != 0.0 else math.inf

    def local_time(self, eta, z):
        """Local time ``tau`` for reduced time ``eta`` at distance ``z``."""
        return np.asarray(eta) + z / self.velocity

    def lab_time(self, eta, z):
        """Laboratory time ``t`` for reduced time ``eta`` at distance ``z``."""
        return self.local_time(eta, z) + z / self.c


def _arrays(profile: SusceptibilityProfile):
    return profile.depths, profile.omegas, profile.phases


def eval_psi(profile: SusceptibilityProfile, theta):
    """Reduced susceptibility ``psi(theta)``; scalar in, scalar out."""
    depth, omega, phase = _arrays(profile)
    th = np.asarray(theta, dtype=float)
    out = np.zeros_like(th)
    for d, w, p in zip(depth, omega, phase):
        out = out + (d / w) * np.sin(w * th + p)
    return float(out) if out.ndim == 0 else out


def eval_psi_prime(profile: SusceptibilityProfile, theta):
    """Exact derivative ``psi'(theta) = sum_j d_j cos(w_j theta + phi_j)``."""
    depth, omega, phase = _arrays(profile)
    th = np.asarray(theta, dtype=float)
    out = np.zeros_like(th)
    for d, w, p in zip(depth, omega, phase):
        out = out + d * np.cos(w * th + p)
    return float(out) if out.ndim == 0 else out


def find_zeros(
    profile: SusceptibilityProfile,
    interval: tuple[float, float],
    samples_per_period: int = SCAN_SAMPLES_PER_PERIOD,
) -> list[float]:
    """Roots of ``psi`` on a closed interval, sorted ascending.

    Roots are bracketed by sign changes on a uniform scan grid
    (``samples_per_period`` points per shortest mode period) and refined by
    bisection until the bracket can no longer be split, which is well inside
    ``1e-12 * 2*pi / omega_min``.  Zeros that touch the axis
    without a sign change are only found if they land exactly on a scan node.
    The empty profile vanishes identically and reports no zeros.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("interval must be finite")
    if hi < lo:
        raise ValueError(f"interval is reversed: [{lo}, {hi}]")
    if not profile.modes or profile.bound == 0.0:
        return []

    step = (2.0 * math.pi / profile.omega_max) / samples_per_period
    n = max(2, int(math.ceil((hi - lo) / step)) + 1)
    grid = np.linspace(lo, hi, n)
    vals = eval_psi(profile, grid)
    sgn = np.sign(vals)

    exact = grid[sgn == 0.0]
    idx = np.flatnonzero(sgn[:-1] * sgn[1:] < 0.0)
    a = grid[idx].copy()
    b = grid[idx + 1].copy()
    fa = vals[idx].copy()

    # a fixed tolerance in units of the longest period is too loose when a
    # weak slow mode sets omega_min, so bisect to floating-point resolution
    while a.size:
        mid = 0.5 * (a + b)
        if np.all((mid == a) | (mid == b)):
            break
        fm = eval_psi(profile, mid)
        left = np.sign(fm) == np.sign(fa)
        a = np.where(left, mid, a)
        fa = np.where(left, fm, fa)
        b = np.where(left, b, mid)
    roots = 0.5 * (a + b)
    return sorted(float(r) for r in np.concatenate([exact, roots]))
