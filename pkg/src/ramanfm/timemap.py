"""Input-time map and compression factor.

The implicit relation between output time ``eta`` and input time ``s``,
``int_s^eta dtheta / psi(theta) = 1``, is solved along characteristics in a
fictitious depth fraction ``zeta`` (see :mod:`ramanfm._kernels`).  That
formulation never divides by ``psi``, so zeros of the susceptibility are
ordinary fixed points rather than singularities.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .susceptibility import RamanMode, SusceptibilityProfile, eval_psi, eval_psi_prime


class MapNonConvergence(RuntimeError):
    """The characteristics integrator exhausted its step budget."""

    def __init__(self, eta: float, zeta: float, s: float, max_steps: int):
        self.eta = eta
        self.zeta = zeta
        self.s = s
        self.max_steps = max_steps
        super().__init__(
            f"map solver hit max_steps={max_steps} at eta={eta!r} "
            f"(reached zeta={zeta!r}, s={s!r})"
        )


class SingularLinearization(ValueError):
    """The local linearisation needs ``psi'(eta_i) != 0``."""


@dataclass(frozen=True)
class MapSolverConfig:
    """Tolerances for the adaptive characteristics integrator.

    ``abs_tol=None`` means ``1e-12 * 2*pi / omega_min`` of the profile being
    solved.
    """

    rel_tol: float = 1e-10
    abs_tol: Optional[float] = None
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not self.rel_tol > 0.0:
            raise ValueError("rel_tol must be positive")
        if self.abs_tol is not None and not self.abs_tol > 0.0:
            raise ValueError("abs_tol must be positive")
        if int(self.max_steps) < 1:
            raise ValueError("max_steps must be >= 1")

    def resolved_abs_tol(self, profile: SusceptibilityProfile) -> float:
        if self.abs_tol is not None:
            return float(self.abs_tol)
        return 1e-12 * 2.0 * math.pi / profile.omega_min


@dataclass(frozen=True)
class TimeMapResult:
    eta: float
    s: float
    g: float


def solve_map_array(
    profile: SusceptibilityProfile,
    eta,
    cfg: Optional[MapSolverConfig] = None,
    backend: Optional[str] = None,
    workers: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`solve_map`: returns ``(s, g)`` arrays shaped like ``eta``.

    ``workers > 1`` splits the points into contiguous chunks solved on a
    thread pool.  Each point is integrated independently, so the result does
    not depend on the chunking.
    """
    cfg = cfg or MapSolverConfig()
    eta_arr = np.asarray(eta, dtype=float)
    flat = eta_arr.ravel()
    if not np.all(np.isfinite(flat)):
        raise ValueError("eta must be finite")
    if not profile.modes:
        return flat.copy().reshape(eta_arr.shape), np.ones_like(eta_arr)

    args = (
        profile.depths,
        profile.omegas,
        profile.phases,
    )
    tol = (cfg.rel_tol, cfg.resolved_abs_tol(profile), cfg.max_steps)

    def run(chunk):
        return _kernels.characteristics(*args, chunk, *tol, backend=backend)

    if workers > 1 and flat.size > workers:
        chunks = np.array_split(flat, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
        s, g, status, zeta = (np.concatenate(p) for p in zip(*parts))
    else:
        s, g, status, zeta = run(flat)

    bad = np.flatnonzero(status != _kernels.STATUS_OK)
    if bad.size:
        i = int(bad[0])
        raise MapNonConvergence(float(flat[i]), float(zeta[i]), float(s[i]), cfg.max_steps)
    return s.reshape(eta_arr.shape), g.reshape(eta_arr.shape)


def solve_map(
    profile: SusceptibilityProfile,
    eta: float,
    cfg: Optional[MapSolverConfig] = None,
) -> TimeMapResult:
    """Input time and compression factor for a single output time."""
    s, g = solve_map_array(profile, np.array([float(eta)]), cfg)
    return TimeMapResult(float(eta), float(s[0]), float(g[0]))


def comb_factor(mode: RamanMode, eta):
    """Closed-form single-mode compression factor (periodic comb)."""
    x = 0.5 * (mode.omega * np.asarray(eta, dtype=float) + mode.phase)
    d = mode.comb_depth
    return 1.0 / (math.exp(d) * np.cos(x) ** 2 + math.exp(-d) * np.sin(x) ** 2)


def single_mode_arrays(mode: RamanMode, eta) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form ``(s, g)`` for one mode, vectorised over ``eta``.

    ``tan((w s + phi)/2) = exp(-d) tan((w eta + phi)/2)`` is inverted on the
    branch containing ``w eta + phi``: the argument is reduced to
    ``[-pi, pi)`` around the nearest multiple of ``2 pi``, which keeps ``s``
    continuous and inside the same inter-zero interval as ``eta``.
    """
    eta = np.asarray(eta, dtype=float)
    x = mode.omega * eta + mode.phase
    k = np.floor((x + math.pi) / (2.0 * math.pi))
    # rounding in the reduction can land a hair outside [-pi, pi]
    r = np.clip(x - 2.0 * math.pi * k, -math.pi, math.pi)
    y = 2.0 * np.arctan(math.exp(-mode.comb_depth) * np.tan(0.5 * r))
    # tan(+-pi/2) is finite in floating point; pin the branch edges explicitly
    y = np.where(np.abs(r) == math.pi, r, y)
    s = (y + 2.0 * math.pi * k - mode.phase) / mode.omega
    # fixed points are exact; avoid rounding from the reduce/restore round trip
    s = np.where(mode.comb_depth == 0.0, eta, s)
    return s, comb_factor(mode, eta)


def single_mode_map(mode: RamanMode, eta: float) -> TimeMapResult:
    s, g = single_mode_arrays(mode, float(eta))
    return TimeMapResult(float(eta), float(s), float(g))


def local_linearized_map(profile: SusceptibilityProfile, eta_i: float, eta: float) -> float:
    """Input time from the susceptibility linearised about ``eta_i``.

    Returns ``s = eta_i - p/p' + (eta - eta_i + p/p') * exp(-p')`` with ``p``
    and ``p'`` the reduced susceptibility and its slope at ``eta_i``.
    """
    p = eval_psi(profile, eta_i)
    dp = eval_psi_prime(profile, eta_i)
    if dp == 0.0:
        raise SingularLinearization(f"psi'({eta_i!r}) = 0; linearisation is singular")
    shift = p / dp
    return eta_i - shift + (eta - eta_i + shift) * math.exp(-dp)


def approx_compression(profile: SusceptibilityProfile, eta_i: float) -> float:
    """Local estimate ``exp(-psi'(eta_i))`` of the compression factor."""
    return math.exp(-eval_psi_prime(profile, eta_i))


@dataclass(frozen=True)
class ValidityCheck:
    lhs: float
    rhs: float
    satisfied: bool


def check_validity(
    profile: SusceptibilityProfile,
    eta_i: float,
    T_m: float,
    threshold: float = 0.1,
) -> ValidityCheck:
    """Whether the local linearisation about ``eta_i`` is trustworthy.

    Compares ``|(exp(-psi') - 1) / psi'|`` against ``T_m / |psi|``; "much less
    than" means ``lhs * |psi| < threshold * T_m``.  ``lhs`` tends to 1 as
    ``psi' -> 0`` and ``rhs`` is infinite at a zero of ``psi``.
    """
    if not T_m > 0.0:
        raise ValueError("T_m must be positive")
    p = eval_psi(profile, eta_i)
    dp = eval_psi_prime(profile, eta_i)
    lhs = 1.0 if dp == 0.0 else abs(math.expm1(-dp) / dp)
    if p == 0.0:
        return ValidityCheck(lhs, math.inf, True)
    rhs = T_m / abs(p)
    return ValidityCheck(lhs, rhs, lhs * abs(p) < threshold * T_m)
