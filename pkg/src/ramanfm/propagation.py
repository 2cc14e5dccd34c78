"""Output fields for a mixed Raman cell and for cascades of cells.

In reduced time the output field is the input field evaluated at the mapped
input time and scaled by the compression factor::

    E_out(eta) = E_in(s(eta)) * G(eta)

For a cascade the map of the last cell is applied to ``eta`` first, then the
map of the cell before it, and so on back to the entrance; ``G`` is the
product of the per-cell factors evaluated at the chained times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .susceptibility import SusceptibilityProfile
from .timemap import MapSolverConfig, comb_factor, solve_map_array

DEFAULT_SAMPLES_PER_PERIOD = 40


@dataclass(frozen=True)
class ProbePulse:
    """Gaussian-envelope probe with a cosine carrier peaking at ``peak_time``.

    ``E_in(t) = A exp(-((t - t_p) / T)^2) cos(w0 (t - t_p))``.  An infinite
    ``length_T`` gives a monochromatic carrier.
    """

    omega0: float
    length_T: float
    peak_time: float = 0.0
    peak_amplitude: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.omega0) and self.omega0 > 0.0):
            raise ValueError(f"omega0 must be positive and finite, got {self.omega0!r}")
        if not self.length_T > 0.0:
            raise ValueError(f"length_T must be positive, got {self.length_T!r}")

    def envelope(self, t):
        t = np.asarray(t, dtype=float)
        if math.isinf(self.length_T):
            return np.full_like(t, self.peak_amplitude)
        x = (t - self.peak_time) / self.length_T
        return self.peak_amplitude * np.exp(-x * x)

    def field(self, t):
        t = np.asarray(t, dtype=float)
        return self.envelope(t) * np.cos(self.omega0 * (t - self.peak_time))


@dataclass(frozen=True)
class FieldTrace:
    """Real field sampled on a uniform grid of reduced times.

    ``g`` and ``s`` hold the compression factor and the mapped input time;
    for an unpropagated trace they are 1 and the grid itself.
    """

    grid: np.ndarray
    e: np.ndarray
    g: np.ndarray
    s: np.ndarray
    omega0: Optional[float] = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        n = grid.size
        if grid.ndim != 1 or n < 2:
            raise ValueError("grid must be 1-D with at least two points")
        step = (grid[-1] - grid[0]) / (n - 1)
        if not step > 0.0:
            raise ValueError("grid must be strictly increasing")
        scale = max(abs(grid[0]), abs(grid[-1]), grid[-1] - grid[0])
        ideal = grid[0] + step * np.arange(n)
        if np.max(np.abs(grid - ideal)) > 1e-12 * scale:
            raise ValueError("grid is not uniform")
        object.__setattr__(self, "grid", grid)
        for name in ("e", "g", "s"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != grid.shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {grid.shape}")
            object.__setattr__(self, name, arr)
        if np.any(self.g <= 0.0):
            raise ValueError("compression factor must be positive")

    @property
    def n(self) -> int:
        return self.grid.size

    @property
    def dt(self) -> float:
        return float((self.grid[-1] - self.grid[0]) / (self.n - 1))

    def window_indices(self, window=None) -> tuple[int, int]:
        """Grid indices ``(i1, i2)`` inclusive, with the window snapped to nodes."""
        if window is None:
            return 0, self.n - 1
        lo, hi = float(window[0]), float(window[1])
        tol = 1e-9 * self.dt
        if lo < self.grid[0] - tol or hi > self.grid[-1] + tol:
            raise ValueError(f"window [{lo}, {hi}] is outside the grid")
        i1 = int(np.clip(np.rint((lo - self.grid[0]) / self.dt), 0, self.n - 1))
        i2 = int(np.clip(np.rint((hi - self.grid[0]) / self.dt), 0, self.n - 1))
        if i2 <= i1:
            raise ValueError(f"window [{lo}, {hi}] covers fewer than two grid nodes")
        return i1, i2


@dataclass(frozen=True)
class CascadeStage:
    """One cell of a cascade; its comb depths carry the cell length."""

    profile: SusceptibilityProfile

    def __post_init__(self):
        if not isinstance(self.profile, SusceptibilityProfile):
            raise TypeError("stage profile must be a SusceptibilityProfile")


@dataclass(frozen=True)
class FactorTable:
    eta: np.ndarray
    g_mix: np.ndarray
    g_product: np.ndarray
    g_ab: np.ndarray
    g_ba: np.ndarray
    columns: tuple = field(default=("eta", "G_mix", "G_product", "G_ab", "G_ba"))

    def rows(self):
        return zip(self.eta, self.g_mix, self.g_product, self.g_ab, self.g_ba)


def make_grid(start: float, stop: float, count: int) -> np.ndarray:
    if not (math.isfinite(start) and math.isfinite(stop)) or not stop > start:
        raise ValueError(f"need finite start < stop, got [{start}, {stop}]")
    if int(count) < 2:
        raise ValueError("grid count must be at least 2")
    return np.linspace(start, stop, int(count))


def default_grid_count(
    pulse: ProbePulse,
    total_depth: float,
    start: float,
    stop: float,
    samples_per_period: int = DEFAULT_SAMPLES_PER_PERIOD,
) -> int:
    """Grid size resolving the most compressed carrier period.

    The shortest period is estimated as ``2*pi / (w0 * exp(sum|depth|))``.
    """
    period = 2.0 * math.pi / (pulse.omega0 * math.exp(total_depth))
    return int(math.ceil((stop - start) / period * samples_per_period)) + 1


def sample_input(pulse: ProbePulse, grid) -> FieldTrace:
    grid = np.asarray(grid, dtype=float)
    return FieldTrace(grid, pulse.field(grid), np.ones_like(grid), grid.copy(), pulse.omega0)


def propagate_mixture(
    pulse: ProbePulse,
    profile: SusceptibilityProfile,
    grid,
    cfg: Optional[MapSolverConfig] = None,
    workers: int = 1,
) -> FieldTrace:
    grid = np.asarray(grid, dtype=float)
    s, g = solve_map_array(profile, grid, cfg, workers=workers)
    return FieldTrace(grid, pulse.field(s) * g, g, s, pulse.omega0)


def cascade_map(
    stages: Sequence[CascadeStage],
    eta,
    cfg: Optional[MapSolverConfig] = None,
    workers: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Composite ``(s, G)`` for cells traversed in ``stages`` order."""
    if not stages:
        raise ValueError("a cascade needs at least one stage")
    t = np.asarray(eta, dtype=float)
    g = None
    for stage in reversed(stages):
        t, g_stage = solve_map_array(stage.profile, t, cfg, workers=workers)
        g = g_stage if g is None else g * g_stage
    return t, g


def propagate_cascade(
    pulse: ProbePulse,
    stages: Sequence[CascadeStage],
    grid,
    cfg: Optional[MapSolverConfig] = None,
    workers: int = 1,
) -> FieldTrace:
    grid = np.asarray(grid, dtype=float)
    s, g = cascade_map(stages, grid, cfg, workers=workers)
    return FieldTrace(grid, pulse.field(s) * g, g, s, pulse.omega0)


def _mode_key(mode):
    return (mode.comb_depth, mode.omega, mode.phase)


def compare_factors(
    profile_mix: SusceptibilityProfile,
    stages: Sequence[CascadeStage],
    grid,
    cfg: Optional[MapSolverConfig] = None,
    workers: int = 1,
) -> FactorTable:
    """Mixture factor against the product of single-mode combs and both cascade orders.

    ``G_ab`` traverses ``stages`` in the given order, ``G_ba`` in reverse.
    """
    stage_modes = sorted(_mode_key(m) for st in stages for m in st.profile.modes)
    if stage_modes != sorted(_mode_key(m) for m in profile_mix.modes):
        raise ValueError("stages must be the single-mode decomposition of the mixture")
    eta = np.asarray(grid, dtype=float)
    _, g_mix = solve_map_array(profile_mix, eta, cfg, workers=workers)
    g_product = np.ones_like(eta)
    for mode in profile_mix.modes:
        g_product = g_product * comb_factor(mode, eta)
    _, g_ab = cascade_map(stages, eta, cfg, workers=workers)
    _, g_ba = cascade_map(list(reversed(stages)), eta, cfg, workers=workers)
    return FactorTable(eta, g_mix, g_product, g_ab, g_ba)
