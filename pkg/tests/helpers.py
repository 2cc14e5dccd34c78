"""Shared scenario builders for the test suite."""

import math

import numpy as np

from ramanfm.propagation import ProbePulse, default_grid_count, make_grid
from ramanfm.susceptibility import SusceptibilityProfile
from ramanfm.timemap import MapSolverConfig, solve_map_array

TIGHT = MapSolverConfig(rel_tol=1e-12)

# normalized units: omega_a = 1, so T_a = 2*pi
T_A = 2 * math.pi
FIG1 = SusceptibilityProfile.from_tuples([(0.8, 1.0, 0.0), (0.6, 0.07, 0.0)])


def random_conservation_scenario(rng, max_modes=3, max_depth=1.0):
    """Random profile with a few-cycle probe and a grid covering the whole output pulse.

    Few-cycle probes keep the pulse area well away from zero, so its relative
    error is a meaningful test.
    """
    n = int(rng.integers(1, max_modes + 1))
    prof = SusceptibilityProfile.from_tuples(
        [(rng.uniform(-max_depth, max_depth), rng.uniform(0.5, 2.0), rng.uniform(-math.pi, math.pi))
         for _ in range(n)]
    )
    omega0 = rng.uniform(10.0, 20.0) * prof.omega_min
    pulse = ProbePulse(omega0, rng.uniform(1.5, 3.0) / omega0, rng.uniform(-5.0, 5.0))
    # preimage of the input support under the map = forward map with negated depths
    ends = np.array([pulse.peak_time - 6 * pulse.length_T, pulse.peak_time + 6 * pulse.length_T])
    (a, b), _ = solve_map_array(prof.negated(), ends, TIGHT)
    grid = make_grid(a, b, default_grid_count(pulse, prof.total_depth, a, b))
    return prof, pulse, grid
