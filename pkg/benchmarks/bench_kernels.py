"""Compare the numba and pure-numpy characteristics kernels.

Usage::

    python benchmarks/bench_kernels.py [--points 200000] [--repeat 3]

Both backends run in the same process on identical inputs; the numba
timing excludes the first (compiling) call.
"""

import argparse
import time

import numpy as np

from ramanfm import _kernels
from ramanfm import scenario as scn
from ramanfm.susceptibility import SusceptibilityProfile
from ramanfm.timemap import MapSolverConfig

CASES = {
    "fig1 biharmonic": SusceptibilityProfile.from_tuples([(0.8, 1.0, 0.0), (0.6, 0.07, 0.0)]),
    "three modes": SusceptibilityProfile.from_tuples(
        [(0.9, 1.0, 0.1), (0.5, 0.31, -0.4), (0.3, 2.3, 1.2)]
    ),
    # rad/fs, the internal units of the wavenumber-fs preset
    "fig4 H2/D2": scn.from_dict(scn.preset("fig4")).profile,
}


def timed(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--rel-tol", type=float, default=1e-10)
    args = parser.parse_args()

    backends = ["numpy"] + (["numba"] if _kernels.HAS_NUMBA else [])
    print(f"{'case':<18}{'backend':<8}{'points':>10}{'seconds':>10}{'us/point':>10}")
    for name, prof in CASES.items():
        eta = np.linspace(0.0, 4 * np.pi / prof.omega_min, args.points)
        tol = (args.rel_tol, MapSolverConfig().resolved_abs_tol(prof), 1_000_000)
        results = {}
        for backend in backends:
            def call():
                return _kernels.characteristics(
                    prof.depths, prof.omegas, prof.phases, eta, *tol, backend=backend
                )

            if backend == "numba":
                _kernels.characteristics(prof.depths, prof.omegas, prof.phases, eta[:10],
                                         *tol, backend=backend)
            secs, out = timed(call, args.repeat)
            results[backend] = out
            print(f"{name:<18}{backend:<8}{eta.size:>10}{secs:>10.3f}{1e6 * secs / eta.size:>10.2f}")
        if len(results) == 2:
            diff = np.max(np.abs(results["numpy"][0] - results["numba"][0]))
            print(f"{'':<18}max |s_numpy - s_numba| = {diff:.2e}")


if __name__ == "__main__":
    main()
