"""Backend selection for the compiled kernels.

The hot loop, per-point adaptive integration of the characteristics, has
two implementations: a numba ``@njit`` version and a
vectorised pure-numpy version.  Set ``RAMANFM_BACKEND=numpy`` to force the
fallback, or ``RAMANFM_BACKEND=numba`` to require numba.
"""

import os

_requested = os.environ.get("RAMANFM_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise ImportError(
        f"RAMANFM_BACKEND must be 'auto', 'numba' or 'numpy', got {_requested!r}"
    )

HAS_NUMBA = False
if _requested != "numpy":
    try:
        import numba  # noqa: F401

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - depends on environment
        if _requested == "numba":
            raise

BACKEND = "numba" if HAS_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` with caching, or a no-op decorator without numba."""
    if HAS_NUMBA:
        import numba

        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f
