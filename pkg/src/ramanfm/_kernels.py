"""Integration kernels for the characteristics of the reduced propagation equation.

For every output time ``eta`` the input time ``s`` and the compression factor
``g`` solve, over a fictitious depth fraction ``zeta`` in ``[0, 1]``::

    ds/dzeta = -psi(s),            s(0) = eta
    dg/dzeta = -psi'(s) * g,       g(0) = 1

The displacement ``u = s - eta`` is integrated instead of ``s`` so that the
relative tolerance is not swamped by large absolute times.

Both backends run the same Dormand-Prince 5(4) pair with identical per-point
step control, so a point's result does not depend on which other points are
in the batch.
"""

import numpy as np

from ._accel import HAS_NUMBA, njit

# Dormand-Prince 5(4) tableau
A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
E1, E3, E4, E5, E6, E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
G_ATOL = 1e-14

STATUS_OK = 0
STATUS_MAX_STEPS = 1


def initial_step(depth, rtol):
    """Starting step in zeta; ``sum|depth|`` bounds the Lipschitz constant of psi."""
    lip = float(np.sum(np.abs(depth)))
    if lip == 0.0:
        return 1.0
    return min(1.0, 0.5 * rtol**0.2 / lip)


# --------------------------------------------------------------------------- numba


@njit(nogil=True)
def _rhs_scalar(depth, omega, phase, s, g):
    p = 0.0
    dp = 0.0
    for j in range(depth.shape[0]):
        arg = omega[j] * s + phase[j]
        p += depth[j] / omega[j] * np.sin(arg)
        dp += depth[j] * np.cos(arg)
    return -p, -dp * g


@njit(nogil=True)
def _solve_point(depth, omega, phase, eta, rtol, atol, max_steps, h0):
    u = 0.0
    g = 1.0
    zeta = 0.0
    h = h0
    ku1, kg1 = _rhs_scalar(depth, omega, phase, eta, g)
    steps = 0
    while zeta < 1.0:
        if steps >= max_steps:
            return eta + u, g, STATUS_MAX_STEPS, zeta
        steps += 1
        h = min(h, 1.0 - zeta)

        ku2, kg2 = _rhs_scalar(depth, omega, phase, eta + u + h * (A21 * ku1), g + h * (A21 * kg1))
        ku3, kg3 = _rhs_scalar(
            depth, omega, phase,
            eta + u + h * (A31 * ku1 + A32 * ku2),
            g + h * (A31 * kg1 + A32 * kg2),
        )
        ku4, kg4 = _rhs_scalar(
            depth, omega, phase,
            eta + u + h * (A41 * ku1 + A42 * ku2 + A43 * ku3),
            g + h * (A41 * kg1 + A42 * kg2 + A43 * kg3),
        )
        ku5, kg5 = _rhs_scalar(
            depth, omega, phase,
            eta + u + h * (A51 * ku1 + A52 * ku2 + A53 * ku3 + A54 * ku4),
            g + h * (A51 * kg1 + A52 * kg2 + A53 * kg3 + A54 * kg4),
        )
        ku6, kg6 = _rhs_scalar(
            depth, omega, phase,
            eta + u + h * (A61 * ku1 + A62 * ku2 + A63 * ku3 + A64 * ku4 + A65 * ku5),
            g + h * (A61 * kg1 + A62 * kg2 + A63 * kg3 + A64 * kg4 + A65 * kg5),
        )
        u_new = u + h * (B1 * ku1 + B3 * ku3 + B4 * ku4 + B5 * ku5 + B6 * ku6)
        g_new = g + h * (B1 * kg1 + B3 * kg3 + B4 * kg4 + B5 * kg5 + B6 * kg6)
        ku7, kg7 = _rhs_scalar(depth, omega, phase, eta + u_new, g_new)

        eu = h * (E1 * ku1 + E3 * ku3 + E4 * ku4 + E5 * ku5 + E6 * ku6 + E7 * ku7)
        eg = h * (E1 * kg1 + E3 * kg3 + E4 * kg4 + E5 * kg5 + E6 * kg6 + E7 * kg7)
        su = atol + rtol * max(abs(u), abs(u_new))
        sg = G_ATOL + rtol * max(abs(g), abs(g_new))
        err = np.sqrt(0.5 * ((eu / su) ** 2 + (eg / sg) ** 2))

        if err <= 1.0:
            zeta = 1.0 if h == 1.0 - zeta else zeta + h
            u = u_new
            g = g_new
            ku1 = ku7
            kg1 = kg7
            if err == 0.0:
                fac = MAX_FACTOR
            else:
                fac = min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * err**-0.2))
        else:
            fac = max(MIN_FACTOR, SAFETY * err**-0.2)
        h = h * fac
    return eta + u, g, STATUS_OK, zeta


@njit(nogil=True)
def _characteristics_numba(depth, omega, phase, eta, rtol, atol, max_steps, h0):
    n = eta.shape[0]
    s = np.empty(n)
    g = np.empty(n)
    status = np.empty(n, dtype=np.int64)
    zeta = np.empty(n)
    for i in range(n):
        s[i], g[i], status[i], zeta[i] = _solve_point(
            depth, omega, phase, eta[i], rtol, atol, max_steps, h0
        )
    return s, g, status, zeta


# --------------------------------------------------------------------------- numpy


def _rhs_vec(depth, omega, phase, s, g):
    p = np.zeros_like(s)
    dp = np.zeros_like(s)
    for j in range(depth.shape[0]):
        arg = omega[j] * s + phase[j]
        p += depth[j] / omega[j] * np.sin(arg)
        dp += depth[j] * np.cos(arg)
    return -p, -dp * g


def _characteristics_numpy(depth, omega, phase, eta, rtol, atol, max_steps, h0):
    n = eta.shape[0]
    u = np.zeros(n)
    g = np.ones(n)
    zeta = np.zeros(n)
    h = np.full(n, h0)
    steps = np.zeros(n, dtype=np.int64)
    status = np.full(n, STATUS_OK, dtype=np.int64)
    ku1, kg1 = _rhs_vec(depth, omega, phase, eta.copy(), g.copy())

    active = np.flatnonzero(zeta < 1.0)
    while active.size:
        over = steps[active] >= max_steps
        if over.any():
            status[active[over]] = STATUS_MAX_STEPS
            active = active[~over]
            if not active.size:
                break
        steps[active] += 1
        e_ = eta[active]
        u0 = u[active]
        g0 = g[active]
        z0 = zeta[active]
        hh = np.minimum(h[active], 1.0 - z0)
        a1, b1 = ku1[active], kg1[active]

        def f(du, dg):
            return _rhs_vec(depth, omega, phase, e_ + u0 + hh * du, g0 + hh * dg)

        a2, b2 = f(A21 * a1, A21 * b1)
        a3, b3 = f(A31 * a1 + A32 * a2, A31 * b1 + A32 * b2)
        a4, b4 = f(A41 * a1 + A42 * a2 + A43 * a3, A41 * b1 + A42 * b2 + A43 * b3)
        a5, b5 = f(
            A51 * a1 + A52 * a2 + A53 * a3 + A54 * a4,
            A51 * b1 + A52 * b2 + A53 * b3 + A54 * b4,
        )
        a6, b6 = f(
            A61 * a1 + A62 * a2 + A63 * a3 + A64 * a4 + A65 * a5,
            A61 * b1 + A62 * b2 + A63 * b3 + A64 * b4 + A65 * b5,
        )
        u_new = u0 + hh * (B1 * a1 + B3 * a3 + B4 * a4 + B5 * a5 + B6 * a6)
        g_new = g0 + hh * (B1 * b1 + B3 * b3 + B4 * b4 + B5 * b5 + B6 * b6)
        a7, b7 = _rhs_vec(depth, omega, phase, e_ + u_new, g_new)

        eu = hh * (E1 * a1 + E3 * a3 + E4 * a4 + E5 * a5 + E6 * a6 + E7 * a7)
        eg = hh * (E1 * b1 + E3 * b3 + E4 * b4 + E5 * b5 + E6 * b6 + E7 * b7)
        su = atol + rtol * np.maximum(np.abs(u0), np.abs(u_new))
        sg = G_ATOL + rtol * np.maximum(np.abs(g0), np.abs(g_new))
        err = np.sqrt(0.5 * ((eu / su) ** 2 + (eg / sg) ** 2))

        ok = err <= 1.0
        acc = active[ok]
        zeta[acc] = np.where(hh[ok] == 1.0 - z0[ok], 1.0, z0[ok] + hh[ok])
        u[acc] = u_new[ok]
        g[acc] = g_new[ok]
        ku1[acc] = a7[ok]
        kg1[acc] = b7[ok]

        with np.errstate(divide="ignore"):
            grow = np.where(
                err == 0.0, MAX_FACTOR, np.clip(SAFETY * err**-0.2, MIN_FACTOR, MAX_FACTOR)
            )
            shrink = np.maximum(MIN_FACTOR, SAFETY * err**-0.2)
        h[active] = hh * np.where(ok, grow, shrink)
        active = active[zeta[active] < 1.0]

    return eta + u, g, status, zeta


def characteristics(depth, omega, phase, eta, rtol, atol, max_steps, backend=None):
    """Integrate the characteristics for every entry of ``eta``.

    Returns ``(s, g, status, zeta)``; ``status`` is nonzero where the step
    budget ran out, and ``zeta`` is the depth fraction reached.
    """
    depth = np.ascontiguousarray(depth, dtype=float)
    omega = np.ascontiguousarray(omega, dtype=float)
    phase = np.ascontiguousarray(phase, dtype=float)
    eta = np.ascontiguousarray(eta, dtype=float).ravel()
    h0 = initial_step(depth, rtol)
    if backend is None:
        backend = "numba" if HAS_NUMBA else "numpy"
    if backend == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable")
        return _characteristics_numba(
            depth, omega, phase, eta, float(rtol), float(atol), int(max_steps), h0
        )
    if backend == "numpy":
        return _characteristics_numpy(
            depth, omega, phase, eta, float(rtol), float(atol), int(max_steps), h0
        )
    raise ValueError(f"unknown backend {backend!r}")
