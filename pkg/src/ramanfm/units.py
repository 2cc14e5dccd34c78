"""Unit conventions.

normalized
    The first Raman mode has ``omega = 1``; times are measured so that its
    period is ``2*pi``.  Scenario files quote times in Raman periods.
wavenumber-fs
    Frequencies are quoted in cm^-1 and converted with ``omega = 2*pi*c*nu``;
    times are femtoseconds, angular frequencies rad/fs.
"""

import math

import numpy as np

C_CM_PER_S = 2.99792458e10
C_CM_PER_FS = C_CM_PER_S * 1e-15

NORMALIZED = "normalized"
WAVENUMBER_FS = "wavenumber-fs"
UNIT_SYSTEMS = (NORMALIZED, WAVENUMBER_FS)


def wavenumber_to_angular(nu_cm):
    """cm^-1 to rad/fs."""
    return 2.0 * math.pi * C_CM_PER_FS * np.asarray(nu_cm, dtype=float)


def angular_to_wavenumber(omega):
    """rad/fs to cm^-1."""
    return np.asarray(omega, dtype=float) / (2.0 * math.pi * C_CM_PER_FS)
