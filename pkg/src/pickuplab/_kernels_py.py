"""Numpy implementations of the sweep kernels.

This is the reference for :mod:`pickuplab._kernels` (the Cython build) and
the fallback when the extension is not compiled.
"""

import numpy as np

SERIES = 0
PARALLEL = 1

TWO_PI = 2.0 * np.pi


def impedance(topology, R, L, C, freqs):
    w = TWO_PI * np.asarray(freqs, dtype=np.float64)
    if topology == SERIES:
        return R + 1j * (w * L - 1.0 / (w * C))
    return (R + 1j * w * L) / ((1.0 - w * w * L * C) + 1j * w * R * C)


def normal_equations(topology, R, L, C, freqs, target):
    """Relative-residual cost, JᵀJ and Jᵀr with J taken in log-parameters.

    Residuals are ``|Z(f)| / target - 1``; the Jacobian columns are
    derivatives with respect to ``log R``, ``log L`` and ``log C``.
    """
    w = TWO_PI * np.asarray(freqs, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if topology == SERIES:
        z = R + 1j * (w * L - 1.0 / (w * C))
        dz = (np.ones_like(w, dtype=np.complex128), 1j * w, 1j / (w * C * C))
    else:
        a = R + 1j * w * L
        b = (1.0 - w * w * L * C) + 1j * w * R * C
        b2 = b * b
        z = a / b
        dz = (1.0 / b2, 1j * w / b2, -1j * w * a * a / b2)
    mag = np.abs(z)
    r = mag / target - 1.0
    scale = 1.0 / (mag * target)
    jac = np.column_stack(
        [theta * np.real(np.conj(z) * d) * scale for theta, d in zip((R, L, C), dz)]
    )
    return float(r @ r), jac.T @ jac, jac.T @ r
