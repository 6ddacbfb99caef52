# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for sweep evaluation and least-squares assembly.

Signatures and results match :mod:`pickuplab._kernels_py` exactly; the
pure-Python module is the reference and the fallback.
"""

import numpy as np

from libc.math cimport sqrt

cdef extern from "complex.h":
    double creal(double complex) nogil
    double complex conj(double complex) nogil

cdef double TWO_PI = 6.283185307179586

cdef enum:
    SERIES = 0
    PARALLEL = 1


cdef inline double complex _series(double R, double L, double C, double w) noexcept nogil:
    return R + 1j * (w * L - 1.0 / (w * C))


cdef inline double complex _div(double complex a, double complex b) noexcept nogil:
    # plain a*conj(b)/|b|^2; C99 complex division takes a slow inf/nan-safe path
    cdef double br = b.real, bi = b.imag
    cdef double d = br * br + bi * bi
    return ((a.real * br + a.imag * bi) / d) + 1j * ((a.imag * br - a.real * bi) / d)


cdef inline double complex _parallel(double R, double L, double C, double w) noexcept nogil:
    return _div(R + 1j * w * L, (1.0 - w * w * L * C) + 1j * w * R * C)


def impedance(int topology, double R, double L, double C, const double[::1] freqs):
    cdef Py_ssize_t n = freqs.shape[0]
    cdef Py_ssize_t i
    cdef double w
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] z = out
    with nogil:
        if topology == SERIES:
            for i in range(n):
                w = TWO_PI * freqs[i]
                z[i] = _series(R, L, C, w)
        else:
            for i in range(n):
                w = TWO_PI * freqs[i]
                z[i] = _parallel(R, L, C, w)
    return out


def normal_equations(int topology, double R, double L, double C,
                     const double[::1] freqs, const double[::1] target):
    """Relative-residual cost, JᵀJ and Jᵀr with J taken in log-parameters."""
    cdef Py_ssize_t n = freqs.shape[0]
    cdef Py_ssize_t i, a, b
    cdef double w, mag, r, scale, cost = 0.0
    cdef double complex z, A, B, B2
    cdef double complex dz[3]
    cdef double g[3]
    cdef double theta[3]
    cdef double acc_jtj[9]
    cdef double acc_jtr[3]
    jtj_arr = np.zeros((3, 3), dtype=np.float64)
    jtr_arr = np.zeros(3, dtype=np.float64)
    cdef double[:, ::1] jtj = jtj_arr
    cdef double[::1] jtr = jtr_arr
    theta[0] = R
    theta[1] = L
    theta[2] = C
    for a in range(9):
        acc_jtj[a] = 0.0
    for a in range(3):
        acc_jtr[a] = 0.0
    with nogil:
        for i in range(n):
            w = TWO_PI * freqs[i]
            if topology == SERIES:
                z = _series(R, L, C, w)
                dz[0] = 1.0
                dz[1] = 1j * w
                dz[2] = 1j * (1.0 / (w * C * C))
            else:
                A = R + 1j * w * L
                B = (1.0 - w * w * L * C) + 1j * w * R * C
                B2 = B * B
                z = _div(A, B)
                dz[0] = _div(1.0, B2)
                dz[1] = 1j * w * dz[0]
                dz[2] = -1j * w * A * A * dz[0]
            mag = sqrt(z.real * z.real + z.imag * z.imag)
            r = mag / target[i] - 1.0
            cost += r * r
            scale = 1.0 / (mag * target[i])
            for a in range(3):
                g[a] = theta[a] * creal(conj(z) * dz[a]) * scale
            for a in range(3):
                acc_jtr[a] += g[a] * r
                for b in range(a, 3):
                    acc_jtj[3 * a + b] += g[a] * g[b]
    for a in range(3):
        jtr[a] = acc_jtr[a]
        for b in range(3):
            jtj[a, b] = acc_jtj[3 * a + b] if b >= a else acc_jtj[3 * b + a]
    return cost, jtj_arr, jtr_arr
