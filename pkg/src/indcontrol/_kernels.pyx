# cython: language_level=3
"""Compiled inner loops for the closure and saturation sweeps.

Skew-Hermitian ``X = iH`` is handled through ``n*n`` real coordinates: the
diagonal of ``H`` followed by ``sqrt(2) * (Re H_jk, Im H_jk)`` for ``j < k``.
The map is an isometry for the Hilbert-Schmidt inner product.
"""
import numpy as np
from libc.math cimport sqrt

cdef double SQRT2 = 1.4142135623730951


cdef double _mgs_pass(const double[:, ::1] q, Py_ssize_t k, double[::1] v) noexcept nogil:
    cdef Py_ssize_t r, i
    cdef Py_ssize_t m = v.shape[0]
    cdef double c, s = 0.0
    for r in range(k):
        c = 0.0
        for i in range(m):
            c += q[r, i] * v[i]
        for i in range(m):
            v[i] -= c * q[r, i]
    for i in range(m):
        s += v[i] * v[i]
    return sqrt(s)


def project_out(const double[:, ::1] q, Py_ssize_t k, double[::1] v):
    """Remove from ``v`` (in place) its component along rows ``q[:k]``.

    Modified Gram-Schmidt with one re-orthogonalization pass. Returns the
    norm of what is left.
    """
    cdef double res
    with nogil:
        _mgs_pass(q, k, v)
        res = _mgs_pass(q, k, v)
    return res


def bracket_coords(const double complex[:, :, ::1] a, const double complex[:, :, ::1] b,
                   double[:, ::1] out, bint traceless=False):
    """Coordinates of ``[a_i, b_j]`` for every pair, written to row ``i * len(b) + j``.

    Inputs must be skew-Hermitian, so each bracket is too and only its upper
    triangle is formed. With ``traceless`` the trace is dropped.
    """
    cdef Py_ssize_t pa = a.shape[0], pb = b.shape[0], n = a.shape[1]
    cdef Py_ssize_t x, y, r, i, j, l, p
    cdef double cr, ci, ar, ai, br, bi, mean
    if b.shape[1] != n or out.shape[0] != pa * pb or out.shape[1] != n * n:
        raise ValueError("shape mismatch in bracket_coords")
    # split real and imaginary parts once; plain double loops vectorize and
    # avoid the C99 complex multiply helper
    cdef double[:, :, ::1] are = np.ascontiguousarray(np.asarray(a).real)
    cdef double[:, :, ::1] aim = np.ascontiguousarray(np.asarray(a).imag)
    cdef double[:, :, ::1] bre = np.ascontiguousarray(np.asarray(b).real)
    cdef double[:, :, ::1] bim = np.ascontiguousarray(np.asarray(b).imag)
    with nogil:
        for x in range(pa):
            for y in range(pb):
                r = x * pb + y
                p = n
                for i in range(n):
                    for j in range(i, n):
                        cr = 0.0
                        ci = 0.0
                        for l in range(n):
                            ar = are[x, i, l]
                            ai = aim[x, i, l]
                            br = bre[y, l, j]
                            bi = bim[y, l, j]
                            cr = cr + ar * br - ai * bi
                            ci = ci + ar * bi + ai * br
                            ar = bre[y, i, l]
                            ai = bim[y, i, l]
                            br = are[x, l, j]
                            bi = aim[x, l, j]
                            cr = cr - (ar * br - ai * bi)
                            ci = ci - (ar * bi + ai * br)
                        # C = i H, so H_ij = -i C_ij
                        if j == i:
                            out[r, i] = ci
                        else:
                            out[r, p] = SQRT2 * ci
                            out[r, p + 1] = -SQRT2 * cr
                            p += 2
                if traceless:
                    mean = 0.0
                    for i in range(n):
                        mean = mean + out[r, i]
                    mean = mean / n
                    for i in range(n):
                        out[r, i] -= mean
