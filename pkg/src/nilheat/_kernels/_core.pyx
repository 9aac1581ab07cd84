# cython: language_level=3
"""Compiled inner loops for batched special-function evaluation.

Every function here has a pure-numpy twin in ``fallback.py`` with the same
signature and semantics.  The package selects one implementation at import
time; see ``nilheat._kernels.__init__``.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex csin(double complex)


def eval_terms(const double complex[:, ::1] points,
               const double complex[::1] coefs,
               const double complex[::1] poly_flat,
               const long long[::1] poly_off,
               const double complex[:, ::1] quads,
               const double complex[:, ::1] lins):
    """Evaluate a sum of separable polynomial-Gaussian terms.

    Term ``t`` contributes ``coefs[t] * prod_d poly_td(v_d) *
    exp(-quads[t,d] v_d^2 + lins[t,d] v_d)`` at ``v = points[p]``.
    Polynomial coefficients are ascending, stored flat with offsets
    ``poly_off[t*D + d] : poly_off[t*D + d + 1]``.
    """
    cdef Py_ssize_t P = points.shape[0]
    cdef Py_ssize_t D = points.shape[1]
    cdef Py_ssize_t T = coefs.shape[0]
    cdef Py_ssize_t p, t, d, c, o0, o1
    cdef double complex v, acc, pol, expo
    out_arr = np.zeros(P, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    with nogil:
        for p in range(P):
            for t in range(T):
                acc = coefs[t]
                expo = 0
                for d in range(D):
                    v = points[p, d]
                    o0 = poly_off[t * D + d]
                    o1 = poly_off[t * D + d + 1]
                    pol = poly_flat[o1 - 1]
                    for c in range(o1 - 2, o0 - 1, -1):
                        pol = pol * v + poly_flat[c]
                    acc = acc * pol
                    expo = expo + (lins[t, d] - quads[t, d] * v) * v
                out[p] = out[p] + acc * cexp(expo)
    return out_arr


def heat_lambda_sum(const double complex[::1] ssq,
                    const double complex[::1] xi,
                    const double[::1] wfac,
                    const double[::1] phase,
                    const double[::1] gauss):
    """Accumulate ``sum_q wfac[q] exp(i phase[q] xi[p] - gauss[q] ssq[p])``."""
    cdef Py_ssize_t P = ssq.shape[0]
    cdef Py_ssize_t Q = wfac.shape[0]
    cdef Py_ssize_t p, q
    cdef double complex acc
    cdef double complex I = 1j
    out_arr = np.empty(P, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    with nogil:
        for p in range(P):
            acc = 0
            for q in range(Q):
                acc = acc + wfac[q] * cexp(I * phase[q] * xi[p] - gauss[q] * ssq[p])
            out[p] = acc
    return out_arr


cdef inline double complex _sinc(double complex w) nogil:
    cdef double complex w2
    if w.real * w.real + w.imag * w.imag < 1e-8:
        w2 = w * w
        return 1.0 - w2 / 6.0 + w2 * w2 / 120.0
    return csin(w) / w


def qt_radial_sum(const double complex[::1] vsq,
                  const double complex[::1] s,
                  const double[::1] rq,
                  const double[::1] wq,
                  const double[::1] gq):
    """Accumulate ``sum_q wq[q] sinc(rq[q] s[p]) exp(-gq[q] vsq[p])``."""
    cdef Py_ssize_t P = vsq.shape[0]
    cdef Py_ssize_t Q = wq.shape[0]
    cdef Py_ssize_t p, q
    cdef double complex acc
    out_arr = np.empty(P, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    with nogil:
        for p in range(P):
            acc = 0
            for q in range(Q):
                acc = acc + wq[q] * _sinc(rq[q] * s[p]) * cexp(-gq[q] * vsq[p])
            out[p] = acc
    return out_arr


def htype_product_sum(const double complex[::1] vsq,
                      const double complex[:, ::1] z,
                      const double[:, ::1] uq,
                      const double[::1] wq,
                      const double[::1] gq):
    """Accumulate ``sum_q wq[q] exp(-i uq[q].z[p] - gq[q] vsq[p])``."""
    cdef Py_ssize_t P = vsq.shape[0]
    cdef Py_ssize_t Q = wq.shape[0]
    cdef Py_ssize_t M = z.shape[1]
    cdef Py_ssize_t p, q, a
    cdef double complex acc, dot
    cdef double complex I = 1j
    out_arr = np.empty(P, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    with nogil:
        for p in range(P):
            acc = 0
            for q in range(Q):
                dot = 0
                for a in range(M):
                    dot = dot + uq[q, a] * z[p, a]
                acc = acc + wq[q] * cexp(-I * dot - gq[q] * vsq[p])
            out[p] = acc
    return out_arr
