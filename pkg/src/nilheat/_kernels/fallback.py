"""Pure-numpy implementations of the compiled inner loops.

Kept in lockstep with ``_core.pyx``; the test suite asserts both backends
agree to machine precision.  This module is the one actually used when the
extension is unavailable, so it is written for production, not as a stub.
"""

import numpy as np

from numpy.polynomial import polynomial as npoly


def eval_terms(points, coefs, poly_flat, poly_off, quads, lins):
    P, D = points.shape
    T = coefs.shape[0]
    out = np.zeros(P, dtype=np.complex128)
    for t in range(T):
        acc = np.full(P, coefs[t], dtype=np.complex128)
        expo = np.zeros(P, dtype=np.complex128)
        for d in range(D):
            v = points[:, d]
            o0, o1 = poly_off[t * D + d], poly_off[t * D + d + 1]
            c = poly_flat[o0:o1]
            if o1 - o0 > 1 or c[0] != 1.0:
                acc = acc * npoly.polyval(v, c)
            expo += (lins[t, d] - quads[t, d] * v) * v
        out += acc * np.exp(expo)
    return out


def heat_lambda_sum(ssq, xi, wfac, phase, gauss):
    # (P, Q) broadcast, chunked to bound memory
    P = ssq.shape[0]
    out = np.empty(P, dtype=np.complex128)
    step = max(1, 4_000_000 // max(1, wfac.shape[0]))
    for i in range(0, P, step):
        sl = slice(i, i + step)
        ex = 1j * np.outer(xi[sl], phase) - np.outer(ssq[sl], gauss)
        out[sl] = np.exp(ex) @ wfac
    return out


def _sinc(w):
    small = np.abs(w) < 1e-4
    w_safe = np.where(small, 1.0, w)
    out = np.sin(w_safe) / w_safe
    w2 = w * w
    return np.where(small, 1.0 - w2 / 6.0 + w2 * w2 / 120.0, out)


def qt_radial_sum(vsq, s, rq, wq, gq):
    P = vsq.shape[0]
    out = np.empty(P, dtype=np.complex128)
    step = max(1, 2_000_000 // max(1, wq.shape[0]))
    for i in range(0, P, step):
        sl = slice(i, i + step)
        core = _sinc(np.outer(s[sl], rq)) * np.exp(-np.outer(vsq[sl], gq))
        out[sl] = core @ wq
    return out


def htype_product_sum(vsq, z, uq, wq, gq):
    P = vsq.shape[0]
    out = np.empty(P, dtype=np.complex128)
    step = max(1, 2_000_000 // max(1, wq.shape[0]))
    for i in range(0, P, step):
        sl = slice(i, i + step)
        ex = -1j * (z[sl] @ uq.T) - np.outer(vsq[sl], gq)
        out[sl] = np.exp(ex) @ wq
    return out
