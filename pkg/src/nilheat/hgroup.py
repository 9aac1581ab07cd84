"""Heisenberg group arithmetic, Schrodinger representation, Hermite tools.

Elements are triples ``(x, u, xi)`` with ``x, u`` in R^n (or C^n) and a
central coordinate ``xi``.  The group law is the polarized one,

    (x, u, xi)(x', u', xi') = (x + x', u + u', xi + xi' + (x'.u - x.u')/2),

whose sign is fixed by requiring the Schrodinger representation

    pi_lambda(x, u, xi) phi(v) = e^{i lambda xi}
        e^{i lambda (x.v + x.u/2)} phi(v + u)

to be a homomorphism (checked in the test suite, not assumed).

Coordinates may be ints, fractions, floats or complex numbers; the
arithmetic never forces a dtype, so exact lattice work and complexified
evaluation share one code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCentralCharacterError, DimensionMismatchError, QuadratureError
from .funcs import (
    GaussHermiteSum,
    gaussian,
    hermite_basis,
    hermite_function,
    _moment_polys,
    _peval,
)
from .quadrature import gauss_hermite, tensor_rule

__all__ = [
    "GroupPoint",
    "SymplecticForm",
    "TestFunction",
    "group_mul",
    "group_inv",
    "commutator",
    "schrodinger_apply",
    "matrix_coefficient",
    "hermite_matrix",
    "gaussian",
    "hermite_function",
    "hermite_basis",
]

# The closed test-function family lives in funcs; this is its public name
# at the group-theory layer.
TestFunction = GaussHermiteSum


def _dot(a, b):
    return sum(p * q for p, q in zip(a, b))


@dataclass(frozen=True)
class GroupPoint:
    """A group element (x, u, xi); coordinate dtype is caller's choice."""

    x: tuple
    u: tuple
    xi: object

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "u", tuple(self.u))
        if len(self.x) != len(self.u):
            raise DimensionMismatchError("x and u must have the same length")

    @property
    def n(self):
        return len(self.x)

    @classmethod
    def identity(cls, n):
        return cls((0,) * n, (0,) * n, 0)

    @classmethod
    def from_coords(cls, coords):
        coords = list(coords)
        if len(coords) % 2 == 0:
            raise DimensionMismatchError("need 2n+1 coordinates")
        n = (len(coords) - 1) // 2
        return cls(tuple(coords[:n]), tuple(coords[n : 2 * n]), coords[2 * n])

    def coords(self):
        return self.x + self.u + (self.xi,)

    def is_central(self):
        return all(c == 0 for c in self.x) and all(c == 0 for c in self.u)


def group_mul(g, h):
    if g.n != h.n:
        raise DimensionMismatchError("group elements of different dimension")
    term = _dot(h.x, g.u) - _dot(g.x, h.u)
    if isinstance(term, int):
        # keep exact arithmetic for integer coordinates
        from fractions import Fraction

        term = Fraction(term, 2)
    else:
        term = term / 2
    return GroupPoint(
        tuple(a + b for a, b in zip(g.x, h.x)),
        tuple(a + b for a, b in zip(g.u, h.u)),
        g.xi + h.xi + term,
    )


def group_inv(g):
    return GroupPoint(
        tuple(-a for a in g.x), tuple(-a for a in g.u), -g.xi
    )


def commutator(g, h):
    """Group commutator of g and h, taken as ``h^-1 g^-1 h g``.

    With the polarized law above this grouping is the one whose central
    value equals the symplectic pairing of the projections in argument
    order: commutator((x,u,.), (x',u',.)) = (0, 0, x.u' - u.x').
    """
    return group_mul(group_mul(group_inv(h), group_inv(g)), group_mul(h, g))


class SymplecticForm:
    """The standard symplectic form on R^2n, J = [[0, I], [-I, 0]]."""

    def __init__(self, n):
        self.n = int(n)
        J = np.zeros((2 * n, 2 * n))
        J[:n, n:] = np.eye(n)
        J[n:, :n] = -np.eye(n)
        self.J = J

    def omega(self, a, b):
        """omega(a, b) = a . (J b); omega(e_i, e_{n+j}) = delta_ij.

        Accepts plain sequences (exact arithmetic preserved) or arrays
        with vectors along the last axis (broadcasting elementwise).
        """
        n = self.n
        if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
            a = np.asarray(a)
            b = np.asarray(b)
            return (a[..., :n] * b[..., n:]).sum(-1) - (
                a[..., n:] * b[..., :n]
            ).sum(-1)
        return _dot(a[:n], b[n:]) - _dot(a[n:], b[:n])

    def is_symplectic(self, A, tol=1e-12):
        A = np.asarray(A, dtype=float)
        return bool(np.max(np.abs(A.T @ self.J @ A - self.J)) <= tol)


def schrodinger_apply(lam, g, f):
    """Apply pi_lambda(g) to a test function in the closed family.

    Returns the exact symbolic parameters of
    ``e^{i lam xi} e^{i lam (x.v + x.u/2)} f(v + u)``; complex group
    coordinates are allowed (analytic continuation of the formula).
    """
    lam = float(lam)
    if lam == 0:
        raise DegenerateCentralCharacterError("central character degenerate")
    if f.dim != g.n:
        raise DimensionMismatchError("function dim does not match group dim")
    x = np.asarray(g.x, dtype=complex)
    u = np.asarray(g.u, dtype=complex)
    phase = np.exp(1j * lam * (complex(g.xi) + 0.5 * (x @ u)))
    return phase * f.translate(u).modulate(lam * x)


# ---------------------------------------------------------------------------
# closed-form matrix coefficients in the scaled Hermite basis


def _herm_poly(k):
    basis = np.zeros(k + 1)
    basis[k] = 1.0
    return np.polynomial.hermite.herm2poly(basis)


def _mc1(lam, a, b, x, u):
    """<pi_lambda(x, u, 0) h_b, h_a> for the 1-d scaled Hermite basis.

    Closed form; ``x, u`` may be complex arrays.  The basis functions are
    h_c(w) = mu^{1/4} h~_c(sqrt(mu) w), mu = |lam|, the eigenfunctions of
    -d^2/dw^2 + lam^2 w^2.
    """
    mu = abs(lam)
    sq = math.sqrt(mu)
    sigma = math.copysign(sq, lam)
    x = np.asarray(x, dtype=complex)
    u = np.asarray(u, dtype=complex)
    c = sq * u
    B = -c + 1j * sigma * x
    ha = _herm_poly(a)
    hb = _herm_poly(b)
    # H_b(r + c) H_a(r) as a polynomial in r whose coefficients are
    # polynomials in c: C2[qr, qc]
    C2 = np.zeros((a + b + 1, b + 1))
    for s in range(b + 1):
        if hb[s] == 0:
            continue
        for q in range(s + 1):
            C2[q, s - q] += hb[s] * math.comb(s, q)
    full = np.zeros((a + b + 1, b + 1))
    for p in range(a + 1):
        if ha[p] != 0:
            full[p : p + b + 1, :] += ha[p] * C2[: b + 1, :]
    cpow = c[..., None] ** np.arange(b + 1)
    rpolys = _moment_polys(1.0, a + b)
    acc = np.zeros(np.broadcast(x, u).shape, dtype=complex)
    for qr in range(a + b + 1):
        coef = cpow @ full[qr]
        if np.all(coef == 0):
            continue
        acc = acc + coef * _peval(rpolys[qr], B)
    norm = math.sqrt(math.pi) / math.sqrt(
        2.0 ** (a + b) * math.factorial(a) * math.factorial(b) * math.pi
    )
    return norm * np.exp(-0.25 * mu * (x * x + u * u)) * acc


def matrix_coefficient(lam, alpha, beta, points):
    """<pi_lambda(g) h_beta, h_alpha> at group points (batched, complex ok).

    ``alpha, beta`` are multi-indices of length n; ``points`` has 2n+1
    columns.  The scaled Hermite basis uses mu = |lam|.
    """
    lam = float(lam)
    if lam == 0:
        raise DegenerateCentralCharacterError("central character degenerate")
    alpha = tuple(int(i) for i in np.atleast_1d(alpha))
    beta = tuple(int(i) for i in np.atleast_1d(beta))
    pts = np.asarray(points, dtype=complex)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    n = len(alpha)
    if pts.shape[1] != 2 * n + 1 or len(beta) != n:
        raise DimensionMismatchError("point/index dimensions disagree")
    out = np.exp(1j * lam * pts[:, 2 * n])
    for d in range(n):
        out = out * _mc1(lam, alpha[d], beta[d], pts[:, d], pts[:, n + d])
    return out[0] if single else out


def hermite_matrix(lam, sampler, size, n=1, rate=None, nodes=None, tol=1e-6):
    """Quadrature matrix of the operator ``integral f(g) pi_lambda(g) dg``.

    Parameters
    ----------
    lam : nonzero real
    sampler : callable
        Maps a batch of group points, shape (P, 2n+1), to complex values;
        must decay at least Gaussian-fast on every axis.
    size : int
        Number of basis functions (graded tensor order for n > 1).
    n : int
        Heisenberg parameter (v-space dimension is 2n).
    rate : float, optional
        Gaussian decay rate hint for the sampler (exponent coefficient);
        sets the Gauss-Hermite scaling.  Default 1.
    nodes : int, optional
        Per-axis node count (default 40 for n=1, 16 for n=2).
    tol : float
        Refinement stability requirement; violation raises QuadratureError.

    Returns
    -------
    (size, size) complex matrix M with M[a, b] = <pi(f) h_b, h_a>.
    """
    lam = float(lam)
    if lam == 0:
        raise DegenerateCentralCharacterError("central character degenerate")
    if size < 1:
        raise ValueError("size must be >= 1")
    rate = 1.0 if rate is None else float(rate)
    if nodes is None:
        nodes = 40 if n == 1 else 16
    idx = _graded_indices(n, size)

    def compute(q):
        pts, w = tensor_rule([gauss_hermite(q, rate=rate)] * (2 * n + 1))
        M = np.zeros((size, size), dtype=complex)
        # chunk the node set; within a chunk evaluate each per-axis factor
        # once and assemble every tensor entry from the cached factors
        for lo in range(0, len(w), 300000):
            hi = min(lo + 300000, len(w))
            p = pts[lo:hi]
            base = np.asarray(sampler(p), dtype=complex) * w[lo:hi]
            base = base * np.exp(1j * lam * p[:, 2 * n])
            cache = {}
            for a in range(size):
                for b in range(size):
                    acc = base
                    for d in range(n):
                        key = (d, idx[a][d], idx[b][d])
                        if key not in cache:
                            cache[key] = _mc1(
                                lam, key[1], key[2], p[:, d], p[:, n + d]
                            )
                        acc = acc * cache[key]
                    M[a, b] += acc.sum()
        return M

    coarse = compute(nodes)
    fine = compute(int(nodes * 1.5) + 1)
    err = float(np.max(np.abs(fine - coarse)))
    scale = max(1.0, float(np.max(np.abs(fine))))
    if err > tol * scale:
        raise QuadratureError(
            f"hermite_matrix not stable under refinement: change {err:.3e}",
            coarse=coarse,
            fine=fine,
        )
    return fine


def _graded_indices(n, size):
    """First ``size`` multi-indices of length n in graded (then lex) order."""
    out = []
    total = 0
    while len(out) < size:
        for idx in _compositions(total, n):
            out.append(idx)
            if len(out) == size:
                break
        total += 1
    return out


def _compositions(total, n):
    if n == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, n - 1):
            yield (head,) + rest
