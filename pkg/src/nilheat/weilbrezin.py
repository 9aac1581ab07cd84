"""Lattice-periodization transforms and sector decomposition.

For a divisor chain l and integer k != 0 set lam = 4 pi k / l_1.  The
periodization of a Schwartz-class test function f on R^n is

    V_k f(x, u, xi) = e^{i lam xi} e^{i (lam/2) x.u}
        sum_{m in Z^n} e^{i lam (ml).x} f(u + ml),        ml = (m_i l_i),

and its twist by a torus index j is V_{k,j} f = e^{2 pi i j.x} V_k f.
Functions of this shape are left-invariant under the lattice of
``make_gamma_l(l)`` and live in the k-th central-character subspace of
L^2 of the quotient, normalized here with measure (2/l_1) dx du dxi on
the fundamental domain [0,1)^n x prod [0,l_i) x [0, l_1/2).

The class below stores finite sums of twisted periodizations with exact
symbolic part data; truncation enters only at evaluation time, with a
certified tail bound.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import (
    DimensionMismatchError,
    SectorMismatchError,
    TruncationError,
)
from .funcs import GaussHermiteSum
from .lattice import DivisorChain, lambda_k
from .quadrature import gauss_legendre, tensor_rule, trapezoid_periodic

__all__ = [
    "NilFunction",
    "weil_brezin",
    "twist_j",
    "project_sector",
    "invert_sector",
    "nu_j_apply",
    "prop26_check",
    "sector_condition_residual",
    "l2m_inner_quadrature",
]


class NilFunction:
    """A finite sum of twisted periodizations sharing one (k, chain).

    Parameters
    ----------
    k : nonzero int
    chain : DivisorChain or tuple
    parts : sequence of (j, f)
        j is a torus index tuple (length n, any integers; reduced to the
        canonical window on construction) and f a test function on R^n.
    """

    def __init__(self, k, chain, parts):
        self.k = int(k)
        self.chain = (
            chain if isinstance(chain, DivisorChain) else DivisorChain(tuple(chain))
        )
        self.lam = lambda_k(self.k, self.chain)
        n = self.chain.n
        reduced = {}
        for j, f in parts:
            j = tuple(int(c) for c in j)
            if len(j) != n or f.dim != n:
                raise DimensionMismatchError("part dimension mismatch")
            j, f = self._reduce_part(j, f)
            if j in reduced:
                reduced[j] = reduced[j] + f
            else:
                reduced[j] = f
        self.parts = tuple(sorted(reduced.items()))

    def _reduce_part(self, j, f):
        # (j + 2 k p_i e_i, f) and (j, f(. - l_i e_i)) give the same
        # function: the extra plane wave e^{2 pi i (2 k p_i) x_i} equals
        # e^{i lam l_i x_i} and re-indexes the lattice sum.
        k = self.k
        shifts = []
        jc = []
        for i, p in enumerate(self.chain.ratios):
            win = 2 * abs(k) * p
            jci = j[i] % win
            s = (j[i] - jci) // (2 * k * p)
            jc.append(jci)
            shifts.append(-s * self.chain[i])
        if any(shifts):
            f = f.translate(np.array(shifts, dtype=float))
        return tuple(jc), f

    @property
    def n(self):
        return self.chain.n

    def __add__(self, other):
        if not isinstance(other, NilFunction):
            return NotImplemented
        if self.k != other.k or self.chain.values != other.chain.values:
            raise DimensionMismatchError("mismatched (k, chain)")
        return NilFunction(self.k, self.chain, self.parts + other.parts)

    def __mul__(self, scalar):
        return NilFunction(
            self.k, self.chain, [(j, f * scalar) for j, f in self.parts]
        )

    __rmul__ = __mul__

    def sectors(self):
        return tuple(j for j, _ in self.parts)

    # -- evaluation ---------------------------------------------------------

    def _tail_orders(self, umax, tol):
        """Per-axis lattice truncation so the dropped tail is below tol."""
        orders = []
        for i in range(self.n):
            li = self.chain[i]
            need = None
            for M in range(1, 81):
                tail = 0.0
                for _, f in self.parts:
                    tail += _axis_tail(f, i, umax[i], li, M)
                if tail < tol:
                    need = M
                    break
            if need is None:
                raise TruncationError(
                    f"lattice tail on axis {i} does not certify below {tol}",
                    required=81,
                )
            orders.append(need)
        return orders

    def evaluate(self, points, tol=1e-12):
        """Values at group points (P, 2n+1); complex coordinates allowed."""
        pts = np.asarray(points, dtype=complex)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        n = self.n
        if pts.shape[1] != 2 * n + 1:
            raise DimensionMismatchError("points need 2n+1 coordinates")
        x = pts[:, :n]
        u = pts[:, n : 2 * n]
        xi = pts[:, 2 * n]
        # cover complex u: the modulus shift from an imaginary part acts
        # like an enlarged real range, plus a unit safety margin
        umax = (np.max(np.abs(u), axis=0) + 1.0) if len(pts) else np.ones(n)
        orders = self._tail_orders(umax, tol)
        lam = self.lam
        lvec = np.array(self.chain.values, dtype=float)
        out = np.zeros(len(pts), dtype=complex)
        for j, f in self.parts:
            jx = x @ np.array(j, dtype=float)
            acc = np.zeros(len(pts), dtype=complex)
            for m in itertools.product(*[range(-M, M + 1) for M in orders]):
                ml = np.array(m, dtype=float) * lvec
                acc += np.exp(1j * lam * (x @ ml)) * f.translate(ml)(u)
            out += np.exp(2j * np.pi * jx) * acc
        out *= np.exp(1j * lam * xi + 0.5j * lam * np.sum(x * u, axis=1))
        return out[0] if single else out

    __call__ = evaluate

    # -- exact inner product on the quotient --------------------------------

    def inner(self, other):
        """L^2 inner product on the quotient, exact via part data.

        Cross-character pairs (k != k') vanish identically through the
        central integral, and within one character the x-integral kills
        every off-diagonal (j, m) pair once indices are canonical, so the
        result collapses to a sum of R^n inner products.
        """
        if not isinstance(other, NilFunction):
            raise TypeError("inner expects a NilFunction")
        if self.chain.values != other.chain.values:
            raise DimensionMismatchError("mismatched chains")
        if self.k != other.k:
            return 0.0 + 0.0j
        og = dict(other.parts)
        total = 0.0 + 0.0j
        for j, f in self.parts:
            if j in og:
                total += f.inner(og[j])
        return total

    def norm_sq(self):
        return float(self.inner(self).real)


def weil_brezin(k, chain, f, j=None):
    """The twisted periodization V_{k,j} f (j = 0 gives V_k f)."""
    chain = chain if isinstance(chain, DivisorChain) else DivisorChain(tuple(chain))
    if j is None:
        j = (0,) * chain.n
    return NilFunction(k, chain, [(tuple(j), f)])


def twist_j(F, j):
    """Multiply by the torus character e^{2 pi i j.x}."""
    j = tuple(int(c) for c in j)
    return NilFunction(F.k, F.chain, [(tuple(a + b for a, b in zip(jj, j)), f) for jj, f in F.parts])


def project_sector(F, j):
    """Orthogonal projection onto the sector with canonical index j.

    Acts exactly on the symbolic parts: the defining average over the
    multiplicity torus multiplies each part by a product of full
    character sums, which is 1 when the part index matches j in every
    axis window and 0 otherwise.  The averaging route itself is used as
    an independent numerical oracle in the test suite.
    """
    j = _canonical_j(F, j)
    keep = [(jj, f) for jj, f in F.parts if jj == j]
    return NilFunction(F.k, F.chain, keep or [(j, _zero_like(F))])


def invert_sector(F, j):
    """Recover f from a pure sector function V_{k,j} f.

    Raises SectorMismatchError when F has mass outside the requested
    sector (equivalently, when the sector shift condition fails).
    """
    j = _canonical_j(F, j)
    bad = [jj for jj, f in F.parts if jj != j and f.terms]
    if bad:
        raise SectorMismatchError(
            f"parts outside sector {j}: {sorted(bad)}"
        )
    match = [f for jj, f in F.parts if jj == j]
    if not match:
        raise SectorMismatchError(f"no part with sector index {j}")
    out = match[0]
    for f in match[1:]:
        out = out + f
    return out


def _canonical_j(F, j):
    j = tuple(int(c) for c in j)
    if len(j) != F.n:
        raise DimensionMismatchError("sector index has wrong length")
    return tuple(
        c % (2 * abs(F.k) * p) for c, p in zip(j, F.chain.ratios)
    )


def _zero_like(F):
    return GaussHermiteSum.zero(F.n)


def _axis_tail(f, axis, umax, li, M):
    """Upper envelope of sum_{|m| > M} max_u |axis factor of f(u + m li)|."""
    total = 0.0
    for coef, polys, quad, lin in f.terms:
        a = quad[axis].real
        b = lin[axis].real
        c = abs(coef)
        for d, p in enumerate(polys):
            if d != axis:
                c *= _poly_peak(p, quad[d].real, lin[d].real)
        # at |v| >= R the axis factor is below |poly|max e^{-a v^2 + b v};
        # sum the geometric-type tail starting at R = (M+1) li - umax
        tail = 0.0
        for m in range(M + 1, M + 200):
            R = m * li - umax
            if R <= 0:
                return math.inf
            v = _poly_abs_at(polys[axis], R) * math.exp(-a * R * R + abs(b) * R)
            tail += 2 * v
            if v < 1e-300:
                break
        total += c * tail
    return total


def _poly_peak(p, a, b):
    """max over R of |p(v)| e^{-a v^2 + b v} (coarse grid + decay bound)."""
    center = b / (2 * a) if a > 0 else 0.0
    width = 1.0 / math.sqrt(a) if a > 0 else 1.0
    grid = np.linspace(center - 8 * width, center + 8 * width, 257)
    vals = np.abs(np.polynomial.polynomial.polyval(grid, np.asarray(p)))
    return float(
        np.max(vals * np.exp(-a * grid * grid + b * grid))
    )


def _poly_abs_at(p, R):
    return float(np.polynomial.polynomial.polyval(R, np.abs(np.asarray(p))))


# ---------------------------------------------------------------------------
# distribution pairing and the transform factorization


def nu_j_apply(k, chain, j, f, tol=1e-12):
    """Pairing of f with the invariant node distribution of sector j:

        sum_{m in Z^n} fhat((j_i + 2 k m_i p_i) / l_i  per axis),

    fhat the unitary-2pi Fourier transform int f(v) e^{-2 pi i v.s} dv.
    """
    chain = chain if isinstance(chain, DivisorChain) else DivisorChain(tuple(chain))
    k = int(k)
    lam_check = lambda_k(k, chain)  # validates k != 0
    del lam_check
    j = tuple(int(c) for c in j)
    fhat = f.fourier()
    n = chain.n
    steps = [2 * k * p / l for p, l in zip(chain.ratios, chain.values)]
    base = [jj / l for jj, l in zip(j, chain.values)]
    orders = []
    for i in range(n):
        need = None
        for M in range(1, 81):
            tail = _axis_tail(fhat, i, abs(base[i]), abs(steps[i]), M)
            if tail < tol:
                need = M
                break
        if need is None:
            raise TruncationError("node tail does not certify", required=81)
        orders.append(need)
    total = 0.0 + 0.0j
    for m in itertools.product(*[range(-M, M + 1) for M in orders]):
        node = np.array(
            [base[i] + steps[i] * m[i] for i in range(n)], dtype=float
        )
        total += fhat(node)
    return complex(total)


def prop26_check(k, chain, j, f, probes, tol=1e-12):
    """Residual of the matrix-coefficient factorization of sector j.

    The invariant node pairing applied to a moving test function,

        F_j(x, u, xi) = (nu_j, pi_lambda(x, u, xi) f),

    factors through the Fourier transform of f: with
    g_j(w) = fhat(j_i/l_i + 2 k w_i/(l_1 l_i)) per axis,

        F_j(x, u, xi) = V_{k,j} g_j (u/l, -lx, xi).

    Returns the max modulus difference over the probe set.
    """
    from .hgroup import GroupPoint, schrodinger_apply

    chain = chain if isinstance(chain, DivisorChain) else DivisorChain(tuple(chain))
    lam = lambda_k(k, chain)
    j = tuple(int(c) for c in j)
    fhat = f.fourier()
    l = np.array(chain.values, dtype=float)
    scale = np.array(
        [2 * k / (chain[0] * li) for li in chain.values], dtype=float
    )
    offset = np.array([jj / li for jj, li in zip(j, chain.values)], dtype=float)
    gj = fhat.affine(scale, offset)
    G = weil_brezin(k, chain, gj, j)
    pts = np.asarray(probes, dtype=complex)
    if pts.ndim == 1:
        pts = pts[None, :]
    n = chain.n
    swapped = np.concatenate(
        [pts[:, n : 2 * n] / l, -pts[:, :n] * l, pts[:, 2 * n :]], axis=1
    )
    rhs = G.evaluate(swapped, tol=tol)
    lhs = np.empty(len(pts), dtype=complex)
    for r, row in enumerate(pts):
        moved = schrodinger_apply(
            lam, GroupPoint(tuple(row[:n]), tuple(row[n : 2 * n]), row[2 * n]), f
        )
        lhs[r] = nu_j_apply(k, chain, j, moved, tol=tol)
    return float(np.max(np.abs(lhs - rhs)))


def sector_condition_residual(F, j, probes, tol=1e-12):
    """Residual of the sector shift condition at the given (x, u) probes.

    For each axis i the pure-sector function G(x, u) = F(x, u, 0) must
    satisfy, with step delta_i = 1/(2 k p_i) on the x_i axis,

        G(x + delta_i e_i, u) = e^{pi i u_i / l_i}
                                 e^{pi i j_i / (k p_i)} G(x, u).

    Probes may be complex.  Returns the max modulus residual over probes
    and axes, normalized by the max modulus of G.
    """
    j = _canonical_j(F, j)
    pts = np.asarray(probes, dtype=complex)
    if pts.ndim == 1:
        pts = pts[None, :]
    n = F.n
    k = F.k
    zero_xi = np.zeros((len(pts), 1), dtype=complex)
    base_pts = np.concatenate([pts[:, : 2 * n], zero_xi], axis=1)
    base = F.evaluate(base_pts, tol=tol)
    scale = max(1.0, float(np.max(np.abs(base))))
    worst = 0.0
    for i, p in enumerate(F.chain.ratios):
        delta = 1.0 / (2 * k * p)
        shifted = base_pts.copy()
        shifted[:, i] += delta
        lhs = F.evaluate(shifted, tol=tol)
        phase = np.exp(
            1j * np.pi * pts[:, n + i] / F.chain[i]
            + 1j * np.pi * j[i] / (k * p)
        )
        worst = max(worst, float(np.max(np.abs(lhs - phase * base))))
    return worst / scale


# ---------------------------------------------------------------------------
# quadrature oracle on the fundamental domain


def l2m_inner_quadrature(F, G, nx=64, nu=48, nxi=16):
    """Inner product over the fundamental domain by explicit quadrature.

    Trapezoid rules on the periodic x and central axes (exact once the
    node count beats the bandwidth), Gauss-Legendre on each u axis, all
    against the normalized measure (2/l_1) dx du dxi.  This is the
    independent check of the exact part-data route in ``inner``.
    """
    if F.chain.values != G.chain.values:
        raise DimensionMismatchError("mismatched chains")
    chain = F.chain
    n = chain.n
    rules = []
    for _ in range(n):
        rules.append(trapezoid_periodic(nx, period=1.0))
    for li in chain.values:
        rules.append(gauss_legendre(nu, 0.0, float(li)))
    rules.append(trapezoid_periodic(nxi, period=chain[0] / 2.0))
    pts, w = tensor_rule(rules)
    vals = F.evaluate(pts) * np.conj(G.evaluate(pts))
    return complex((2.0 / chain[0]) * (w @ vals))
