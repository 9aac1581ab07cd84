"""A symbolically closed family of test functions on R^d.

Members are finite sums of separable terms

    c * prod_d p_d(v_d) * exp(-a_d v_d^2 + b_d v_d)

with complex coefficients, ``Re a_d > 0`` and arbitrary polynomials
``p_d``.  The family is closed under translation (by complex vectors),
modulation, diagonal affine substitution, multiplication by polynomials
and plane waves, Fourier transform, the Hermite-operator semigroup, and
pointwise complex conjugation on real arguments.  Inner products, norms
and marginal integrals all have closed forms.  This is what makes the
lattice sums, transform identities and matrix coefficients elsewhere in
the package exact up to floating-point rounding rather than quadrature.

Every member extends to an entire function on C^d and ``evaluate``
accepts complex points.

The Fourier transform convention is

    fourier(f)(xi) = int f(v) exp(-2 pi i v . xi) dv,

with ``fourier_angular`` providing the ``exp(-i v . omega)`` variant used
for central-variable transforms.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .errors import DimensionMismatchError

__all__ = [
    "GaussHermiteSum",
    "gaussian",
    "hermite_function",
    "hermite_basis",
    "gauss_poly_integral",
]

_ONE = (1.0 + 0.0j,)


# ---------------------------------------------------------------------------
# small ascending-coefficient polynomial helpers


def _pmul(c1, c2):
    if c1 == _ONE:
        return tuple(c2)
    if c2 == _ONE:
        return tuple(c1)
    return tuple(np.convolve(np.asarray(c1), np.asarray(c2)))


def _padd(c1, c2):
    n = max(len(c1), len(c2))
    out = np.zeros(n, dtype=complex)
    out[: len(c1)] += c1
    out[: len(c2)] += c2
    return tuple(out)


def _pderiv(c):
    if len(c) == 1:
        return (0.0 + 0.0j,)
    return tuple(k * c[k] for k in range(1, len(c)))


def _paffine(c, alpha, beta):
    """Coefficients of p(alpha * w + beta) given those of p."""
    res = (c[-1],)
    for k in range(len(c) - 2, -1, -1):
        res = _pmul(res, (beta, alpha))
        res = _padd(res, (c[k],))
    return res


def _peval(c, x):
    return np.polynomial.polynomial.polyval(x, np.asarray(c))


def _ptrim(c, tol=0.0):
    arr = list(c)
    while len(arr) > 1 and abs(arr[-1]) <= tol:
        arr.pop()
    return tuple(arr)


# ---------------------------------------------------------------------------
# Gaussian integrals with polynomial prefactors


def _moment_polys(a, rmax):
    """Polynomials R_r(B) with int v^r exp(-a v^2 + B v) dv = I_0 R_r(B).

    Defined by R_0 = 1 and R_{r+1} = (B / 2a) R_r + dR_r/dB.
    """
    polys = [(1.0 + 0.0j,)]
    for _ in range(rmax):
        prev = polys[-1]
        polys.append(_padd(_pmul(prev, (0.0, 1.0 / (2.0 * a))), _pderiv(prev)))
    return polys


def gauss_poly_integral(a, b, poly=_ONE):
    """Closed form of ``int p(v) exp(-a v^2 + b v) dv`` over the real line.

    Requires ``Re a > 0``.  ``poly`` holds ascending coefficients of p.
    """
    a = complex(a)
    if a.real <= 0:
        raise ValueError("gaussian integral needs Re a > 0")
    base = np.sqrt(np.pi / a) * np.exp(b * b / (4.0 * a))
    if poly == _ONE:
        return base
    acc = 0.0 + 0.0j
    for c, r in zip(poly, _moment_polys(a, len(poly) - 1)):
        if c != 0:
            acc += c * _peval(r, b)
    return base * acc


def _gauss_poly_integral_sym(a, b_lin, poly):
    """Like :func:`gauss_poly_integral` with ``b = b_lin[0] + b_lin[1] * y``.

    Returns ``(quad, lin, logless_const, poly_y)`` describing the result as
    ``const * p(y) * exp(-quad y^2 + lin y)``; used to keep integrals inside
    the family when the linear term depends on an outer variable.
    """
    a = complex(a)
    if a.real <= 0:
        raise ValueError("gaussian integral needs Re a > 0")
    b0, b1 = complex(b_lin[0]), complex(b_lin[1])
    # exp(B^2 / 4a) with B = b0 + b1 y contributes (b1^2/4a) y^2, stored
    # as exp(-quad y^2) with quad = -b1^2 / 4a
    quad = -(b1 * b1) / (4.0 * a)
    lin = 2.0 * b0 * b1 / (4.0 * a)
    const = np.sqrt(np.pi / a) * np.exp(b0 * b0 / (4.0 * a))
    acc = (0.0 + 0.0j,)
    for c, r in zip(poly, _moment_polys(a, len(poly) - 1)):
        if c != 0:
            acc = _padd(acc, _pmul((c,), _paffine(r, b1, b0)))
    return quad, lin, const, _ptrim(acc)


# ---------------------------------------------------------------------------


class GaussHermiteSum:
    """A finite sum of separable polynomial-Gaussian terms on R^dim."""

    __slots__ = ("dim", "terms", "_packed")

    def __init__(self, dim, terms):
        self.dim = int(dim)
        cleaned = []
        for coef, polys, quad, lin in terms:
            if coef == 0:
                continue
            if len(polys) != self.dim or len(quad) != self.dim or len(lin) != self.dim:
                raise DimensionMismatchError("term arity does not match dim")
            if any(complex(a).real <= 0 for a in quad):
                raise ValueError("term quadratic coefficients need Re a > 0")
            cleaned.append(
                (
                    complex(coef),
                    tuple(_ptrim(tuple(complex(x) for x in p)) for p in polys),
                    tuple(complex(a) for a in quad),
                    tuple(complex(b) for b in lin),
                )
            )
        self.terms = tuple(cleaned)
        self._packed = None

    # -- construction helpers ------------------------------------------------

    @classmethod
    def zero(cls, dim):
        return cls(dim, [])

    def _pack(self):
        if self._packed is None:
            T, D = len(self.terms), self.dim
            coefs = np.array([t[0] for t in self.terms], dtype=np.complex128)
            quads = np.array([t[2] for t in self.terms], dtype=np.complex128).reshape(T, D)
            lins = np.array([t[3] for t in self.terms], dtype=np.complex128).reshape(T, D)
            flat = []
            off = [0]
            for t in self.terms:
                for p in t[1]:
                    flat.extend(p)
                    off.append(len(flat))
            self._packed = (
                coefs,
                np.array(flat, dtype=np.complex128),
                np.array(off, dtype=np.int64),
                quads,
                lins,
            )
        return self._packed

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, points):
        """Evaluate at one point ``(dim,)`` or a batch ``(P, dim)``."""
        pts = np.asarray(points, dtype=np.complex128)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        if pts.shape[1] != self.dim:
            raise DimensionMismatchError(
                f"points have dim {pts.shape[1]}, function has dim {self.dim}"
            )
        if not self.terms:
            out = np.zeros(pts.shape[0], dtype=np.complex128)
        else:
            coefs, flat, off, quads, lins = self._pack()
            out = _kernels.eval_terms(np.ascontiguousarray(pts), coefs, flat, off, quads, lins)
        return out[0] if single else out

    def __call__(self, points):
        return self.evaluate(points)

    # -- algebra -------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, GaussHermiteSum):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatchError("cannot add functions of different dim")
        return GaussHermiteSum(self.dim, self.terms + other.terms)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        s = complex(scalar)
        return GaussHermiteSum(
            self.dim, [(c * s, p, q, l) for c, p, q, l in self.terms]
        )

    __rmul__ = __mul__

    def conjugate(self):
        """The member agreeing with ``conj(f)`` on real arguments."""
        return GaussHermiteSum(
            self.dim,
            [
                (
                    np.conj(c),
                    tuple(tuple(np.conj(x) for x in p) for p in polys),
                    tuple(np.conj(a) for a in quad),
                    tuple(np.conj(b) for b in lin),
                )
                for c, polys, quad, lin in self.terms
            ],
        )

    def translate(self, shift):
        """v -> f(v + shift); shift may be complex."""
        shift = np.atleast_1d(np.asarray(shift, dtype=complex))
        if shift.shape != (self.dim,):
            raise DimensionMismatchError("shift has wrong dim")
        out = []
        for c, polys, quad, lin in self.terms:
            coef = c
            npolys, nlin = [], []
            for d in range(self.dim):
                s = shift[d]
                if s == 0:
                    npolys.append(polys[d])
                    nlin.append(lin[d])
                    continue
                coef *= np.exp(-quad[d] * s * s + lin[d] * s)
                npolys.append(_paffine(polys[d], 1.0, s))
                nlin.append(lin[d] - 2.0 * quad[d] * s)
            out.append((coef, tuple(npolys), quad, tuple(nlin)))
        return GaussHermiteSum(self.dim, out)

    def modulate(self, freq):
        """Multiply by ``exp(i freq . v)``; freq may be complex."""
        freq = np.atleast_1d(np.asarray(freq, dtype=complex))
        if freq.shape != (self.dim,):
            raise DimensionMismatchError("freq has wrong dim")
        return GaussHermiteSum(
            self.dim,
            [
                (c, p, q, tuple(b + 1j * freq[d] for d, b in enumerate(lin)))
                for c, p, q, lin in self.terms
            ],
        )

    def product(self, other):
        """Pointwise product with another member (stays in the family)."""
        if other.dim != self.dim:
            raise DimensionMismatchError("product needs equal dims")
        out = []
        for cf, pf, qf, lf in self.terms:
            for cg, pg, qg, lg in other.terms:
                out.append(
                    (
                        cf * cg,
                        tuple(_pmul(pf[d], pg[d]) for d in range(self.dim)),
                        tuple(qf[d] + qg[d] for d in range(self.dim)),
                        tuple(lf[d] + lg[d] for d in range(self.dim)),
                    )
                )
        return GaussHermiteSum(self.dim, out)

    def mul_poly(self, axis, poly):
        """Multiply by a polynomial in coordinate ``axis`` (ascending coeffs)."""
        poly = tuple(complex(x) for x in poly)
        out = []
        for c, polys, quad, lin in self.terms:
            npolys = list(polys)
            npolys[axis] = _pmul(npolys[axis], poly)
            out.append((c, tuple(npolys), quad, lin))
        return GaussHermiteSum(self.dim, out)

    def affine(self, scale, offset=None):
        """Diagonal substitution v_d -> scale_d * v_d + offset_d."""
        scale = np.atleast_1d(np.asarray(scale, dtype=complex))
        offset = (
            np.zeros(self.dim, dtype=complex)
            if offset is None
            else np.atleast_1d(np.asarray(offset, dtype=complex))
        )
        if scale.shape != (self.dim,) or offset.shape != (self.dim,):
            raise DimensionMismatchError("scale/offset have wrong dim")
        out = []
        for c, polys, quad, lin in self.terms:
            coef = c
            npolys, nquad, nlin = [], [], []
            for d in range(self.dim):
                s, o = scale[d], offset[d]
                npolys.append(_paffine(polys[d], s, o))
                nquad.append(quad[d] * s * s)
                nlin.append(-2.0 * quad[d] * s * o + lin[d] * s)
                coef *= np.exp(-quad[d] * o * o + lin[d] * o)
            out.append((coef, tuple(npolys), tuple(nquad), tuple(nlin)))
        return GaussHermiteSum(self.dim, out)

    # -- integrals -----------------------------------------------------------

    def integrate(self, axes=None):
        """Integrate out the given axes (all by default).

        Full integration returns a complex number; partial integration
        returns the marginal as a new member on the remaining axes.
        """
        if axes is None:
            axes = tuple(range(self.dim))
        axes = tuple(sorted(set(int(a) % self.dim for a in np.atleast_1d(axes))))
        keep = [d for d in range(self.dim) if d not in axes]
        total = 0.0 + 0.0j
        out = []
        for c, polys, quad, lin in self.terms:
            coef = c
            for d in axes:
                coef *= gauss_poly_integral(quad[d], lin[d], polys[d])
            if keep:
                out.append(
                    (
                        coef,
                        tuple(polys[d] for d in keep),
                        tuple(quad[d] for d in keep),
                        tuple(lin[d] for d in keep),
                    )
                )
            else:
                total += coef
        if keep:
            return GaussHermiteSum(len(keep), out)
        return total

    def inner(self, other):
        """L2 inner product ``int f conj(g)`` over R^dim (closed form)."""
        if other.dim != self.dim:
            raise DimensionMismatchError("inner product needs equal dims")
        og = other.conjugate()
        acc = 0.0 + 0.0j
        for cf, pf, qf, lf in self.terms:
            for cg, pg, qg, lg in og.terms:
                val = cf * cg
                for d in range(self.dim):
                    val *= gauss_poly_integral(
                        qf[d] + qg[d], lf[d] + lg[d], _pmul(pf[d], pg[d])
                    )
                acc += val
        return acc

    def norm_sq(self):
        return float(self.inner(self).real)

    # -- transforms ----------------------------------------------------------

    def _fourier_impl(self, axes, scale):
        axes = tuple(sorted(set(int(a) % self.dim for a in np.atleast_1d(axes))))
        out = []
        for c, polys, quad, lin in self.terms:
            coef = c
            npolys, nquad, nlin = list(polys), list(quad), list(lin)
            for d in axes:
                a, b, p = quad[d], lin[d], polys[d]
                # B(omega) = b - i * scale * omega
                q2, l2, const, pol = _gauss_poly_integral_sym(a, (b, -1j * scale), p)
                coef *= const
                nquad[d], nlin[d], npolys[d] = q2, l2, pol
            out.append((coef, tuple(npolys), tuple(nquad), tuple(nlin)))
        return GaussHermiteSum(self.dim, out)

    def fourier(self, axes=None):
        """Fourier transform ``int f(v) exp(-2 pi i v . xi) dv`` on ``axes``."""
        if axes is None:
            axes = tuple(range(self.dim))
        return self._fourier_impl(axes, 2.0 * np.pi)

    def fourier_angular(self, axes=None):
        """Angular-frequency transform ``int f(v) exp(-i v . omega) dv``."""
        if axes is None:
            axes = tuple(range(self.dim))
        return self._fourier_impl(axes, 1.0)

    def hermite_semigroup(self, t, mu, axes=None):
        """Apply ``exp(-t H)`` on ``axes``, ``H = -d^2/dv^2 + mu^2 v^2``.

        Uses the closed-form Gaussian kernel of the harmonic-oscillator
        semigroup, so the result stays inside the family.  ``mu`` enters
        through ``|mu|``; ``t > 0``.
        """
        if t <= 0:
            raise ValueError("semigroup time must be positive")
        mu = abs(float(mu))
        if mu == 0:
            raise ValueError("oscillator frequency must be nonzero")
        if axes is None:
            axes = tuple(range(self.dim))
        axes = tuple(sorted(set(int(a) % self.dim for a in np.atleast_1d(axes))))
        s2 = math.sinh(2.0 * mu * t)
        c2 = math.cosh(2.0 * mu * t) / s2
        front = math.sqrt(mu / (2.0 * math.pi * s2))
        out = []
        for c, polys, quad, lin in self.terms:
            coef = c
            npolys, nquad, nlin = list(polys), list(quad), list(lin)
            for d in axes:
                a = quad[d] + 0.5 * mu * c2
                q2, l2, const, pol = _gauss_poly_integral_sym(
                    a, (lin[d], mu / s2), polys[d]
                )
                coef *= front * const
                nquad[d] = q2 + 0.5 * mu * c2
                nlin[d] = l2
                npolys[d] = pol
            out.append((coef, tuple(npolys), tuple(nquad), tuple(nlin)))
        return GaussHermiteSum(self.dim, out)

    # -- diagnostics ---------------------------------------------------------

    def quad_re_min(self, axis):
        """Smallest Re(a) over terms on an axis (slowest Gaussian decay)."""
        if not self.terms:
            return np.inf
        return min(t[2][axis].real for t in self.terms)

    def max_degree(self, axis):
        if not self.terms:
            return 0
        return max(len(t[1][axis]) - 1 for t in self.terms)

    def __repr__(self):
        return f"GaussHermiteSum(dim={self.dim}, terms={len(self.terms)})"


# ---------------------------------------------------------------------------
# constructors


def gaussian(dim, width, center=None, modulation=None):
    """``exp(-sum_d width_d (v_d - center_d)^2 + i modulation . v)``.

    Parameters
    ----------
    dim : int
    width : float or sequence
        Quadratic decay rates; ``Re > 0``.
    center, modulation : sequence, optional
    """
    width = np.broadcast_to(np.asarray(width, dtype=complex), (dim,))
    center = (
        np.zeros(dim) if center is None else np.broadcast_to(np.asarray(center, dtype=complex), (dim,))
    )
    modulation = (
        np.zeros(dim)
        if modulation is None
        else np.broadcast_to(np.asarray(modulation, dtype=complex), (dim,))
    )
    coef = np.exp(-np.sum(width * center * center))
    lin = 2.0 * width * center + 1j * modulation
    return GaussHermiteSum(
        dim, [(coef, (_ONE,) * dim, tuple(width), tuple(lin))]
    )


def hermite_function(alpha, mu=1.0):
    """Normalized Hermite function with multi-index ``alpha`` at scale ``mu``.

    The one-dimensional factors are ``(mu)^(1/4) h_k(sqrt(mu) v)`` with
    ``h_k`` the L2-normalized Hermite functions, so the result is an
    eigenfunction of ``-d^2/dv^2 + mu^2 v^2`` with eigenvalue
    ``mu (2 |alpha| + dim)`` and unit L2 norm.
    """
    alpha = tuple(int(a) for a in np.atleast_1d(alpha))
    mu = float(mu)
    if mu <= 0:
        raise ValueError("scale must be positive")
    dim = len(alpha)
    polys, quad, lin = [], [], []
    coef = 1.0 + 0.0j
    sq = math.sqrt(mu)
    for k in alpha:
        basis = np.zeros(k + 1)
        basis[k] = 1.0
        herm = tuple(complex(x) for x in np.polynomial.hermite.herm2poly(basis))
        polys.append(_paffine(herm, sq, 0.0))
        quad.append(0.5 * mu + 0.0j)
        lin.append(0.0 + 0.0j)
        coef *= mu**0.25 / math.sqrt(2.0**k * math.factorial(k) * math.sqrt(math.pi))
    return GaussHermiteSum(dim, [(coef, tuple(polys), tuple(quad), tuple(lin))])


def hermite_basis(dim, size, mu=1.0):
    """Tensor Hermite basis with per-axis degree < size, in C-order."""
    idx = np.indices((size,) * dim).reshape(dim, -1).T
    return [hermite_function(tuple(a), mu) for a in idx]
