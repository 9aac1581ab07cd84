"""Weighted norms on entire continuations of sector functions.

A sector function ``F`` continues to an entire function of ``(z, w)`` in
C^{2n} through its lattice series (values taken at ``xi = 0``).  For the
central frequency ``lam`` and diffusion time ``t`` the weighted squared
norm used here is

    ||F||^2 = INT_{R^{2n}} INT_{Q(l)} INT_{Q} |F(z, w)|^2 W_t^lam(z, w)
              dx du dy dv,

    W_t^lam(z, w) = 2^n e^{lam (x.v - y.u)} e^{-lam coth(2 t lam)
                    (|y|^2 + |v|^2)},

with ``z = x + iy``, ``w = u + iv``, ``Q = [0,1)^n`` and
``Q(l) = prod [0, l_i)``.  The shape of the weight is forced by the
quasi-periodicity of sector functions: ``|e^{i lam z.w / 2}|^2`` equals
``e^{-lam(x.v + y.u)}``, so the real coupling ``e^{lam x.v}`` restores
the exact orthogonality of the lattice phases in x, while ``e^{-lam
y.u}`` doubles the remaining coupling so that the cell integrals in u
reassemble into integrals over all of R^n.  What remains per axis is a
Hermite-Bergman pairing whose Gaussian rates are ``lam tanh(2 t lam)``
(growth in the real direction) and ``lam coth(2 t lam)`` (decay in the
imaginary direction); with this weight the squared norm of a
heat-transformed sector function is a constant multiple of the squared
L^2 norm of its generating function.

The norm is finite only when the weight's Gaussian decay beats the
quadratic growth of ``|F|^2``; the per-axis margins are computed up
front and :class:`DivergentNormError` is raised when they close.

Two independent evaluation routes are provided:

* :func:`bergman_inner` expands the lattice series and integrates per
  coordinate pair: the x-integral reduces to an exact integer selection
  rule, the u-integral is a Gauss-Legendre rule on one cell, and the
  (y, v) integrals are Gauss-Legendre rules on decay-matched intervals,
  with the y-interval recentered per lattice term.  Cost grows linearly
  with n.

* :func:`bergman_inner_direct` evaluates the integrand on a dense tensor
  grid through the sector functions' own evaluators.  It is exponentially
  expensive in n and exists as the cross-check of the factorized route.
"""

import math

import numpy as np

from .errors import (
    DimensionMismatchError,
    DivergentNormError,
    QuadratureError,
    TruncationError,
)
from .funcs import _peval
from .heat import _w_coth, sector_heat_transform
from .lattice import DivisorChain, lambda_k
from .quadrature import gauss_legendre
from .weilbrezin import weil_brezin

__all__ = [
    "bergman_weight",
    "growth_margins",
    "bergman_inner",
    "bergman_norm_sq",
    "bergman_inner_direct",
    "thm28_ratio",
]


def _weight_rate(t, lam):
    """lam coth(2 t lam) > 0, the Gaussian rate of the weight."""
    if t <= 0:
        raise ValueError("diffusion time must be positive")
    return float(_w_coth(np.array(2.0 * t * lam)) / (2.0 * t))


def bergman_weight(t, lam, zw):
    """Evaluate the weight at rows ``(z_1..z_n, w_1..w_n)`` of ``zw``."""
    zw = np.atleast_2d(np.asarray(zw, dtype=complex))
    if zw.shape[1] % 2 != 0:
        raise DimensionMismatchError("weight points need 2n columns")
    n = zw.shape[1] // 2
    x = zw[:, :n].real
    y = zw[:, :n].imag
    u = zw[:, n:].real
    v = zw[:, n:].imag
    rho = _weight_rate(t, lam)
    coupling = np.exp(lam * ((x * v).sum(axis=1) - (y * u).sum(axis=1)))
    return 2.0**n * coupling * np.exp(
        -rho * ((y * y).sum(axis=1) + (v * v).sum(axis=1))
    )


def _axis_extremes(G, d):
    """(min/max Re quad, max |lin|, max |Im lin|) over parts of G on axis d."""
    amin, amax, bmax, bimax = np.inf, 0.0, 0.0, 0.0
    for _, f in G.parts:
        for _, _, quad, lin in f.terms:
            a = quad[d].real
            amin = min(amin, a)
            amax = max(amax, a)
            bmax = max(bmax, abs(lin[d]))
            bimax = max(bimax, abs(lin[d].imag))
    if not np.isfinite(amin):
        raise DivergentNormError("empty sector function has no Bergman data")
    return amin, amax, bmax, bimax


def growth_margins(G1, G2, t):
    """Per-axis decay margins (y_rate, v_rate) of ``G1 conj(G2) W``.

    The weight decays at rate ``lam coth(2 t lam)`` in each ``y_d`` and
    ``v_d``; the integrand grows quadratically from the Gaussian factors
    (rate ``a1 + a2`` in v) and from the dominating term of the lattice
    series (rate ``lam^2/4 (1/a1 + 1/a2)`` in y).  Any nonpositive margin
    means the norm integral diverges.
    """
    lam = G1.lam
    rho = _weight_rate(t, lam)
    n = G1.chain.n
    y_rates, v_rates = [], []
    for d in range(n):
        a1min, a1max, _, _ = _axis_extremes(G1, d)
        a2min, a2max, _, _ = _axis_extremes(G2, d)
        v_rates.append(rho - (a1max + a2max))
        y_rates.append(rho - 0.25 * lam * lam * (1.0 / a1min + 1.0 / a2min))
    return np.array(y_rates), np.array(v_rates)


def _require_margins(G1, G2, t):
    y_rates, v_rates = growth_margins(G1, G2, t)
    if np.any(y_rates <= 0.0) or np.any(v_rates <= 0.0):
        raise DivergentNormError(
            "weighted norm diverges: per-axis decay margins are "
            f"y {np.round(y_rates, 3).tolist()}, "
            f"v {np.round(v_rates, 3).tolist()}; the weight rate "
            f"{_weight_rate(t, G1.lam):.3f} must exceed the growth of the "
            "integrand on every axis"
        )
    return y_rates, v_rates


def _interval_cutoff(rate, lin, logtail):
    """Half-width L with ``e^{-rate L^2 + lin L} <= e^{-logtail}``."""
    return (lin + math.sqrt(lin * lin + 4.0 * rate * logtail)) / (2.0 * rate)


def bergman_inner(G1, G2, t, *, nu=48, nyv=56, tol=1e-6):
    """Weighted inner product ``INT G1 conj(G2) W`` of two sector functions.

    Both arguments must live on the same lattice and frequency.  The
    integrand separates per coordinate pair once the lattice series are
    expanded: the x-integral enforces an exact selection rule between
    lattice offsets and sector labels, the u-integral uses ``nu``
    Gauss-Legendre nodes per cell, and the (y, v) integrals use ``nyv``
    nodes on decay-matched intervals.  The whole computation is repeated
    on refined rules and :class:`QuadratureError` is raised if the two
    disagree beyond ``tol`` relative to the natural scale.
    """
    if G1.k != G2.k or G1.chain.values != G2.chain.values:
        raise DimensionMismatchError("inner product needs one (k, chain)")
    lam = G1.lam
    n = G1.chain.n
    _require_margins(G1, G2, t)
    rho = _weight_rate(t, lam)
    logtail = math.log(1e13)

    # scale for both the refinement check and near-orthogonal values
    floor = math.sqrt(max(G1.norm_sq(), 1e-300) * max(G2.norm_sq(), 1e-300))

    def run(nu_, nyv_, inflate):
        total = 0.0 + 0.0j
        for (j1, f1) in G1.parts:
            for (j2, f2) in G2.parts:
                for t1 in f1.terms:
                    for t2 in f2.terms:
                        prod = t1[0] * np.conj(t2[0])
                        for d in range(n):
                            if prod == 0.0:
                                break
                            prod *= _axis_inner(
                                t1, t2, j1[d], j2[d], d, lam, rho,
                                float(G1.chain.values[d]),
                                G1.k, G1.chain.ratios[d],
                                logtail, nu_, nyv_, inflate,
                            )
                        total += prod
        return 2.0**n * total

    coarse = run(nu, nyv, 1.0)
    fine = run(int(nu * 1.3), int(nyv * 1.3), 1.06)
    if abs(fine - coarse) > tol * max(abs(fine), floor):
        raise QuadratureError(
            "weighted-norm quadrature did not stabilize: "
            f"{coarse} vs {fine}",
            coarse=coarse,
            fine=fine,
        )
    return fine


def _axis_inner(t1, t2, j1, j2, d, lam, rho, ld, kk, pd, logtail,
                nu, nyv, inflate):
    """One coordinate pair's contribution for one pair of family terms.

    The x-integral of ``e^{i kappa x}`` over one period vanishes unless
    ``kappa = lam ld (m1 - m2) + 2 pi (j1 - j2)`` is zero, which pins
    ``m1 - m2`` by exact integer arithmetic and collapses the double
    lattice sum to a single one.  For each surviving term the y-interval
    is recentered on its shifted peak (the completed square against the
    weight's Gaussian), keeping every intermediate array within floating
    range.
    """
    q1 = t1[2][d]
    q2 = t2[2][d]
    b1 = t1[3][d]
    b2 = t2[3][d]
    a1 = q1.real
    a2 = q2.real

    # selection rule from the x-integral: 2 k p (m1 - m2) = j2 - j1
    step = 2 * kk * pd
    if (j2 - j1) % step != 0:
        return 0.0 + 0.0j
    moff = (j2 - j1) // step  # m1 - m2 = moff

    # real parts of the linear coefficients only tilt the u-profile;
    # the magnitude grows along v through the imaginary parts alone
    V = inflate * _interval_cutoff(
        rho - (a1 + a2), abs(b1.imag) + abs(b2.imag) + 2.0, logtail
    )
    hy = inflate * _interval_cutoff(rho, abs(lam) * ld + 2.0, logtail)

    def centers(m1):
        m2 = m1 - moff
        mbar = 0.5 * (m1 + m2) * ld
        cmid = 2.0 * lam * (mbar + 0.5 * ld) + 2.0 * math.pi * (j1 + j2)
        y0 = -cmid / (2.0 * rho)
        return m2, y0, rho * y0 * y0

    def log_peak(m1):
        # exponent at the cell center (u = ld/2, v = 0, y = y0); an
        # exact quadratic in m1 used only to locate the largest term
        m2, _, gain0 = centers(m1)
        c1 = (m1 + 0.5) * ld
        c2 = (m2 + 0.5) * ld
        return (-a1 * c1 * c1 + t1[3][d].real * c1
                - a2 * c2 * c2 + t2[3][d].real * c2 + gain0)

    def term(m1):
        m2, y0, gain0 = centers(m1)
        # local phase frequencies: the quadratic exponents beat against
        # each other at a rate set by q1 s1 - conj(q2) s2, which cancels
        # exactly for matched diagonal pairs
        s1c = (m1 + 0.5) * ld
        s2c = (m2 + 0.5) * ld
        beat = 2.0 * abs(q1 * s1c - np.conj(q2) * s2c) \
            + (abs(q1) + abs(q2)) * ld
        freq_v = beat + 2.0 * (abs(q1.imag) + abs(q2.imag)) * V \
            + abs(b1.real - b2.real)
        freq_u = beat + abs(b1.imag) + abs(b2.imag)
        nq = nu + int(0.7 * abs(lam) * (abs(y0) + hy) * ld
                      + 0.45 * freq_u * ld)
        nv = nyv + int(0.45 * freq_v * V)

        ug, uw = gauss_legendre(nq, 0.0, ld)
        vg, vw = gauss_legendre(nv, -V, V)
        yg, yw = gauss_legendre(nyv, y0 - hy, y0 + hy)

        # the factor exponents, the weight's v-Gaussian, and the
        # completed-square gain are combined before exponentiating: the
        # individual pieces overflow or underflow long before their
        # well-scaled product does
        A1 = ug[None, :] + 1j * vg[:, None] + m1 * ld
        A2 = ug[None, :] + 1j * vg[:, None] + m2 * ld
        expo = (
            -q1 * A1 * A1 + t1[3][d] * A1
            + np.conj(-q2 * A2 * A2 + t2[3][d] * A2)
            - rho * vg[:, None] ** 2
            + gain0
        )
        fac = (_peval(t1[1][d], A1) * np.conj(_peval(t2[1][d], A2))
               * np.exp(expo))

        # y-weight and the residual u-coupling e^{-2 lam (u - ld/2) y}
        # are likewise combined into one bounded 2-d array
        W2 = yw[:, None] * np.exp(
            -rho * (yg - y0)[:, None] ** 2
            - 2.0 * lam * np.outer(yg, ug - 0.5 * ld)
        )
        U = W2 @ (fac * uw[None, :]).T  # (Ny, Nv)
        return U.sum(axis=0) @ vw

    # after the y-integration the lattice terms decay only at the margin
    # rate, which can be arbitrarily slow, so no fixed window is safe:
    # scan outward from the analytically located peak until the terms
    # have fallen well below the largest one seen
    e0 = log_peak(0)
    ep = log_peak(1)
    em = log_peak(-1)
    curv = 0.5 * (ep + em) - e0
    mstart = 0
    if curv < 0.0:
        mstart = int(round(-0.5 * (ep - em) / (2.0 * curv)))

    total = 0.0 + 0.0j
    for first, direction in ((mstart, 1), (mstart - 1, -1)):
        peak = 0.0
        prev = math.inf
        small = 0
        m1 = first
        while True:
            val = term(m1)
            total += val
            mag = abs(val)
            peak = max(peak, mag)
            if mag <= 1e-11 * peak and mag <= prev:
                small += 1
                if small >= 2:
                    break
            else:
                small = 0
            prev = mag
            m1 += direction
            if abs(m1 - mstart) > 1200:
                raise TruncationError(
                    "lattice series did not settle within 1200 cells "
                    "of its peak",
                    required=abs(m1 - mstart),
                )
    return total


def bergman_norm_sq(G, t, **kw):
    """Weighted squared norm of one sector function (see bergman_inner)."""
    return float(np.real(bergman_inner(G, G, t, **kw)))


def bergman_inner_direct(G1, G2, t, *, nx=48, nu=32, nyv=36):
    """Dense-grid evaluation of the weighted inner product.

    Builds the full tensor rule over ``(x, u, y, v)`` and evaluates both
    sector functions pointwise at the complexified coordinates.  Memory
    and time grow as ``nyv^{2n}``, so this route is practical for n = 1;
    it deliberately shares nothing with :func:`bergman_inner` beyond the
    weight definition.
    """
    if G1.k != G2.k or G1.chain.values != G2.chain.values:
        raise DimensionMismatchError("inner product needs one (k, chain)")
    lam = G1.lam
    n = G1.chain.n
    y_rates, v_rates = _require_margins(G1, G2, t)
    logtail = math.log(1e10)
    jmax = 0
    for G in (G1, G2):
        for j, _ in G.parts:
            jmax = max(jmax, max(abs(ji) for ji in j))

    rules = []
    for d in range(n):
        rules.append(gauss_legendre(nx, 0.0, 1.0))
    for d in range(n):
        rules.append(gauss_legendre(nu, 0.0, float(G1.chain.values[d])))
    for d in range(n):
        ld = float(G1.chain.values[d])
        lin = 2.0 * abs(lam) * ld + 2.0 * math.pi * jmax + 2.0
        Y = _interval_cutoff(float(y_rates[d]), lin, logtail)
        rules.append(gauss_legendre(nyv, -Y, Y))
    for d in range(n):
        # only imaginary parts of the linear coefficients grow along v
        _, _, _, bi1 = _axis_extremes(G1, d)
        _, _, _, bi2 = _axis_extremes(G2, d)
        V = _interval_cutoff(float(v_rates[d]), bi1 + bi2 + 2.0, logtail)
        rules.append(gauss_legendre(nyv, -V, V))

    from .quadrature import tensor_rule

    grid, w = tensor_rule(rules)
    x = grid[:, :n]
    u = grid[:, n : 2 * n]
    y = grid[:, 2 * n : 3 * n]
    v = grid[:, 3 * n :]
    zw = np.concatenate([x + 1j * y, u + 1j * v], axis=1)
    pts = np.concatenate([zw, np.zeros((len(zw), 1), dtype=complex)], axis=1)
    vals1 = G1.evaluate(pts)
    vals2 = np.conj(G2.evaluate(pts))
    wt = bergman_weight(t, lam, zw)
    return complex(np.sum(w * vals1 * vals2 * wt))


def thm28_ratio(f, k, chain, j, t, exponent_variant="single", **kw):
    """Weighted-norm to plain-norm ratio of the smoothed sector image of f.

    Runs the full pipeline: periodize ``f`` into the sector ``(k, j)``,
    apply the diffusion semigroup for time ``t``, rescale by the
    stated frequency prefactor, and divide the weighted squared norm of
    the image by the squared L2 norm of ``f``.  The library's claim is
    that the result does not depend on ``f``; the constant itself is
    measured, not asserted.

    ``exponent_variant`` selects the prefactor applied to the image
    before taking the norm: ``"single"`` uses ``e^{t lam^2}`` and
    ``"double"`` uses ``e^{2 t lam^2}``.  Both are exposed because the
    two normalizations in circulation differ by exactly this factor;
    constancy across a fixed ``(k, j, t)`` is unaffected, so the suite
    reports both.  Extra keyword arguments go to the norm quadrature.
    """
    chain = chain if isinstance(chain, DivisorChain) else DivisorChain(tuple(chain))
    lam = lambda_k(k, chain)
    if exponent_variant == "single":
        pref = math.exp(2.0 * t * lam * lam)
    elif exponent_variant == "double":
        pref = math.exp(4.0 * t * lam * lam)
    else:
        raise ValueError("exponent_variant must be 'single' or 'double'")
    G = weil_brezin(k, chain, f, j=j)
    Gt = sector_heat_transform(G, t)
    denom = float(f.norm_sq().real)
    if denom == 0.0:
        raise ValueError("ratio undefined for the zero function")
    return pref * bergman_norm_sq(Gt, t, **kw) / denom
