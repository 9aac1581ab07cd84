"""Heat kernels on the polarized step-two group and their H-type extensions.

Everything here is normalized to unit total mass.  The implemented objects:

* ``eval_kt``: the central-frequency superposition

      k_t(x, u, xi) = c_n INT (lam/sinh(t lam))^n e^{-t lam^2} e^{i lam xi}
                          e^{-(lam coth(t lam)/4)(|x|^2 + |u|^2)} d lam

  with ``c_n = (2 pi)^{-1} (4 pi)^{-n}``, evaluated by Gauss-Legendre
  quadrature in ``lam`` with a mandatory refinement check.

* ``eval_kt_lambda`` / ``eval_pt_lambda``: the fixed-frequency slices

      k_t^lam(x, u) = (4 pi)^{-n} (lam/sinh(t lam))^n e^{-t lam^2}
                      e^{-(lam coth(t lam)/4)(|x|^2 + |u|^2)},

  ``p_t^lam`` dropping the ``e^{-t lam^2}`` factor.  Both are plain
  Gaussians; ``kt_lambda_family`` / ``pt_lambda_family`` expose them as
  members of the symbolic Gaussian family, and ``twisted_convolution``
  computes twisted convolutions of family members in closed form, which
  is how the semigroup law of the slices is checked exactly.

* ``eval_qt``: the kernel with an m-dimensional center,

      q_t(v, z) = c_{n,m} INT_{R^m} (|w|/sinh(t|w|))^n e^{-t|w|^2}
                      e^{i w.z} e^{-(|w| coth(t|w|)/4)|v|^2} dw,

  ``c_{n,m} = (2 pi)^{-m} (4 pi)^{-n}``.  ``m = 1`` coincides with
  ``eval_kt``; ``m = 3`` uses the radial reduction of the w-integral and
  a full product rule is kept as an independent cross-check route.

* ``heat_transform`` / ``HeatFlow``: the smoothing operator ``f -> f * k_t``
  on test functions over R^{2n+1}.  Per frequency node the 2n-dimensional
  twisted convolution integral is done in closed form through Gaussian
  moment integrals, so only the frequency axis is quadratured.

* ``sector_heat_transform``: the same operator on lattice-periodic sector
  functions, computed exactly inside the symbolic family (conjugated
  oscillator semigroup per sector); ``sector_heat_quadrature`` is the
  independent quadrature route used to cross-check it.

* finite-difference diagnostics: ``heat_residual`` measures
  ``d/dt - (sum_i X_i^2 + U_i^2 + T^2)`` with X_i, U_i, T the
  left-invariant fields; ``cauchy_riemann_residual`` measures
  ``d/d(conj z)`` along one complexified coordinate.
"""

import math

import numpy as np

from . import _kernels
from .errors import DimensionMismatchError, QuadratureError
from .funcs import GaussHermiteSum, _peval, gauss_poly_integral
from .quadrature import gauss_hermite, gauss_legendre, tensor_rule
from .weilbrezin import NilFunction

__all__ = [
    "mass_constant",
    "lambda_profile",
    "eval_kt",
    "eval_kt_lambda",
    "eval_pt_lambda",
    "kt_lambda_family",
    "pt_lambda_family",
    "twisted_convolution",
    "eval_qt",
    "kernel_mass",
    "HeatFlow",
    "heat_transform",
    "sector_heat_transform",
    "sector_heat_quadrature",
    "heat_residual",
    "cauchy_riemann_residual",
    "KernelEvaluator",
]


# ---------------------------------------------------------------------------
# stable frequency profiles

def _w_over_sinh(w):
    """w / sinh(w), even, stable through w = 0 and large |w|."""
    w = np.abs(np.asarray(w, dtype=float))
    out = np.empty_like(w)
    small = w < 1e-4
    big = w > 300.0
    mid = ~small & ~big
    ws = w[small]
    out[small] = 1.0 - ws * ws / 6.0 + 7.0 * ws**4 / 360.0
    out[mid] = w[mid] / np.sinh(w[mid])
    out[big] = 2.0 * w[big] * np.exp(-w[big])
    return out


def _w_coth(w):
    """w coth(w), even, stable through w = 0."""
    w = np.abs(np.asarray(w, dtype=float))
    out = np.empty_like(w)
    small = w < 1e-4
    ws = w[small]
    out[small] = 1.0 + ws * ws / 3.0 - ws**4 / 45.0
    out[~small] = w[~small] / np.tanh(w[~small])
    return out


def lambda_profile(t, lam, n):
    """Return ``((lam/sinh(t lam))^n, lam coth(t lam)/4)`` stably.

    Both factors are even in ``lam`` and smooth through ``lam = 0`` where
    they take the values ``t^{-n}`` and ``1/(4t)``.
    """
    if t <= 0:
        raise ValueError("diffusion time must be positive")
    w = t * np.asarray(lam, dtype=float)
    pref = (_w_over_sinh(w) / t) ** n
    rate = 0.25 * _w_coth(w) / t
    return pref, rate


def mass_constant(n, m=1):
    """Normalization ``(2 pi)^{-m} (4 pi)^{-n}`` giving unit total mass."""
    return (2.0 * np.pi) ** (-m) * (4.0 * np.pi) ** (-n)


# ---------------------------------------------------------------------------
# frequency quadrature for the full kernel

def _lambda_cutoff(t, n, kappa, extra_log, tol):
    """Half-width L with ``(1/t)^n e^{extra_log - t L^2 + kappa L} <= tol``."""
    logtail = n * math.log(1.0 / t) + extra_log + math.log(1.0 / tol) + 6.0
    logtail = max(logtail, 1.0)
    return (kappa + math.sqrt(kappa * kappa + 4.0 * t * logtail)) / (2.0 * t)


def _point_envelope(ssq, xi):
    """Growth/oscillation parameters of a point batch for the lam-rule."""
    s_neg = max(0.0, -float(np.min(ssq.real)))
    kappa = float(np.max(np.abs(xi.imag))) + 0.25 * s_neg
    osc = float(np.max(np.abs(xi.real))) + 0.25 * float(np.max(np.abs(ssq)))
    return s_neg, kappa, osc + kappa


def _check_refined(coarse, fine, tol, label, floor=0.0):
    scale = max(float(np.max(np.abs(fine))), floor, 1e-30)
    err = float(np.max(np.abs(fine - coarse)))
    if err > tol * scale:
        raise QuadratureError(
            f"frequency quadrature did not stabilize for {label}: "
            f"refinement moved values by {err:.3e} (scale {scale:.3e})",
            coarse=coarse,
            fine=fine,
        )
    return fine


def _split_heat_points(points, n):
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    if pts.shape[1] != 2 * n + 1:
        raise DimensionMismatchError(
            f"points must have 2n+1 = {2 * n + 1} columns, got {pts.shape[1]}"
        )
    ssq = (pts[:, : 2 * n] ** 2).sum(axis=1)
    return pts, np.ascontiguousarray(ssq), np.ascontiguousarray(pts[:, 2 * n])


def eval_kt(t, points, *, tol=1e-11):
    """Evaluate the unit-mass kernel at ``points`` of shape (P, 2n+1).

    Points may be complex (entire continuation in every coordinate).  The
    frequency integral is evaluated twice, at a base rule and a refined
    rule, and :class:`QuadratureError` is raised if they disagree beyond
    ``tol`` relative to the batch scale.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    if pts.shape[1] % 2 == 0 or pts.shape[1] < 3:
        raise DimensionMismatchError("kernel points need an odd number >= 3 of columns")
    n = (pts.shape[1] - 1) // 2
    pts, ssq, xi = _split_heat_points(pts, n)
    s_neg, kappa, osc = _point_envelope(ssq, xi)
    cut = _lambda_cutoff(t, n, kappa, s_neg / (4.0 * t), tol)
    nodes = 48 + int(math.ceil(0.8 * cut * osc))
    cn = mass_constant(n, 1)

    def run(cut_, nodes_):
        lam, w = gauss_legendre(nodes_, -cut_, cut_)
        pref, rate = lambda_profile(t, lam, n)
        wfac = cn * w * pref * np.exp(-t * lam * lam)
        return _kernels.heat_lambda_sum(ssq, xi, wfac, lam, rate)

    coarse = run(cut, nodes)
    fine = run(1.12 * cut, int(math.ceil(1.7 * nodes)))
    return _check_refined(coarse, fine, tol, "the heat kernel")


def eval_kt_lambda(t, lam, points):
    """Fixed-frequency slice on (P, 2n) points; closed Gaussian form."""
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    if pts.shape[1] % 2 != 0 or pts.shape[1] == 0:
        raise DimensionMismatchError("slice points need 2n columns")
    n = pts.shape[1] // 2
    ssq = (pts**2).sum(axis=1)
    pref, rate = lambda_profile(t, float(lam), n)
    amp = (4.0 * np.pi) ** (-n) * pref * math.exp(-t * lam * lam)
    return amp * np.exp(-rate * ssq)


def eval_pt_lambda(t, lam, points):
    """Slice without the ``e^{-t lam^2}`` factor (twisted semigroup kernel)."""
    return eval_kt_lambda(t, lam, points) * math.exp(t * float(lam) ** 2)


def _slice_family(t, lam, n, with_center_decay):
    pref, rate = lambda_profile(t, float(lam), n)
    coef = (4.0 * np.pi) ** (-n) * float(pref)
    if with_center_decay:
        coef *= math.exp(-t * float(lam) ** 2)
    one = (1.0 + 0.0j,)
    dim = 2 * n
    return GaussHermiteSum(
        dim, [(coef, (one,) * dim, (complex(rate),) * dim, (0.0j,) * dim)]
    )


def kt_lambda_family(t, lam, n):
    """``eval_kt_lambda`` as a symbolic Gaussian-family member on 2n axes."""
    return _slice_family(t, lam, n, True)


def pt_lambda_family(t, lam, n):
    """``eval_pt_lambda`` as a symbolic Gaussian-family member on 2n axes."""
    return _slice_family(t, lam, n, False)


def twisted_convolution(fa, fb, lam, points):
    """Closed-form twisted convolution of two family members on R^{2n}.

    Computes ``(fa *_lam fb)(x, u) = INT fa(x - x', u - u') fb(x', u')
    e^{i lam (x.u' - x'.u)/2} dx' du'`` at each row of ``points``; this is
    the fiber of group convolution over one central frequency.
    """
    if fa.dim != fb.dim or fa.dim % 2 != 0:
        raise DimensionMismatchError("twisted convolution needs equal even dims")
    n = fa.dim // 2
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    if pts.shape[1] != fa.dim:
        raise DimensionMismatchError("points must have 2n columns")
    lam = float(lam)
    flip = -np.ones(fa.dim)
    vals = np.empty(len(pts), dtype=complex)
    for p, row in enumerate(pts):
        shifted = fa.affine(flip, row)
        freq = np.concatenate([-0.5 * lam * row[n:], 0.5 * lam * row[:n]])
        vals[p] = shifted.product(fb).modulate(freq).integrate()
    return vals


# ---------------------------------------------------------------------------
# H-type kernel

def eval_qt(t, points, n, m, *, tol=1e-10, force_product=False):
    """Evaluate the H-type kernel at ``points`` of shape (P, 2n+m).

    ``m = 1`` delegates to :func:`eval_kt` (identical integral).  ``m = 3``
    uses the radial reduction; ``force_product`` selects the direct
    m-dimensional product rule instead, which works for any m and serves
    as the independent cross-check of the radial route.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    if pts.shape[1] != 2 * n + m:
        raise DimensionMismatchError(
            f"points must have 2n+m = {2 * n + m} columns, got {pts.shape[1]}"
        )
    if m == 1 and not force_product:
        return eval_kt(t, pts, tol=tol)
    vsq = np.ascontiguousarray((pts[:, : 2 * n] ** 2).sum(axis=1))
    z = pts[:, 2 * n :]
    if m == 3 and not force_product:
        return _qt_radial(t, vsq, z, n, tol)
    return _qt_product(t, vsq, z, n, m, tol)


def _qt_radial(t, vsq, z, n, tol):
    s = np.ascontiguousarray(np.sqrt((z**2).sum(axis=1)))
    s_neg = max(0.0, -float(np.min(vsq.real)))
    kappa = float(np.max(np.abs(s.imag))) + 0.25 * s_neg
    osc = float(np.max(np.abs(s.real))) + 0.25 * float(np.max(np.abs(vsq))) + kappa
    cut = _lambda_cutoff(t, n, kappa, s_neg / (4.0 * t) + math.log(1e4), tol)
    nodes = 56 + int(math.ceil(0.8 * cut * osc))
    c = mass_constant(n, 3) * 4.0 * np.pi

    def run(cut_, nodes_):
        r, w = gauss_legendre(nodes_, 0.0, cut_)
        pref, rate = lambda_profile(t, r, n)
        wq = c * w * r * r * np.exp(-t * r * r) * pref
        return _kernels.qt_radial_sum(vsq, s, r, wq, rate)

    coarse = run(cut, nodes)
    fine = run(1.12 * cut, int(math.ceil(1.7 * nodes)))
    return _check_refined(coarse, fine, tol, "the radial H-type kernel")


def _qt_product(t, vsq, z, n, m, tol):
    z = np.ascontiguousarray(z)
    zmax = float(np.max(np.abs(z)))
    vmax = float(np.max(np.abs(vsq)))
    nodes = 24 + int(math.ceil(0.75 * zmax * zmax / t + 0.15 * vmax / t))
    if nodes > 220:
        raise QuadratureError(
            "product rule for the H-type kernel needs too many nodes; "
            "reduce |z| or use the radial route"
        )
    c = mass_constant(n, m)

    def run(nodes_):
        grid, w = tensor_rule([gauss_hermite(nodes_, rate=t)] * m)
        rad = np.sqrt((grid**2).sum(axis=1))
        pref, rate = lambda_profile(t, rad, n)
        wq = c * w * np.exp(-t * rad * rad) * pref
        return _kernels.htype_product_sum(vsq, z, -grid, wq, rate)

    coarse = run(nodes)
    fine = run(int(math.ceil(1.4 * nodes)))
    return _check_refined(coarse, fine, tol, "the product H-type kernel")


def kernel_mass(t, n, *, tol=1e-8):
    """Total integral of the kernel over R^{2n+1} by radial quadrature.

    Uses only pointwise kernel evaluations (radius times center axis), so
    it is an independent check of the normalizing constant.
    """
    # Gaussian regime e^{-r^2/(4t)} in radius; exponential tail in the
    # center coordinate once past the first sinh pole of the integrand.
    rmax = 2.0 * math.sqrt(t * math.log(1.0 / tol)) + 2.0
    lmax = 1.15 * max(
        2.0 * math.sqrt(t * math.log(1.0 / tol)),
        t * math.log(1.0 / tol) / math.pi + 1.0,
    )
    surface = 2.0 * np.pi**n / math.factorial(n - 1)

    def run(order):
        r, wr = gauss_legendre(order, 0.0, rmax)
        xi, wxi = gauss_legendre(int(math.ceil(10 * lmax / min(t, 1.0))), -lmax, lmax)
        pts = np.zeros((len(r) * len(xi), 2 * n + 1))
        pts[:, 0] = np.repeat(r, len(xi))
        pts[:, 2 * n] = np.tile(xi, len(r))
        vals = eval_kt(t, pts, tol=tol * 1e-2).reshape(len(r), len(xi))
        inner = vals @ wxi
        return surface * float(np.real((wr * r ** (2 * n - 1)) @ inner))

    coarse = run(60)
    fine = run(90)
    if abs(fine - coarse) > tol * max(abs(fine), 1e-30):
        raise QuadratureError(
            "mass quadrature did not stabilize", coarse=coarse, fine=fine
        )
    return fine


# ---------------------------------------------------------------------------
# the smoothing operator on test functions over R^{2n+1}

class HeatFlow:
    """Values of ``f * k_t`` for a test function f on R^{2n+1}.

    Group convolution splits over central frequency; at each frequency
    node the twisted convolution with the Gaussian slice is a product of
    one-dimensional Gaussian moment integrals, computed in closed form.
    Only the frequency axis is quadratured, with a refinement check per
    evaluation batch.
    """

    def __init__(self, f, t, *, tol=1e-9):
        if f.dim % 2 == 0 or f.dim < 3:
            raise DimensionMismatchError("heat flow needs a function on R^{2n+1}")
        self.f = f
        self.n = (f.dim - 1) // 2
        self.t = float(t)
        if self.t <= 0:
            raise ValueError("diffusion time must be positive")
        self.tol = float(tol)
        # frequency side of the center axis; stays inside the family
        self.fh = f.fourier_angular(axes=[f.dim - 1])

    def evaluate(self, points):
        n = self.n
        pts, ssq, xi = _split_heat_points(points, n)
        s_neg, kappa, osc = _point_envelope(ssq, xi)
        cut = _lambda_cutoff(self.t, n, kappa, s_neg / (4.0 * self.t), self.tol)
        nodes = 48 + int(math.ceil(0.9 * cut * osc))
        coarse = self._run(pts, cut, nodes)
        fine = self._run(pts, 1.12 * cut, int(math.ceil(1.6 * nodes)))
        return _check_refined(coarse, fine, self.tol, "the heat transform")

    __call__ = evaluate

    def _run(self, pts, cut, nodes):
        n, t = self.n, self.t
        lam, w = gauss_legendre(nodes, -cut, cut)
        pref, rate = lambda_profile(t, lam, n)
        cn = mass_constant(n, 1)
        x = pts[:, :n]
        u = pts[:, n : 2 * n]
        xi = pts[:, 2 * n]
        zaxis = 2 * n
        out = np.zeros(len(pts), dtype=complex)
        for q in range(len(lam)):
            lq = float(lam[q])
            rho = float(rate[q])
            kfac = cn * w[q] * pref[q] * math.exp(-t * lq * lq)
            acc = np.zeros(len(pts), dtype=complex)
            for coef, polys, quad, lin in self.fh.terms:
                zval = coef * _peval(polys[zaxis], lq)
                zval = zval * np.exp(-quad[zaxis] * lq * lq + lin[zaxis] * lq)
                fac = np.full(len(pts), zval, dtype=complex)
                for d in range(2 * n):
                    y = pts[:, d]
                    beta = (
                        -0.5j * lq * u[:, d] if d < n else 0.5j * lq * x[:, d - n]
                    )
                    a = quad[d] + rho
                    b = lin[d] + 2.0 * rho * y - beta
                    fac = fac * np.exp(-rho * y * y + beta * y)
                    fac = fac * gauss_poly_integral(a, b, polys[d])
                acc += fac
            out += kfac * np.exp(1j * lq * xi) * acc
        return out


def heat_transform(f, t, *, tol=1e-9):
    """Smoothing operator ``f -> f * k_t`` on test functions; see HeatFlow."""
    return HeatFlow(f, t, tol=tol)


# ---------------------------------------------------------------------------
# the smoothing operator on sector functions

def sector_heat_transform(F, t):
    """Apply ``F -> F * k_t`` to a lattice-periodic sector function, exactly.

    On the sector with twist index j the operator acts on the generating
    function by the conjugated oscillator semigroup

        f -> e^{-t lam^2} T_{u0} e^{-t H(|lam|)} T_{-u0} f,
        u0 = l_1 j / (2 k),  H(mu) = -d^2/dv^2 + mu^2 v^2,

    with T_s the translation f(. + s).  The result stays in the symbolic
    family, so no quadrature is involved.
    """
    if not isinstance(F, NilFunction):
        raise DimensionMismatchError("sector transform expects a sector function")
    t = float(t)
    if t <= 0:
        raise ValueError("diffusion time must be positive")
    lam = F.lam
    mu = abs(lam)
    damp = math.exp(-t * lam * lam)
    l1 = F.chain.values[0]
    parts = []
    for j, f in F.parts:
        u0 = np.array([l1 * ji / (2.0 * F.k) for ji in j])
        g = f.translate(-u0).hermite_semigroup(t, mu).translate(u0) * damp
        parts.append((j, g))
    return NilFunction(F.k, F.chain, parts)


def sector_heat_quadrature(F, t, points, *, nodes=None, tol=1e-7):
    """Quadrature route for ``F * k_t`` at ``points``, shape (P, 2n+1).

    Expands the convolution against the fixed-frequency slice:

        (F * k_t)(x, u, xi) = e^{i lam xi} INT F(x - x', u - u', 0)
            e^{i lam (x.u' - x'.u)/2} k_t^lam(x', u') dx' du',

    evaluated with a Gauss-Hermite product rule matched to the slice's
    Gaussian rate, plus a refinement check.  This is deliberately
    independent of :func:`sector_heat_transform`.
    """
    n = F.chain.n
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    if pts.shape[1] != 2 * n + 1:
        raise DimensionMismatchError("points must have 2n+1 columns")
    lam = F.lam
    _, rate = lambda_profile(t, lam, n)
    rate = float(rate)
    if nodes is None:
        # the periodization oscillates at frequencies ~ lam across the
        # Gauss-Hermite span, so the rule grows with the sector frequency
        nodes = 36 + int(math.ceil(4.0 * math.sqrt(abs(lam))))

    def run(order):
        grid, w = tensor_rule([gauss_hermite(order, rate=rate)] * (2 * n))
        kt = eval_kt_lambda(t, lam, grid)
        vals = np.empty(len(pts), dtype=complex)
        for p, row in enumerate(pts):
            shifted = np.zeros((len(grid), 2 * n + 1), dtype=complex)
            shifted[:, : 2 * n] = row[: 2 * n] - grid
            phase = np.exp(
                0.5j
                * lam
                * (
                    grid[:, n:] @ row[:n]
                    - grid[:, :n] @ row[n : 2 * n]
                )
            )
            vals[p] = np.sum(w * kt * phase * F.evaluate(shifted))
        return vals * np.exp(1j * lam * pts[:, 2 * n])

    # the transform contracts, so stability is judged against the input's
    # own amplitude, not against the (possibly tiny) output values
    floor = math.sqrt(max(F.norm_sq(), 0.0))
    coarse = run(nodes)
    fine = run(int(math.ceil(1.4 * nodes)))
    return _check_refined(coarse, fine, tol, "the sector heat transform", floor=floor)


# ---------------------------------------------------------------------------
# finite-difference diagnostics

def _second_diff(plus, minus, base, h):
    return (plus + minus - 2.0 * base) / (h * h)


def _mixed_diff(pp, pm, mp, mm, h):
    return (pp - pm - mp + mm) / (4.0 * h * h)


def heat_residual(fun, t, points, *, h_time=1e-4, h_space=1e-3):
    """Residual of ``d/dt F = (sum_i X_i^2 + U_i^2 + T^2) F`` at ``points``.

    ``fun(t, points)`` must evaluate the flow at arbitrary points; the
    left-invariant fields are ``X_i = d/dx_i + (u_i/2) d/dxi``,
    ``U_i = d/du_i - (x_i/2) d/dxi`` and ``T = d/dxi``.  All derivatives
    are central finite differences, so the returned residual carries an
    O(h^2) discretization floor.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    if pts.shape[1] % 2 == 0 or pts.shape[1] < 3:
        raise DimensionMismatchError("points need an odd number >= 3 of columns")
    n = (pts.shape[1] - 1) // 2
    P = len(pts)
    h = h_space
    zc = 2 * n

    batch = [pts]
    for i in range(n):
        for axis in (i, n + i):
            for s in (h, -h):
                q = pts.copy()
                q[:, axis] += s
                batch.append(q)
            for sa in (h, -h):
                for sz in (h, -h):
                    q = pts.copy()
                    q[:, axis] += sa
                    q[:, zc] += sz
                    batch.append(q)
    for s in (h, -h):
        q = pts.copy()
        q[:, zc] += s
        batch.append(q)

    vals = np.asarray(fun(t, np.concatenate(batch, axis=0))).reshape(-1, P)
    base = vals[0]
    f_zz = _second_diff(vals[-2], vals[-1], base, h)
    x = pts[:, :n]
    u = pts[:, n : 2 * n]
    lap = (1.0 + 0.25 * ((x * x).sum(axis=1) + (u * u).sum(axis=1))) * f_zz
    row = 1
    for i in range(n):
        for axis_is_x in (True, False):
            d2 = _second_diff(vals[row], vals[row + 1], base, h)
            mix = _mixed_diff(vals[row + 2], vals[row + 3], vals[row + 4], vals[row + 5], h)
            if axis_is_x:
                lap = lap + d2 + u[:, i] * mix
            else:
                lap = lap + d2 - x[:, i] * mix
            row += 6

    dt = (
        np.asarray(fun(t + h_time, pts)) - np.asarray(fun(t - h_time, pts))
    ) / (2.0 * h_time)
    return dt - lap


def cauchy_riemann_residual(fun, points, axis, *, h=1e-4):
    """``d/d(conj z)`` of ``fun`` along one coordinate, by central differences.

    Vanishing residual certifies holomorphy of ``fun`` in the complexified
    coordinate ``axis`` near the given points.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    shifts = []
    for s in (h, -h, 1j * h, -1j * h):
        q = pts.copy()
        q[:, axis] += s
        shifts.append(q)
    vals = np.asarray(fun(np.concatenate(shifts, axis=0))).reshape(4, len(pts))
    d_re = (vals[0] - vals[1]) / (2.0 * h)
    d_im = (vals[2] - vals[3]) / (2.0 * h)
    return 0.5 * (d_re + 1j * d_im)


# ---------------------------------------------------------------------------
# uniform front end

class KernelEvaluator:
    """Uniform pointwise interface over the three kernel families.

    ``kind`` selects the kernel: ``"hn"`` is the full kernel on R^{2n+1},
    ``"hn-lambda"`` the fixed-frequency slice on R^{2n} (requires ``lam``),
    and ``"htype"`` the m-center kernel on R^{2n+m}.
    """

    KINDS = ("hn", "hn-lambda", "htype")

    def __init__(self, kind, t, *, n=1, m=1, lam=None, tol=1e-10):
        if kind not in self.KINDS:
            raise ValueError(f"kind must be one of {self.KINDS}")
        if kind == "hn-lambda" and lam is None:
            raise ValueError("the fixed-frequency slice needs lam")
        self.kind = kind
        self.t = float(t)
        if self.t <= 0:
            raise ValueError("diffusion time must be positive")
        self.n = int(n)
        self.m = int(m)
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be positive")
        self.lam = None if lam is None else float(lam)
        self.tol = float(tol)

    @property
    def point_dim(self):
        if self.kind == "hn":
            return 2 * self.n + 1
        if self.kind == "hn-lambda":
            return 2 * self.n
        return 2 * self.n + self.m

    def __call__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        if pts.shape[1] != self.point_dim:
            raise DimensionMismatchError(
                f"{self.kind} kernel expects {self.point_dim} columns"
            )
        if self.kind == "hn":
            return eval_kt(self.t, pts, tol=self.tol)
        if self.kind == "hn-lambda":
            return eval_kt_lambda(self.t, self.lam, pts)
        return eval_qt(self.t, pts, self.n, self.m, tol=self.tol)
