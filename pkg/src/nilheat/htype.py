"""Step-two groups with a multidimensional center and their reduction
to the one-dimensional-center layer.

A structure is a pair of dimensions ``(2n, m)`` together with ``m`` real
``2n x 2n`` matrices ``J_i``.  The bracket is defined through the pairing

    ([v, v'])_i = (J_i v, v'),        J_omega = sum_i omega_i J_i,

and the group law on points ``(v, z)`` is

    (v, z)(v', z') = (v + v', z + z' + [v, v'] / 2).

The admissibility axioms (skewness, ``J_omega^2 = -I`` for unit
``omega``, and the bracket-with-fixed-``v`` map being a scaled isometry
onto the center) are never assumed: :func:`validate_htype` measures them
and reports each residual separately.

For every unit direction ``omega`` the quotient by the hyperplane of
central directions orthogonal to ``omega`` is a group with
one-dimensional center.  :func:`sigma_omega` builds the deterministic
orthogonal frame aligning ``J_omega`` with the standard symplectic
matrix, and :func:`alpha_omega_apply` is the induced epimorphism onto
the polarized group of :mod:`.hgroup`.  :func:`radon` integrates a test
function over the central fibers orthogonal to ``omega`` (closed form
inside the symbolic Gaussian family), :func:`modified_radon` applies the
extra central-frequency multiplier ``|lam|^{(m-1)/2}`` that makes the
direction integral of squared norms match the squared norm of the input
(:func:`radon_plancherel`), and :func:`pi_lambda_omega_matrix` returns
truncated representation matrices of the reduced function.

:func:`thm34_integral` evaluates the weighted square integral of
analytically-continued representation matrices of a heat-regularized
function; its value is a fixed multiple of the squared norm of the
input, and the test suite asserts exactly that constancy.

:func:`project_lattice` pushes a rational lattice through the reduction
map and hands the image to the exact classification machinery of
:mod:`.lattice`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DegenerateCentralCharacterError,
    DimensionMismatchError,
    ExactArithmeticError,
    NilheatError,
    NotLatticeError,
    QuadratureError,
)
from .funcs import GaussHermiteSum, _peval, gauss_poly_integral
from .hgroup import GroupPoint, _graded_indices, _mc1
from .heat import lambda_profile
from .lattice import beta as lattice_beta, normal_form
from .quadrature import (
    gauss_hermite,
    gauss_legendre,
    lebedev,
    lebedev_next,
    tensor_rule,
)

__all__ = [
    "HTypePoint",
    "HTypeStructure",
    "standard_j",
    "make_heisenberg",
    "make_quaternionic",
    "quaternionic_lattice",
    "HTypeReport",
    "validate_htype",
    "sigma_omega",
    "alpha_omega_apply",
    "radon",
    "radon_quadrature",
    "group_convolution_quadrature",
    "central_bracket",
    "CentralMultiplier",
    "modified_radon",
    "radon_norm_sq",
    "radon_plancherel",
    "pi_lambda_omega_matrix",
    "Thm34Result",
    "thm34_integral",
    "LatticeProjection",
    "project_lattice",
    "structure_to_json",
    "structure_from_json",
]


# ---------------------------------------------------------------------------
# points and structures


@dataclass(frozen=True)
class HTypePoint:
    """A group element (v, z); coordinate dtype is the caller's choice."""

    v: tuple
    z: tuple

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(self.v))
        object.__setattr__(self, "z", tuple(self.z))

    @classmethod
    def identity(cls, vdim, cdim):
        return cls((0,) * vdim, (0,) * cdim)

    def coords(self):
        return self.v + self.z


def _unit_direction(omega, m):
    w = np.asarray(omega, dtype=float).reshape(-1)
    if w.shape != (m,):
        raise DimensionMismatchError(f"direction must have {m} components")
    norm = float(np.linalg.norm(w))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"direction must be a unit vector, |omega| = {norm!r}")
    return w


@dataclass(frozen=True)
class HTypeStructure:
    """Dimensions (2n, m) plus the m pairing matrices J_i.

    The bracket, the direction maps J_omega and the group law are all
    derived from the stored matrices; nothing here assumes the
    admissibility axioms (see :func:`validate_htype`).
    """

    n: int
    m: int
    J: tuple

    def __post_init__(self):
        n = int(self.n)
        m = int(self.m)
        if n < 1 or m < 1:
            raise DimensionMismatchError("need n >= 1 and m >= 1")
        mats = []
        for Ji in self.J:
            A = np.array(Ji, dtype=float)
            if A.shape != (2 * n, 2 * n):
                raise DimensionMismatchError(
                    f"each pairing matrix must be {2 * n}x{2 * n}"
                )
            A.setflags(write=False)
            mats.append(A)
        if len(mats) != m:
            raise DimensionMismatchError(f"need exactly m = {m} pairing matrices")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "J", tuple(mats))

    @property
    def vdim(self):
        return 2 * self.n

    def j_omega(self, omega):
        """The direction map J_omega = sum_i omega_i J_i (any real omega)."""
        w = np.asarray(omega, dtype=float).reshape(-1)
        if w.shape != (self.m,):
            raise DimensionMismatchError(f"direction must have {self.m} components")
        out = np.zeros((self.vdim, self.vdim))
        for wi, Ji in zip(w, self.J):
            out += wi * Ji
        return out

    def bracket(self, v, vp):
        """Center-valued bracket, ([v, v'])_i = (J_i v, v')."""
        v = np.asarray(v, dtype=float).reshape(-1)
        vp = np.asarray(vp, dtype=float).reshape(-1)
        if v.shape != (self.vdim,) or vp.shape != (self.vdim,):
            raise DimensionMismatchError("bracket arguments must be 2n-vectors")
        return np.array([float((Ji @ v) @ vp) for Ji in self.J])

    def bracket_rows(self, V, w):
        """Brackets [V_r, w] for a batch V of shape (P, 2n); returns (P, m)."""
        V = np.asarray(V)
        w = np.asarray(w)
        cols = [V @ (Ji.T @ w) for Ji in self.J]
        return np.stack(cols, axis=-1)

    def hermitian_inner(self, omega, v, w):
        """The direction-dependent Hermitian pairing (v, w) + i (J_omega v, w)."""
        v = np.asarray(v, dtype=float).reshape(-1)
        w = np.asarray(w, dtype=float).reshape(-1)
        Jw = self.j_omega(omega)
        return complex(v @ w) + 1j * float((Jw @ v) @ w)

    def _integer_j(self):
        """The pairing matrices as nested int tuples, or None if non-integer."""
        out = []
        for Ji in self.J:
            R = np.rint(Ji)
            if np.max(np.abs(Ji - R)) != 0.0:
                return None
            out.append(tuple(tuple(int(x) for x in row) for row in R))
        return tuple(out)

    def mul(self, p, q):
        """Group product; exact for int/Fraction coordinates and integer J."""
        if len(p.v) != self.vdim or len(q.v) != self.vdim:
            raise DimensionMismatchError("points do not match the v-dimension")
        if len(p.z) != self.m or len(q.z) != self.m:
            raise DimensionMismatchError("points do not match the center dimension")
        Jint = self._integer_j()
        rows = Jint if Jint is not None else self.J
        zc = []
        for i in range(self.m):
            Ji = rows[i]
            term = sum(
                sum(Ji[s][r] * p.v[r] for r in range(self.vdim)) * q.v[s]
                for s in range(self.vdim)
            )
            if isinstance(term, int):
                half = Fraction(term, 2)
            else:
                half = term / 2
            zc.append(p.z[i] + q.z[i] + half)
        return HTypePoint(
            tuple(a + b for a, b in zip(p.v, q.v)),
            tuple(zc),
        )

    def inv(self, p):
        return HTypePoint(tuple(-a for a in p.v), tuple(-a for a in p.z))

    def to_json(self):
        return json.dumps(
            {
                "n": self.n,
                "m": self.m,
                "J": [[[float(x) for x in row] for row in Ji] for Ji in self.J],
            }
        )


def central_bracket(structure, V, w):
    """Convenience alias for batched brackets (used by convolution rules)."""
    return structure.bracket_rows(V, w)


def standard_j(n):
    """The standard symplectic matrix mapping (x, u) to (u, -x)."""
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


def make_heisenberg(n=1):
    """The one-dimensional-center structure with the standard pairing."""
    return HTypeStructure(n=n, m=1, J=(standard_j(n),))


def make_quaternionic():
    """The 2n = 4, m = 3 structure with J_i = left multiplication by the
    imaginary quaternion units in the basis (1, i, j, k)."""
    Li = [
        [0, -1, 0, 0],
        [1, 0, 0, 0],
        [0, 0, 0, -1],
        [0, 0, 1, 0],
    ]
    Lj = [
        [0, 0, -1, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 0],
        [0, -1, 0, 0],
    ]
    Lk = [
        [0, 0, 0, -1],
        [0, 0, -1, 0],
        [0, 1, 0, 0],
        [1, 0, 0, 0],
    ]
    return HTypeStructure(n=2, m=3, J=(Li, Lj, Lk))


def quaternionic_lattice():
    """Generators of the integer lattice with half-integer center.

    Returns the four unit v-generators and the three central generators
    with entry 1/2, all with exact coordinates.
    """
    gens = []
    for i in range(4):
        v = tuple(1 if d == i else 0 for d in range(4))
        gens.append(HTypePoint(v, (0, 0, 0)))
    for j in range(3):
        z = tuple(Fraction(1, 2) if d == j else Fraction(0) for d in range(3))
        gens.append(HTypePoint((0, 0, 0, 0), z))
    return tuple(gens)


# ---------------------------------------------------------------------------
# axiom measurement


@dataclass(frozen=True)
class HTypeReport:
    """Per-axiom residuals from :func:`validate_htype`.

    All residuals are max-norm deviations over the random probe set;
    ``passed`` is True when every one is below ``tol``.  ``failures``
    names the measured quantities exceeding the tolerance.
    """

    skewness: float
    pairing: float
    complex_structure: float
    orthogonality: float
    ad_isometry: float
    tol: float
    passed: bool
    failures: tuple

    def as_dict(self):
        return {
            "skewness": self.skewness,
            "pairing": self.pairing,
            "complex_structure": self.complex_structure,
            "orthogonality": self.orthogonality,
            "ad_isometry": self.ad_isometry,
            "tol": self.tol,
            "passed": self.passed,
            "failures": list(self.failures),
        }


def validate_htype(structure, *, probes=20, seed=0, tol=1e-10):
    """Measure the admissibility axioms on random probes.

    Checks, each reported as a separate residual: skewness of every
    ``J_i``; the defining pairing ``(J_omega v, v') = (omega, [v, v'])``;
    ``J_omega^2 = -I`` and orthogonality of ``J_omega`` for random unit
    directions; and the scaled-isometry property of ``w -> [v, w]``
    (its nonzero singular values must all equal ``|v|``).
    """
    rng = np.random.default_rng(seed)
    st = structure
    dim = st.vdim

    skew = max(float(np.max(np.abs(Ji + Ji.T))) for Ji in st.J)

    pair = 0.0
    comp = 0.0
    orth = 0.0
    iso = 0.0
    eye = np.eye(dim)
    for _ in range(int(probes)):
        w = rng.standard_normal(st.m)
        w /= np.linalg.norm(w)
        Jw = st.j_omega(w)
        comp = max(comp, float(np.max(np.abs(Jw @ Jw + eye))))
        orth = max(orth, float(np.max(np.abs(Jw.T @ Jw - eye))))
        v = rng.standard_normal(dim)
        vp = rng.standard_normal(dim)
        lhs = float((Jw @ v) @ vp)
        rhs = float(w @ st.bracket(v, vp))
        pair = max(pair, abs(lhs - rhs))
        ad = np.stack([Ji @ v for Ji in st.J])  # rows (J_i v)^T map w -> [v,w]
        sv = np.linalg.svd(ad, compute_uv=False)
        r = float(np.linalg.norm(v))
        iso = max(iso, float(np.max(np.abs(sv[: st.m] - r))) if st.m <= dim else np.inf)

    names = ("skewness", "pairing", "complex_structure", "orthogonality", "ad_isometry")
    vals = (skew, pair, comp, orth, iso)
    failures = tuple(nm for nm, vv in zip(names, vals) if not (vv < tol))
    return HTypeReport(
        skewness=skew,
        pairing=pair,
        complex_structure=comp,
        orthogonality=orth,
        ad_isometry=iso,
        tol=float(tol),
        passed=not failures,
        failures=failures,
    )


# ---------------------------------------------------------------------------
# direction reduction: sigma and alpha


def sigma_omega(structure, omega):
    """Deterministic orthogonal frame with sigma J sigma^T = J_omega.

    Builds the adapted chain: walk the standard basis in order, Gram-
    Schmidt each candidate against the vectors already chosen, and pair
    every accepted unit vector p with J_omega p.  The returned matrix
    has the paired vectors as its u-block columns and their J_omega
    images as its x-block columns, which makes the conjugation identity
    hold with the standard symplectic matrix of :func:`standard_j`.
    """
    st = structure
    w = _unit_direction(omega, st.m)
    Jw = st.j_omega(w)
    dim = st.vdim
    n = st.n
    built = []
    ps = []
    qs = []
    for e in range(dim):
        if len(ps) == n:
            break
        cand = np.zeros(dim)
        cand[e] = 1.0
        for b in built:
            cand -= (b @ cand) * b
        norm = float(np.linalg.norm(cand))
        if norm <= 1e-8:
            continue
        p = cand / norm
        q = Jw @ p
        ps.append(p)
        qs.append(q)
        built.extend([p, q])
    if len(ps) != n:
        raise NilheatError("adapted-basis completion failed for this direction")
    sigma = np.empty((dim, dim))
    for i in range(n):
        sigma[:, i] = qs[i]
        sigma[:, n + i] = ps[i]
    return sigma


def alpha_omega_apply(structure, omega, p):
    """Reduce a point along the unit direction omega.

    Returns the polarized-group element with horizontal part
    ``sigma_omega^T v`` (split into x and u blocks) and central part
    ``z . omega``.  Points with central part orthogonal to omega map to
    the identity fiber.
    """
    st = structure
    w = _unit_direction(omega, st.m)
    sigma = sigma_omega(st, w)
    v = np.asarray(p.v, dtype=float)
    z = np.asarray(p.z, dtype=float)
    if v.shape != (st.vdim,) or z.shape != (st.m,):
        raise DimensionMismatchError("point does not match the structure")
    a = sigma.T @ v
    return GroupPoint(tuple(a[: st.n]), tuple(a[st.n :]), float(z @ w))


# ---------------------------------------------------------------------------
# the slice transform (fiber integrals over central hyperplanes)


def _complement_basis(w):
    """Deterministic orthonormal basis of the hyperplane orthogonal to w."""
    m = w.shape[0]
    built = [w / np.linalg.norm(w)]
    for e in range(m):
        if len(built) == m:
            break
        cand = np.zeros(m)
        cand[e] = 1.0
        for b in built:
            cand -= (b @ cand) * b
        norm = float(np.linalg.norm(cand))
        if norm <= 1e-8:
            continue
        built.append(cand / norm)
    if len(built) != m:
        raise NilheatError("complement-basis completion failed")
    return np.stack(built[1:], axis=1) if m > 1 else np.zeros((1, 0))


def _split_term_axes(term, vdim, m):
    coef, polys, quad, lin = term
    zpolys = polys[vdim:]
    for p in zpolys:
        if len(p) > 1:
            raise ValueError(
                "slice transform needs constant polynomial factors on the "
                "central axes"
            )
        coef *= p[0]
    zq = np.array(quad[vdim:], dtype=complex)
    zl = np.array(lin[vdim:], dtype=complex)
    if np.max(np.abs(zq.imag)) > 0:
        raise ValueError("slice transform needs real central Gaussian widths")
    return coef, polys[:vdim], quad[:vdim], lin[:vdim], zq.real, zl


def radon(structure, f, omega):
    """Fiber integral over central hyperplanes orthogonal to omega.

    ``f`` is a symbolic test function on 2n + m axes ordered (v, z); the
    result lives on 2n + 1 axes ordered (v, s) with s the coordinate
    along omega.  The integral is exact for every family member whose
    central factors are Gaussians with real widths, possibly modulated;
    polynomial central factors are rejected.
    """
    st = structure
    if f.dim != st.vdim + st.m:
        raise DimensionMismatchError("function does not match the structure")
    w = _unit_direction(omega, st.m)
    U = _complement_basis(w)
    out = []
    for term in f.terms:
        coef, vpolys, vquad, vlin, b, c = _split_term_axes(term, st.vdim, st.m)
        if st.m == 1:
            squad = complex(b[0])
            slin = complex(c[0] * w[0])
            scale = 1.0
        else:
            K = U.T @ (b[:, None] * U)  # (m-1) x (m-1), real SPD
            bt = U.T @ (b * w)
            ct = U.T @ c
            sol_b = np.linalg.solve(K, bt)
            sol_c = np.linalg.solve(K, ct)
            squad = complex(w @ (b * w) - bt @ sol_b)
            slin = complex(c @ w - bt @ sol_c)
            det = float(np.linalg.det(K))
            scale = math.pi ** ((st.m - 1) / 2.0) / math.sqrt(det) * np.exp(
                0.25 * (ct @ sol_c)
            )
        out.append(
            (
                coef * scale,
                tuple(vpolys) + ((1.0 + 0.0j,),),
                tuple(vquad) + (squad,),
                tuple(vlin) + (slin,),
            )
        )
    return GaussHermiteSum(st.vdim + 1, out)


def radon_quadrature(structure, fun, omega, points, *, rate, nodes=24, tol=1e-6):
    """Fiber integral of an arbitrary callable, by Gauss-Hermite rule.

    ``fun`` maps batches of shape (P, 2n + m) to values; ``points`` are
    rows (v, s) of shape (P, 2n + 1); ``rate`` is a lower bound on the
    Gaussian decay rate of ``fun`` along the integrated central
    directions.  A 1.5x refinement must agree within ``tol`` relative to
    the batch scale.
    """
    st = structure
    w = _unit_direction(omega, st.m)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != st.vdim + 1:
        raise DimensionMismatchError("points must have 2n + 1 columns (v, s)")
    if st.m == 1:
        full = np.concatenate([pts[:, :-1], pts[:, -1:] * w[0]], axis=1)
        return np.asarray(fun(full))
    U = _complement_basis(w)

    def run(q):
        xi, wts = tensor_rule([gauss_hermite(q, rate=rate)] * (st.m - 1))
        eta = xi @ U.T  # (Q, m)
        vals = np.zeros(pts.shape[0], dtype=complex)
        for r in range(pts.shape[0]):
            z = pts[r, -1] * w[None, :] + eta
            batch = np.concatenate(
                [np.repeat(pts[r : r + 1, :-1], len(wts), axis=0), z], axis=1
            )
            vals[r] = np.asarray(fun(batch)) @ wts
        return vals

    coarse = run(int(nodes))
    fine = run(int(math.ceil(1.5 * nodes)))
    scale = max(float(np.max(np.abs(fine))), 1e-300)
    if float(np.max(np.abs(fine - coarse))) > tol * scale:
        raise QuadratureError(
            "fiber quadrature did not stabilize under refinement",
            coarse=coarse,
            fine=fine,
        )
    return fine


# ---------------------------------------------------------------------------
# group convolution by quadrature (shared by the slice-identity checks)


def _conv1d_closed(q1, l1, q2, l2):
    """Closed line convolution of two 1-d Gaussian factors.

    Returns (coef, quad, lin) with
    int e^{-q1 z^2 + l1 z} e^{-q2 (w-z)^2 + l2 (w-z)} dz
        = coef * e^{-quad w^2 + lin w}.
    """
    s = q1 + q2
    coef = np.sqrt(np.pi / s) * np.exp((l1 - l2) ** 2 / (4.0 * s))
    return coef, q1 * q2 / s, (q2 * l1 + q1 * l2) / s


def group_convolution_quadrature(
    f, g, vdim, bracket_fn, points, *, nodes=12, tol=1e-6, refine=True
):
    """Group convolution of two family members at probe points.

    The group law is (v, z)(v', z') = (v + v', z + z' + B(v, v')/2) with
    ``bracket_fn(V, w)`` returning the batched bracket values B(V_r, w)
    of shape (P, cdim).  The central integrals are closed line
    convolutions; the remaining v-integral uses per-term-pair Gauss-
    Hermite rules.  Central polynomial factors are rejected.
    """
    if f.dim != g.dim:
        raise DimensionMismatchError("convolution needs equal dimensions")
    cdim = f.dim - vdim
    if cdim < 1:
        raise DimensionMismatchError("need at least one central axis")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != f.dim:
        raise DimensionMismatchError("points do not match the function arity")

    pairs = []
    for cf, pf, qf, lf in f.terms:
        for cg, pg, qg, lg in g.terms:
            base = cf * cg
            central = []
            for j in range(cdim):
                for p in (pf[vdim + j], pg[vdim + j]):
                    if len(p) > 1:
                        raise ValueError(
                            "convolution rule needs constant central factors"
                        )
                base *= pf[vdim + j][0] * pg[vdim + j][0]
                central.append(
                    _conv1d_closed(qf[vdim + j], lf[vdim + j], qg[vdim + j], lg[vdim + j])
                )
            for cc, _, _ in central:
                base *= cc
            pairs.append(
                (
                    base,
                    pf[:vdim],
                    np.array(qf[:vdim]),
                    np.array(lf[:vdim]),
                    pg[:vdim],
                    np.array(qg[:vdim]),
                    np.array(lg[:vdim]),
                    np.array([c[1] for c in central]),
                    np.array([c[2] for c in central]),
                )
            )

    def run(q):
        out = np.zeros(pts.shape[0], dtype=complex)
        for r in range(pts.shape[0]):
            wv = pts[r, :vdim]
            zeta = pts[r, vdim:]
            for base, pf, qf, lf, pg, qg, lg, cq, cl in pairs:
                rates = np.maximum(qf.real + qg.real, 1e-12)
                centers = (lf.real - lg.real + 2.0 * qg.real * wv) / (2.0 * rates)
                rules = [
                    gauss_hermite(q, rate=rates[d], center=centers[d])
                    for d in range(vdim)
                ]
                V, wts = tensor_rule(rules)
                y = zeta[None, :] - 0.5 * np.asarray(bracket_fn(V, wv))  # (Q, cdim)
                vals = np.full(V.shape[0], base, dtype=complex)
                for d in range(vdim):
                    vd = V[:, d]
                    wd = wv[d] - vd
                    vals = vals * _peval(pf[d], vd) * np.exp(
                        -qf[d] * vd * vd + lf[d] * vd
                    )
                    vals = vals * _peval(pg[d], wd) * np.exp(
                        -qg[d] * wd * wd + lg[d] * wd
                    )
                for j in range(cdim):
                    yj = y[:, j]
                    vals = vals * np.exp(-cq[j] * yj * yj + cl[j] * yj)
                out[r] += vals @ wts
        return out

    coarse = run(int(nodes))
    if not refine:
        return coarse
    fine = run(int(math.ceil(1.5 * nodes)))
    scale = max(float(np.max(np.abs(fine))), 1e-300)
    if float(np.max(np.abs(fine - coarse))) > tol * scale:
        raise QuadratureError(
            "convolution quadrature did not stabilize under refinement",
            coarse=coarse,
            fine=fine,
        )
    return fine


# ---------------------------------------------------------------------------
# central-frequency side: slices, multiplier, norms


def _central_slice(G, lam):
    """Integrate the last axis of G against e^{i lam s} (exact)."""
    freq = np.zeros(G.dim)
    freq[-1] = float(lam)
    return G.modulate(freq).integrate(axes=(G.dim - 1,))


@dataclass(frozen=True)
class CentralMultiplier:
    """The slice transform with the |lam|^{(m-1)/2} frequency multiplier.

    ``base`` is the plain fiber integral on axes (v, s); ``slice_at``
    returns the central-frequency slice with the multiplier applied.
    For m = 1 the multiplier is identically one and ``base`` is the
    transform itself.
    """

    base: GaussHermiteSum
    power: float
    n: int
    m: int

    def slice_at(self, lam):
        lam = float(lam)
        if lam == 0.0 and self.power > 0:
            return GaussHermiteSum.zero(self.base.dim - 1)
        return abs(lam) ** self.power * _central_slice(self.base, lam)


def modified_radon(structure, f, omega):
    """Fiber integral composed with the central multiplier |lam|^{(m-1)/2}.

    Realized on the frequency side: the returned object produces, for
    each nonzero frequency, the symbolic v-space function whose
    representation is the multiplier times that of the plain fiber
    integral.  For m = 1 it degenerates to the identity on slices.
    """
    st = structure
    base = radon(st, f, omega)
    return CentralMultiplier(
        base=base, power=(st.m - 1) / 2.0, n=st.n, m=st.m
    )


def _slice_cut(base, logtail):
    """Frequency cutoff beyond which every slice norm is below tolerance."""
    cut = 1.0
    for _, _, quad, lin in base.terms:
        b = quad[-1].real
        shift = abs(lin[-1].imag)
        cut = max(cut, shift + math.sqrt(2.0 * b * logtail))
    return cut


def radon_norm_sq(structure, f, omega, *, lam_nodes=64, tol=1e-8):
    """Squared L2 norm of the multiplier transform over the reduced group.

    Computed on the frequency side: (1/2pi) times the integral over
    frequencies of the squared slice norms (which carry the multiplier),
    by Gauss-Legendre rule with a refinement check.
    """
    st = structure
    R = modified_radon(st, f, omega)
    if not R.base.terms:
        return 0.0
    cut = _slice_cut(R.base, math.log(1.0 / tol) + 16.0)

    def run(q):
        lam, wts = gauss_legendre(q, -cut, cut)
        total = 0.0
        for L, wt in zip(lam, wts):
            if L == 0.0:
                continue
            total += wt * R.slice_at(L).norm_sq()
        return total / (2.0 * math.pi)

    coarse = run(int(lam_nodes))
    fine = run(int(math.ceil(1.5 * lam_nodes)))
    if abs(fine - coarse) > max(tol * abs(fine), 1e-300):
        raise QuadratureError(
            "frequency quadrature for the reduced norm did not stabilize",
            coarse=coarse,
            fine=fine,
        )
    return float(fine)


def radon_plancherel(structure, f, *, lebedev_order=26, lam_nodes=64):
    """Direction integral of reduced squared norms against the squared norm.

    The multiplier is calibrated so that the mean over directions times
    the sphere area equals ``2 (2 pi)^{m-1}`` times the squared norm of
    the input; the returned dict reports both sides, their relative
    error, and the drift between two sphere-grid refinements (m = 3).
    """
    st = structure
    norm = float(f.norm_sq())
    const = 2.0 * (2.0 * math.pi) ** (st.m - 1)
    if st.m == 1:
        vals = [radon_norm_sq(st, f, (s,), lam_nodes=lam_nodes) for s in (1.0, -1.0)]
        total = sum(vals) / const
        return {
            "total": total,
            "norm_sq": norm,
            "rel_error": abs(total - norm) / max(norm, 1e-300),
            "grid_drift": 0.0,
            "order": 2,
        }
    if st.m != 3:
        raise DimensionMismatchError("sphere rules are available for m = 1 and m = 3")

    def run(order):
        pts, wts = lebedev(order)
        acc = 0.0
        for w, wt in zip(pts, wts):
            acc += wt * radon_norm_sq(st, f, w, lam_nodes=lam_nodes)
        return 4.0 * math.pi * acc / const

    try:
        order_fine = lebedev_next(int(lebedev_order))
    except ValueError:
        order_fine = int(lebedev_order)
    coarse = run(int(lebedev_order))
    fine = run(order_fine) if order_fine != int(lebedev_order) else coarse
    return {
        "total": fine,
        "norm_sq": norm,
        "rel_error": abs(fine - norm) / max(norm, 1e-300),
        "grid_drift": abs(fine - coarse) / max(abs(fine), 1e-300),
        "order": order_fine,
    }


# ---------------------------------------------------------------------------
# representation matrices of reduced functions


def pi_lambda_omega_matrix(
    structure, lam, omega, f, size, *, nodes=None, rate=None, tol=1e-6
):
    """Truncated representation matrix of the reduced function.

    The central axis is integrated in closed form (frequency slice at
    ``lam``); the remaining 2n-dimensional integral against the matrix
    coefficients runs on a Gauss-Hermite tensor rule in the frame of
    ``sigma_omega``, with graded basis indices matching
    :func:`nilheat.hgroup.hermite_matrix` and a mandatory refinement
    check.
    """
    st = structure
    lam = float(lam)
    if lam == 0:
        raise DegenerateCentralCharacterError("central character degenerate")
    w = _unit_direction(omega, st.m)
    n = st.n
    G = radon(st, f, w)
    Gs = _central_slice(G, lam)
    sigma = sigma_omega(st, w)
    idx = _graded_indices(n, size)
    if nodes is None:
        nodes = 40 if n == 1 else 16
    if rate is None:
        decay = min(
            min(q.real for q in quad) for _, _, quad, _ in Gs.terms
        ) if Gs.terms else 1.0
        rate = 0.95 * (decay + 0.25 * abs(lam))

    def compute(q):
        pts, wts = tensor_rule([gauss_hermite(q, rate=rate)] * (2 * n))
        M = np.zeros((size, size), dtype=complex)
        for lo in range(0, len(wts), 300000):
            hi = min(lo + 300000, len(wts))
            p = pts[lo:hi]
            base = Gs.evaluate(p @ sigma.T) * wts[lo:hi]
            cache = {}
            for a in range(size):
                for b in range(size):
                    acc = base
                    for d in range(n):
                        key = (d, idx[a][d], idx[b][d])
                        if key not in cache:
                            cache[key] = _mc1(lam, key[1], key[2], p[:, d], p[:, n + d])
                        acc = acc * cache[key]
                    M[a, b] += acc.sum()
        return M

    coarse = compute(int(nodes))
    fine = compute(int(nodes * 1.5) + 1)
    err = float(np.max(np.abs(fine - coarse)))
    scale = max(1.0, float(np.max(np.abs(fine))))
    if err > tol * scale:
        raise QuadratureError(
            f"reduced-matrix quadrature not stable under refinement: {err:.3e}",
            coarse=coarse,
            fine=fine,
        )
    return fine


# ---------------------------------------------------------------------------
# the weighted square integral of analytically-continued matrices


@dataclass(frozen=True)
class Thm34Result:
    """Value of the weighted square integral with refinement metadata.

    ``value`` is the truncation-extrapolated fine-pass result; ``error``
    adds the quadrature drift between the two passes to the estimated
    residual of the basis-size extrapolation; ``converged`` says whether
    that combined bar met the tolerance within the evaluation budget.
    """

    value: float
    error: float
    converged: bool
    norm_sq: float

    @property
    def ratio(self):
        if self.norm_sq == 0.0:
            return 0.0
        return self.value / self.norm_sq

    def __float__(self):
        return self.value


def _axis_weyl_matrix(lam, size, poly_x, quad_x, lin_x, poly_u, quad_u, lin_u, nodes):
    """Per-axis matrix int g(x, u) <pi(x, u, 0) h_b, h_a> dx du by rule."""
    mu = abs(lam)
    rx = max(quad_x.real + 0.25 * mu, 1e-12)
    ru = max(quad_u.real + 0.25 * mu, 1e-12)
    cx = lin_x.real / (2.0 * rx)
    cu = lin_u.real / (2.0 * ru)
    gx, wx = gauss_hermite(nodes, rate=rx, center=cx)
    gu, wu = gauss_hermite(nodes, rate=ru, center=cu)
    X, Uu = np.meshgrid(gx, gu, indexing="ij")
    W2 = np.outer(wx, wu)
    g = (
        _peval(poly_x, X)
        * _peval(poly_u, Uu)
        * np.exp(-quad_x * X * X + lin_x * X - quad_u * Uu * Uu + lin_u * Uu)
        * W2
    )
    M = np.empty((size, size), dtype=complex)
    for a in range(size):
        for b in range(size):
            M[a, b] = np.sum(g * _mc1(lam, a, b, X, Uu))
    return M


def _imag_argument_grid(lam, t, size, nodes):
    """Rule and matrix-coefficient grids for the analytic continuation.

    Returns (weights, Bgrid) where Bgrid[p, a, b] holds the per-axis
    matrix coefficient at purely imaginary arguments (i y, i v) on the
    2-d rule, and weights already contain the per-axis Gaussian factor
    of the (y, v) measure.
    """
    mu = abs(lam)
    rho = float(lam / np.tanh(2.0 * t * lam)) if lam != 0 else 1.0 / (2.0 * t)
    rate = max(rho - 0.5 * mu, 0.25 * rho)
    gy, wy = gauss_hermite(nodes, rate=rate)
    gv, wv = gauss_hermite(nodes, rate=rate)
    Y, V = np.meshgrid(gy, gv, indexing="ij")
    wts = (np.outer(wy, wv) * np.exp(-rho * (Y * Y + V * V))).ravel()
    Yf = Y.ravel()
    Vf = V.ravel()
    B = np.empty((len(wts), size, size), dtype=complex)
    for a in range(size):
        for b in range(size):
            B[:, a, b] = _mc1(lam, a, b, 1j * Yf, 1j * Vf)
    return wts, B


def thm34_integral(
    structure,
    f,
    t,
    size=6,
    *,
    lam_nodes=48,
    grid_nodes=22,
    lebedev_order=26,
    tol=2e-2,
    budget=None,
):
    """Weighted square integral of continued matrices of the heat-smoothed f.

    For the heat-regularized input the representation matrices extend to
    purely imaginary arguments; their squared Hilbert-Schmidt norms are
    integrated against the Gaussian central weight, the doubled-time
    fixed-frequency kernel on the imaginary horizontal arguments, the
    frequency power ``|lam|^{n+m-1}``, and the sphere of directions.
    The result is a fixed multiple of the squared norm of ``f``; the
    suite asserts that constancy rather than any particular constant.

    The central-frequency Gaussian growth of the continued matrices
    cancels the square of the kernel's frequency damping exactly, so the
    two factors are dropped together before any exponential is formed.

    Per-term factorization over the n horizontal axes requires the input
    to be rotation-invariant in v (checked on probes); the center may be
    any anisotropic, possibly modulated Gaussian.

    Truncating the matrices at ``size`` biases the integral downward, so
    the fine pass evaluates the nested sizes ``size - 4, size - 2, size``
    (all sharing one set of grids) and extrapolates the geometric tail.
    ``error`` adds the extrapolation residual to the drift between the
    coarse and fine quadrature passes; ``budget`` caps the total
    frequency-node count across the passes, and a binding cap returns
    ``converged=False``.
    """
    st = structure
    if t <= 0:
        raise ValueError("diffusion time must be positive")
    if st.m not in (1, 3):
        raise DimensionMismatchError("sphere rules are available for m = 1 and m = 3")
    if f.dim != st.vdim + st.m:
        raise DimensionMismatchError("function does not match the structure")
    norm = float(f.norm_sq())
    if not f.terms:
        return Thm34Result(value=0.0, error=0.0, converged=True, norm_sq=norm)

    # rotation invariance in v (needed to factor the rotated integrand)
    rng = np.random.default_rng(7)
    wtest = rng.standard_normal(st.m)
    wtest /= np.linalg.norm(wtest)
    sig = sigma_omega(st, wtest)
    probes = rng.standard_normal((8, f.dim))
    rotated = probes.copy()
    rotated[:, : st.vdim] = probes[:, : st.vdim] @ sig.T
    ref = f.evaluate(probes)
    drift = float(np.max(np.abs(f.evaluate(rotated) - ref)))
    if drift > 1e-8 * max(float(np.max(np.abs(ref))), 1e-300):
        raise ValueError(
            "the square-integral rule needs a test function invariant under "
            "rotations of the v-coordinates"
        )

    n = st.n
    vdim = st.vdim
    terms = []
    zq_max = 1e-12
    zl_imax = 0.0
    for term in f.terms:
        coef, vpolys, vquad, vlin, zq, zl = _split_term_axes(term, vdim, st.m)
        terms.append((coef, vpolys, vquad, vlin, zq, zl))
        zq_max = max(zq_max, float(np.max(zq)))
        zl_imax = max(zl_imax, float(np.max(np.abs(zl.imag))))
    K = len(terms)

    logtail = math.log(1.0 / 1e-10)
    lam_cut = zl_imax + math.sqrt(2.0 * zq_max * (logtail + 8.0))

    if st.m == 1:
        sphere = [(np.array([1.0]), 0.5), (np.array([-1.0]), 0.5)]
        area = 2.0
        sphere_fine = sphere
    else:
        pts, wts = lebedev(int(lebedev_order))
        sphere = list(zip(pts, wts))
        try:
            ptsf, wtsf = lebedev(lebedev_next(int(lebedev_order)))
        except ValueError:
            ptsf, wtsf = pts, wts
        sphere_fine = list(zip(ptsf, wtsf))
        area = 4.0 * math.pi

    if not 4 <= size <= 8:
        raise ValueError("matrix size must be between 4 and 8")
    sizes = [s for s in (size - 4, size - 2, size) if s >= 2]
    smax = sizes[-1]

    def run(nlam, ngrid, sph):
        lam_g, lam_w = gauss_legendre(nlam, 0.0, lam_cut)
        totals = np.zeros(len(sizes))
        for L, wL in zip(lam_g, lam_w):
            mu = abs(L)
            # z-side scalars per term and direction, direction-averaged
            S = np.zeros((K, K), dtype=complex)
            for w, wt in sph:
                s_vec = np.empty(K, dtype=complex)
                for k, (coef, _, _, _, zq, zl) in enumerate(terms):
                    val = coef
                    for j in range(st.m):
                        val *= gauss_poly_integral(zq[j], zl[j] + 1j * L * w[j])
                    s_vec[k] = val
                S += wt * np.outer(s_vec, np.conjugate(s_vec))
            S *= area
            # heat damping along the oscillator ladder (frequency-square
            # factor already cancelled against the central growth)
            D = np.exp(-t * mu * (2.0 * np.arange(smax) + 1.0))
            wts_ax, B = _imag_argument_grid(L, t, smax, ngrid)
            # per-axis data matrices for every (term, axis), largest size
            cacheW = {}
            WD = {}
            for k, (_, vpolys, vquad, vlin, _, _) in enumerate(terms):
                for d in range(n):
                    key = (
                        vpolys[d],
                        complex(vquad[d]),
                        complex(vlin[d]),
                        vpolys[n + d],
                        complex(vquad[n + d]),
                        complex(vlin[n + d]),
                    )
                    if key not in cacheW:
                        cacheW[key] = _axis_weyl_matrix(
                            L,
                            smax,
                            np.asarray(vpolys[d], dtype=complex),
                            complex(vquad[d]),
                            complex(vlin[d]),
                            np.asarray(vpolys[n + d], dtype=complex),
                            complex(vquad[n + d]),
                            complex(vlin[n + d]),
                            ngrid + smax + 6,
                        )
                    WD[(k, d)] = cacheW[key] * D[None, :]
            pref, _ = lambda_profile(2.0 * t, L, n)
            front = (
                mu ** (n + st.m - 1)
                * (2.0 * math.pi * t) ** (st.m / 2.0)
                * (4.0 * math.pi) ** (-n)
                * float(pref)
            )
            for si, s in enumerate(sizes):
                E = {}
                for k in range(K):
                    for d in range(n):
                        E[(k, d)] = np.einsum(
                            "pab,bc->pac", B[:, :s, :s], WD[(k, d)][:s, :s]
                        )
                P = np.ones((n, K, K), dtype=complex)
                for d in range(n):
                    for k in range(K):
                        for kp in range(K):
                            if kp < k:
                                P[d, k, kp] = np.conjugate(P[d, kp, k])
                                continue
                            P[d, k, kp] = np.einsum(
                                "pac,pac,p->",
                                E[(k, d)],
                                np.conjugate(E[(kp, d)]),
                                wts_ax,
                            )
                prod = S.copy()
                for d in range(n):
                    prod = prod * P[d]
                totals[si] += wL * front * float(np.sum(prod).real)
        return totals

    nlam_c = int(lam_nodes)
    nlam_f = int(math.ceil(1.5 * nlam_c))
    capped = False
    if budget is not None and nlam_c + nlam_f > int(budget):
        capped = True
        nlam_c = max(4, int(budget) * 2 // 5)
        nlam_f = max(nlam_c + 1, int(budget) - nlam_c)
    coarse = run(nlam_c, int(grid_nodes), sphere)[-1]
    fine_vals = run(nlam_f, int(grid_nodes) + 6, sphere_fine)
    quad_drift = abs(float(fine_vals[-1]) - coarse)
    value = float(fine_vals[-1])
    # geometric extrapolation of the basis-size truncation
    err_t = 0.0
    if len(sizes) >= 3:
        v0, v1, v2 = (float(x) for x in fine_vals[-3:])
        d1, d2 = v1 - v0, v2 - v1
        if d1 != 0 and 0.0 < d2 / d1 < 0.95:
            r = d2 / d1
            corr = d2 * r / (1.0 - r)
            value = v2 + corr
            err_t = abs(corr) * r
        else:
            err_t = abs(d2)
    elif len(sizes) == 2:
        err_t = abs(float(fine_vals[-1]) - float(fine_vals[-2]))
    error = quad_drift + err_t
    converged = (not capped) and error <= tol * max(abs(value), 1e-300)
    return Thm34Result(
        value=float(value), error=float(error), converged=bool(converged), norm_sq=norm
    )


# ---------------------------------------------------------------------------
# lattice projection


@dataclass(frozen=True)
class LatticeProjection:
    """Images of lattice generators under the reduction, with validation.

    ``verified`` is True when the smallest positive central value exists
    and the projected v-parts have full rational rank; ``normal_form``
    carries the exact classification when a generating subset forms a
    basis of the projected horizontal module.
    """

    images: tuple
    beta: object
    rank: int
    normal_form: object
    verified: bool
    message: str


def _exact_fraction_matrix(A, limit=10**6):
    out = []
    for row in np.asarray(A, dtype=float):
        frow = []
        for x in row:
            fr = Fraction(float(x)).limit_denominator(limit)
            frow.append(fr)
        out.append(tuple(frow))
    return tuple(out)


def _fraction_matmul(A, B):
    rows = len(A)
    inner = len(B)
    cols = len(B[0])
    return tuple(
        tuple(sum(A[r][k] * B[k][c] for k in range(inner)) for c in range(cols))
        for r in range(rows)
    )


def _fraction_transpose(A):
    return tuple(tuple(A[r][c] for r in range(len(A))) for c in range(len(A[0])))


def _fraction_rank(rows):
    M = [list(r) for r in rows]
    if not M:
        return 0
    nrow, ncol = len(M), len(M[0])
    rank = 0
    for c in range(ncol):
        piv = None
        for r in range(rank, nrow):
            if M[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = Fraction(1, 1) / M[rank][c]
        M[rank] = [x * inv for x in M[rank]]
        for r in range(nrow):
            if r != rank and M[r][c] != 0:
                factor = M[r][c]
                M[r] = [a - factor * b for a, b in zip(M[r], M[rank])]
        rank += 1
        if rank == nrow:
            break
    return rank


def _solve_fraction(Acols, b):
    """Solve A x = b exactly for square A given by columns; None if singular."""
    ncol = len(Acols)
    M = [[Acols[c][r] for c in range(ncol)] + [b[r]] for r in range(ncol)]
    for c in range(ncol):
        piv = None
        for r in range(c, ncol):
            if M[r][c] != 0:
                piv = r
                break
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = Fraction(1, 1) / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(ncol):
            if r != c and M[r][c] != 0:
                factor = M[r][c]
                M[r] = [a - factor * b2 for a, b2 in zip(M[r], M[c])]
    return [M[r][ncol] for r in range(ncol)]


def _require_exact(value, what):
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise ExactArithmeticError(f"{what} must be ints or fractions for exact work")


def _exact_sigma(structure, omega_exact):
    """Adapted frame in exact rationals, or None when normalization leaves Q."""
    st = structure
    Jint = st._integer_j()
    if Jint is None:
        return None
    dim = st.vdim
    Jw = [
        [sum(omega_exact[i] * Jint[i][r][c] for i in range(st.m)) for c in range(dim)]
        for r in range(dim)
    ]
    built = []
    ps = []
    qs = []
    for e in range(dim):
        if len(ps) == st.n:
            break
        cand = [Fraction(1) if d == e else Fraction(0) for d in range(dim)]
        for b in built:
            dot = sum(x * y for x, y in zip(b, cand))
            cand = [x - dot * y for x, y in zip(cand, b)]
        norm2 = sum(x * x for x in cand)
        if norm2 == 0:
            continue
        num, den = norm2.numerator, norm2.denominator
        sn, sd = math.isqrt(num), math.isqrt(den)
        if sn * sn != num or sd * sd != den:
            return None
        inv = Fraction(sd, sn)
        p = [x * inv for x in cand]
        q = [sum(Jw[r][c] * p[c] for c in range(dim)) for r in range(dim)]
        ps.append(p)
        qs.append(q)
        built.extend([p, q])
    if len(ps) != st.n:
        return None
    sigma = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(st.n):
        for r in range(dim):
            sigma[r][i] = qs[i][r]
            sigma[r][st.n + i] = ps[i][r]
    return tuple(tuple(row) for row in sigma)


def _verify_exact_sigma(structure, sigma, omega_exact):
    st = structure
    dim = st.vdim
    Jint = st._integer_j()
    if Jint is None:
        return False
    J = [
        [Fraction(1) if (r < st.n and c == st.n + r) else
         Fraction(-1) if (r >= st.n and c == r - st.n) else Fraction(0)
         for c in range(dim)]
        for r in range(dim)
    ]
    Jw = [
        [sum(omega_exact[i] * Jint[i][r][c] for i in range(st.m)) for c in range(dim)]
        for r in range(dim)
    ]
    sT = _fraction_transpose(sigma)
    ident = _fraction_matmul(sT, sigma)
    for r in range(dim):
        for c in range(dim):
            if ident[r][c] != (1 if r == c else 0):
                return False
    lhs = _fraction_matmul(_fraction_matmul(sigma, J), sT)
    for r in range(dim):
        for c in range(dim):
            if lhs[r][c] != Jw[r][c]:
                return False
    return True


def project_lattice(structure, generators, omega):
    """Push rational lattice generators through the direction reduction.

    The frame is built in exact rational arithmetic when possible (it
    always is for the built-in axis directions), otherwise the floating
    frame is rationalized and re-verified exactly; if no exact frame is
    certified the images are returned unverified.  Validation computes
    the smallest positive central value of the image and the exact
    rational rank of the projected v-parts; when a generating subset of
    the v-parts is an exact basis of the projected module, its
    classification is attached.
    """
    st = structure
    omega_exact = tuple(_require_exact(c, "direction components") for c in omega)
    if sum(c * c for c in omega_exact) != 1:
        raise ValueError("direction must be an exact unit vector")
    gens = []
    for g in generators:
        v = tuple(_require_exact(c, "generator coordinates") for c in g.v)
        z = tuple(_require_exact(c, "generator coordinates") for c in g.z)
        if len(v) != st.vdim or len(z) != st.m:
            raise DimensionMismatchError("generator does not match the structure")
        gens.append((v, z))

    sigma = _exact_sigma(st, omega_exact)
    if sigma is not None and not _verify_exact_sigma(st, sigma, omega_exact):
        sigma = None
    if sigma is None:
        approx = sigma_omega(st, [float(c) for c in omega_exact])
        sigma = _exact_fraction_matrix(approx)
        if not _verify_exact_sigma(st, sigma, omega_exact):
            images = tuple(
                alpha_omega_apply(
                    st,
                    [float(c) for c in omega_exact],
                    HTypePoint(tuple(float(c) for c in v), tuple(float(c) for c in z)),
                )
                for v, z in gens
            )
            return LatticeProjection(
                images=images,
                beta=None,
                rank=0,
                normal_form=None,
                verified=False,
                message="image not verified discrete: no exact frame certified",
            )

    sT = _fraction_transpose(sigma)
    images = []
    vparts = []
    for v, z in gens:
        a = [sum(sT[r][c] * v[c] for c in range(st.vdim)) for r in range(st.vdim)]
        xi = sum(zz * ww for zz, ww in zip(z, omega_exact))
        images.append(GroupPoint(tuple(a[: st.n]), tuple(a[st.n :]), xi))
        vparts.append(tuple(a))
    images = tuple(images)

    try:
        bval = lattice_beta(images)
    except (NotLatticeError, DegenerateCentralCharacterError) as exc:
        return LatticeProjection(
            images=images,
            beta=None,
            rank=_fraction_rank([vp for vp in vparts if any(c != 0 for c in vp)]),
            normal_form=None,
            verified=False,
            message=f"image not verified discrete: {exc}",
        )

    nonzero = [vp for vp in vparts if any(c != 0 for c in vp)]
    rank = _fraction_rank(nonzero)
    verified = bval is not None and bval > 0 and rank == st.vdim

    nf = None
    message = "ok" if verified else "image not verified discrete"
    if verified:
        subset = []
        for vp in nonzero:
            if len(subset) == st.vdim:
                break
            if _fraction_rank(subset + [vp]) > len(subset):
                subset.append(vp)
        cols = [tuple(vp) for vp in subset]
        integral = True
        for vp in nonzero:
            sol = _solve_fraction(cols, list(vp))
            if sol is None or any(x.denominator != 1 for x in sol):
                integral = False
                break
        if integral:
            try:
                nf = normal_form(subset)
            except (NotLatticeError, ExactArithmeticError) as exc:
                nf = None
                message = f"classification unavailable: {exc}"
        else:
            message = (
                "projected generators exceed a basis; classification skipped"
            )
    return LatticeProjection(
        images=images,
        beta=bval,
        rank=rank,
        normal_form=nf,
        verified=verified,
        message=message,
    )


# ---------------------------------------------------------------------------
# serialization


def structure_to_json(structure):
    return structure.to_json()


def structure_from_json(text):
    """Parse and validate a structure; axiom failures raise ValueError."""
    data = json.loads(text)
    for key in ("n", "m", "J"):
        if key not in data:
            raise ValueError(f"missing field {key!r}")
    st = HTypeStructure(n=int(data["n"]), m=int(data["m"]), J=tuple(data["J"]))
    report = validate_htype(st)
    if not report.passed:
        raise ValueError(
            "structure axioms failed: " + ", ".join(report.failures)
        )
    return st
