"""Named verification suites over the package's numerical identities.

Each suite bundles the checks for one statement tag (``prop2.4``,
``thm3.4``, ...) or one module surface (``heat``, ``interfaces``), runs
them with deterministic seeding, and returns a :class:`SuiteReport`
that serializes losslessly to JSON.  A check is a residual against a
pinned tolerance; the tolerances are the ones the library's own
documentation and tests commit to, and a user-supplied tolerance can
only loosen them (a tighter bound than the method's validated accuracy
would manufacture failures, not precision).

The registry also carries an operation-coverage ledger: every public
operation of the package is claimed by at least one suite, and the
``all`` suite asserts that the union of claims equals the inventory, so
running it exercises the complete public surface.
"""

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from zlib import crc32

import numpy as np

from . import bergman as _bergman
from . import heat as _heat
from . import hgroup as _hgroup
from . import htype as _htype
from . import lattice as _lattice
from . import weilbrezin as _wb
from .errors import (
    DegenerateCentralCharacterError,
    DivergentNormError,
    NilheatError,
    SectorMismatchError,
)
from .funcs import GaussHermiteSum, gauss_poly_integral, gaussian, hermite_function
from .quadrature import gauss_hermite, gauss_legendre, tensor_rule

__all__ = [
    "CheckResult",
    "SuiteReport",
    "OPERATIONS",
    "available_suites",
    "suite_summary",
    "suite_operations",
    "run_suite",
    "covered_operations",
    "missing_operations",
]


# ---------------------------------------------------------------------------
# report types

@dataclass(frozen=True)
class CheckResult:
    """One named residual measured against its pinned tolerance."""

    name: str
    residual: float
    tolerance: float
    passed: bool
    runtime: float
    detail: str = ""


@dataclass(frozen=True)
class SuiteReport:
    """Outcome of one suite run; serializes losslessly to JSON."""

    suite: str
    summary: str
    seed: int
    params: dict
    ops: tuple
    checks: tuple
    runtime: float
    passed: bool

    def to_dict(self):
        d = asdict(self)
        d["ops"] = list(self.ops)
        d["checks"] = [asdict(c) for c in self.checks]
        return d

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        checks = tuple(CheckResult(**c) for c in d.pop("checks"))
        ops = tuple(d.pop("ops"))
        return cls(checks=checks, ops=ops, **d)

    def pretty(self):
        lines = [
            f"suite {self.suite}: {self.summary}",
            f"seed {self.seed}  params {self.params}  runtime {self.runtime:.2f}s",
            "-" * 72,
        ]
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            lines.append(
                f"[{tag}] {c.name:<44} {c.residual:>10.3e} <= {c.tolerance:.1e}"
                f"  ({c.runtime:.2f}s)"
            )
            if c.detail and not c.passed:
                lines.append(f"       {c.detail}")
        lines.append("-" * 72)
        lines.append("PASSED" if self.passed else "FAILED")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# operation inventory (public surface that `all` must exercise)

OPERATIONS = frozenset(
    {
        "hgroup.group_mul",
        "hgroup.schrodinger_apply",
        "hgroup.hermite_matrix",
        "lattice.make_gamma_l",
        "lattice.beta",
        "lattice.symplectic_gram",
        "lattice.normal_form",
        "lattice.ak_elements",
        "weilbrezin.weil_brezin",
        "weilbrezin.twist_j",
        "weilbrezin.project_sector",
        "weilbrezin.invert_sector",
        "weilbrezin.nu_j_apply",
        "weilbrezin.prop26_check",
        "heat.eval_kt",
        "heat.eval_kt_lambda",
        "heat.eval_qt",
        "heat.heat_transform",
        "bergman.bergman_norm_sq",
        "bergman.thm28_ratio",
        "htype.make_quaternionic",
        "htype.validate_htype",
        "htype.sigma_omega",
        "htype.alpha_omega_apply",
        "htype.radon",
        "htype.modified_radon",
        "htype.pi_lambda_omega_matrix",
        "htype.thm34_integral",
        "htype.project_lattice",
        "cli.cmd_eval",
        "cli.cmd_verify",
        "cli.cmd_normal_form",
    }
)


# ---------------------------------------------------------------------------
# execution context

class _Ctx:
    """Resolved parameters plus deterministic per-check randomness."""

    def __init__(self, k, chain, t, tol, seed):
        self.k = k
        self.chain = chain
        self.t = t
        self.tol = tol
        self.seed = seed

    def rng(self, tag):
        return np.random.default_rng(
            np.random.SeedSequence([self.seed & 0xFFFFFFFF, crc32(tag.encode())])
        )

    def cap(self, declared):
        """Effective tolerance: the user's bound can loosen, never tighten."""
        if self.tol is None:
            return float(declared)
        return max(float(declared), float(self.tol))


def _run_checks(checks, ctx, workers):
    def execute(item):
        name, fn = item
        start = time.perf_counter()
        try:
            residual, declared, detail = fn()
            tolerance = ctx.cap(declared)
            residual = float(residual)
            passed = math.isfinite(residual) and residual <= tolerance
        except Exception as exc:  # a crashed check is a failed check
            tolerance = 0.0
            residual = math.inf
            passed = False
            detail = f"{type(exc).__name__}: {exc}"
        return CheckResult(
            name=name,
            residual=residual,
            tolerance=tolerance,
            passed=passed,
            runtime=time.perf_counter() - start,
            detail=detail,
        )

    if workers and workers > 1 and len(checks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(execute, checks))
    return [execute(c) for c in checks]


def _maxdev(a, b, floor=1e-300):
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.max(np.abs(a - b)))


def _reldev(a, b):
    b = np.asarray(b)
    scale = float(np.max(np.abs(b)))
    return _maxdev(a, b) / max(scale, 1e-300)


# ---------------------------------------------------------------------------
# shared builders

def _test_family(n, lam, count=5):
    """Deterministic well-conditioned test functions on R^n."""
    fam = [
        gaussian(n, [0.8 + 0.1 * d for d in range(n)]),
        gaussian(n, [1.3 - 0.1 * d for d in range(n)], center=[0.4] * n),
        gaussian(n, [0.9] * n, modulation=[2.0 - d for d in range(n)]),
        gaussian(n, [0.7] * n, center=[-0.2] * n, modulation=[-1.5] * n),
        hermite_function((1,) + (0,) * (n - 1), abs(lam)),
    ]
    return fam[:count]


def _group_probes(rng, n, count, scale=0.4):
    return rng.standard_normal((count, 2 * n + 1)) * scale


def _project_average(G, j, points):
    """Sector projection by discrete character averaging (oracle route).

    Shifts x by the fractions of the multiplicity torus and averages
    against the sector character; independent of the symbolic selection
    rule in ``project_sector``.
    """
    k = G.k
    chain = G.chain
    n = chain.n
    pts = np.asarray(points, dtype=complex)
    total = np.zeros(len(pts), dtype=complex)
    sizes = [2 * abs(k) * p for p in chain.ratios]
    count = 0
    import itertools

    for m in itertools.product(*[range(s) for s in sizes]):
        shifted = pts.copy()
        phase = 0.0
        for i in range(n):
            shifted[:, i] = shifted[:, i] + m[i] / (2 * k * chain.ratios[i])
            phase += math.pi * m[i] / chain.values[i] * 0.0  # placeholder
        # u-dependent phase has to be per-point
        uphase = np.zeros(len(pts), dtype=float)
        for i in range(n):
            uphase = uphase + math.pi * m[i] / chain.values[i] * pts[:, n + i].real
        jphase = sum(
            math.pi / k * m[i] * j[i] / chain.ratios[i] for i in range(n)
        )
        total += np.exp(-1j * (uphase + jphase)) * G.evaluate(shifted)
        count += 1
    return total / count


# ---------------------------------------------------------------------------
# suite builders: each returns [(check name, callable)]

def _suite_hgroup(ctx):
    from .hgroup import (
        GroupPoint,
        group_inv,
        group_mul,
        hermite_matrix,
        matrix_coefficient,
        schrodinger_apply,
    )

    def associativity():
        rng = ctx.rng("hgroup-assoc")
        worst = 0.0
        for n in (1, 2):
            for _ in range(10):
                g, h, w = (
                    GroupPoint(
                        tuple(rng.standard_normal(n)),
                        tuple(rng.standard_normal(n)),
                        float(rng.standard_normal()),
                    )
                    for _ in range(3)
                )
                a = group_mul(group_mul(g, h), w)
                b = group_mul(g, group_mul(h, w))
                worst = max(
                    worst, max(abs(x - y) for x, y in zip(a.coords(), b.coords()))
                )
        return worst, 1e-12, "random triples, n = 1 and 2"

    def inverses():
        rng = ctx.rng("hgroup-inv")
        worst = 0.0
        for _ in range(10):
            g = GroupPoint(
                tuple(rng.standard_normal(2)),
                tuple(rng.standard_normal(2)),
                float(rng.standard_normal()),
            )
            e = group_mul(g, group_inv(g))
            worst = max(worst, max(abs(c) for c in e.coords()))
        return worst, 1e-12, "g . g^-1 = identity"

    def unitarity():
        rng = ctx.rng("hgroup-unitary")
        lam = 1.7
        f = gaussian(1, 0.8, center=(0.2,), modulation=(0.5,))
        base = float(f.norm_sq().real)
        worst = 0.0
        for _ in range(5):
            g = GroupPoint(
                (float(rng.standard_normal()),),
                (float(rng.standard_normal()),),
                float(rng.standard_normal()),
            )
            moved = schrodinger_apply(lam, g, f)
            worst = max(worst, abs(float(moved.norm_sq().real) / base - 1.0))
        return worst, 1e-10, "norm preserved under the unitary action"

    def homomorphism():
        rng = ctx.rng("hgroup-hom")
        lam = -0.9
        f = gaussian(1, 1.1, modulation=(0.7,))
        probes = rng.standard_normal((6, 1)) * 0.8
        worst = 0.0
        for _ in range(5):
            g, h = (
                GroupPoint(
                    (float(rng.standard_normal()),),
                    (float(rng.standard_normal()),),
                    float(rng.standard_normal()),
                )
                for _ in range(2)
            )
            lhs = schrodinger_apply(lam, g, schrodinger_apply(lam, h, f))
            rhs = schrodinger_apply(lam, group_mul(g, h), f)
            worst = max(worst, _maxdev(lhs.evaluate(probes), rhs.evaluate(probes)))
        return worst, 1e-10, "pi(g) pi(h) = pi(g h) pointwise"

    def central_character():
        rng = ctx.rng("hgroup-central")
        lam = 2.3
        f = gaussian(1, 0.9)
        probes = rng.standard_normal((6, 1)) * 0.7
        xi = 0.61
        g = GroupPoint((0.0,), (0.0,), xi)
        lhs = schrodinger_apply(lam, g, f).evaluate(probes)
        rhs = np.exp(1j * lam * xi) * f.evaluate(probes)
        return _maxdev(lhs, rhs), 1e-12, "central elements act as the scalar phase"

    def matrix_oracle():
        lam = 1.4
        f3 = gaussian(3, [0.8, 1.0, 0.9], modulation=[0.3, -0.2, 0.1])
        M1 = hermite_matrix(lam, f3.evaluate, 4, n=1, rate=0.8, nodes=24)
        _, _, quad, lin = f3.terms[0]
        zfac = gauss_poly_integral(quad[2], lin[2] + 1j * lam)
        g2 = gaussian(2, [0.8, 1.0], modulation=[0.3, -0.2])
        pts2, wts2 = tensor_rule([gauss_hermite(40, rate=0.8)] * 2)
        vals = g2.evaluate(pts2) * wts2
        p3 = np.column_stack([pts2, np.zeros(len(pts2))])
        M2 = np.zeros((4, 4), dtype=complex)
        for a in range(4):
            for b in range(4):
                M2[a, b] = zfac * np.sum(
                    vals * matrix_coefficient(lam, (a,), (b,), p3)
                )
        return (
            _maxdev(M1, M2),
            1e-10,
            "operator matrix vs direct coefficient quadrature",
        )

    return [
        ("group-law-associative", associativity),
        ("group-inverses", inverses),
        ("action-unitary", unitarity),
        ("action-homomorphism", homomorphism),
        ("action-central-phase", central_character),
        ("matrix-vs-coefficient-quadrature", matrix_oracle),
    ]


def _canonical_basis(chain, d=1):
    """Rows of the canonical frame d * (e_i; l_i e_{n+i}) as Fractions."""
    n = chain.n
    rows = []
    for i in range(n):
        rows.append(
            [Fraction(d) if c == i else Fraction(0) for c in range(2 * n)]
        )
    for i in range(n):
        rows.append(
            [
                Fraction(d) * chain.values[i] if c == n + i else Fraction(0)
                for c in range(2 * n)
            ]
        )
    return rows


def _suite_lattice(ctx):
    from .lattice import (
        DivisorChain,
        _fraction_det,
        ak_elements,
        beta,
        make_gamma_l,
        normal_form,
        random_symplectic,
        symplectic_gram,
    )

    chains = [DivisorChain(c) for c in ((1,), (1, 2), (2, 2), (1, 3))]
    if ctx.chain is not None:
        chains.insert(0, ctx.chain)

    def roundtrips():
        rng = ctx.rng("lattice-roundtrip")
        failures = 0
        trials = 0
        for chain in chains:
            for d in (1, Fraction(3, 2)):
                for _ in range(3):
                    rows = _canonical_basis(chain, d)
                    S = random_symplectic(chain.n, rng)
                    imaged = [
                        [
                            sum(S[r][c] * row[c] for c in range(2 * chain.n))
                            for r in range(2 * chain.n)
                        ]
                        for row in rows
                    ]
                    nf = normal_form(imaged)
                    trials += 1
                    # the canonical representative absorbs the chain gcd
                    # into the scale: l is reduced to l / l_1
                    want_chain = chain.ratios
                    want_d2 = Fraction(d) ** 2 * chain.values[0]
                    if nf.chain.values != want_chain or nf.d2 != want_d2:
                        failures += 1
        return failures, 0, f"{trials} randomized integer-symplectic images"

    def module_equality():
        rng = ctx.rng("lattice-module")
        failures = 0
        for chain in chains[:3]:
            rows = _canonical_basis(chain)
            S = random_symplectic(chain.n, rng)
            imaged = [
                [
                    sum(S[r][c] * row[c] for c in range(2 * chain.n))
                    for r in range(2 * chain.n)
                ]
                for row in rows
            ]
            nf = normal_form(imaged)
            m = 2 * chain.n
            det = _fraction_det([[Fraction(v) for v in r] for r in nf.W])
            if abs(det) != 1:
                failures += 1
                continue
            F = [[Fraction(imaged[c][r]) for c in range(m)] for r in range(m)]
            FW = [
                [sum(F[r][k] * Fraction(nf.W[k][c]) for k in range(m)) for c in range(m)]
                for r in range(m)
            ]
            for r in range(m):
                for c in range(m):
                    scale = nf.chain.values[c - chain.n] if c >= chain.n else 1
                    if FW[r][c] != nf.Ad[r][c] * scale:
                        failures += 1
        return failures, 0, "unimodular change of basis reproduces the frame exactly"

    def beta_canonical():
        failures = 0
        vals = []
        for chain in chains:
            gens = make_gamma_l(chain)
            b = beta(gens)
            vals.append(str(b))
            if Fraction(b) != Fraction(chain.values[0], 2):
                failures += 1
        return failures, 0, f"central generators: {vals}"

    def ak_count():
        k = ctx.k
        failures = 0
        for chain in chains:
            got = len(ak_elements(k, chain))
            want = 1
            for p in chain.ratios:
                want *= 2 * abs(k) * p
            if got != want:
                failures += 1
        return failures, 0, "index count equals the product of the axis ranges"

    def gram():
        failures = 0
        for chain in chains[:3]:
            rows = _canonical_basis(chain)
            S, _ = symplectic_gram(rows)
            m = 2 * chain.n
            for r in range(m):
                for c in range(m):
                    if S[r][c] != -S[c][r]:
                        failures += 1
                    want = Fraction(0)
                    if c == r + chain.n:
                        want = Fraction(chain.values[r])
                    elif r == c + chain.n:
                        want = -Fraction(chain.values[c])
                    if S[r][c] != want:
                        failures += 1
        return failures, 0, "pairing matrix of the canonical frame"

    def k0_guard():
        try:
            ak_elements(0, chains[0])
            return 1.0, 0, "degenerate index accepted"
        except DegenerateCentralCharacterError:
            return 0.0, 0, "degenerate index rejected"

    return [
        ("normal-form-roundtrips", roundtrips),
        ("module-equality-exact", module_equality),
        ("central-generator-value", beta_canonical),
        ("sector-index-count", ak_count),
        ("gram-canonical-frame", gram),
        ("degenerate-index-rejected", k0_guard),
    ]


def _suite_prop24(ctx):
    from .lattice import ak_elements, lambda_k, make_gamma_l
    from .hgroup import GroupPoint, group_mul, schrodinger_apply
    from .weilbrezin import (
        l2m_inner_quadrature,
        project_sector,
        sector_condition_residual,
        twist_j,
        weil_brezin,
    )

    k = ctx.k
    chain = ctx.chain
    n = chain.n
    lam = lambda_k(k, chain)
    fam = _test_family(n, lam, count=3)
    aks = ak_elements(k, chain)

    def isometry_closed():
        worst = 0.0
        for f in fam:
            G = weil_brezin(k, chain, f)
            worst = max(
                worst,
                abs(float(G.norm_sq().real) / float(f.norm_sq().real) - 1.0),
            )
        return worst, 1e-10, "closed-form norm ratio over the test family"

    def isometry_quadrature():
        f = fam[0]
        G = weil_brezin(k, chain, f)
        q = l2m_inner_quadrature(G, G)
        return (
            abs(float(q.real) / float(f.norm_sq().real) - 1.0),
            1e-6,
            "fundamental-domain quadrature vs input norm",
        )

    def lattice_invariance():
        rng = ctx.rng("p24-invariance")
        G = weil_brezin(k, chain, fam[1])
        probes = _group_probes(rng, n, 20)
        worst = 0.0
        for gen in make_gamma_l(chain):
            moved = np.array(
                [
                    group_mul(
                        gen,
                        GroupPoint(tuple(p[:n]), tuple(p[n : 2 * n]), p[2 * n]),
                    ).coords()
                    for p in probes
                ]
            )
            worst = max(worst, _maxdev(G.evaluate(moved), G.evaluate(probes)))
        return worst, 1e-8, "left translation by every lattice generator"

    def twist_condition():
        rng = ctx.rng("p24-twist")
        j = aks[1 % len(aks)]
        F = twist_j(weil_brezin(k, chain, fam[0]), j)
        probes = rng.standard_normal((12, 2 * n)) * 0.6
        res = sector_condition_residual(F, j, probes)
        return res, 1e-8, f"shift condition for sector {j}"

    def orthogonality():
        ja = aks[0]
        jb = aks[1 % len(aks)]
        Fa = twist_j(weil_brezin(k, chain, fam[0]), ja)
        Fb = twist_j(weil_brezin(k, chain, fam[1]), jb)
        closed = abs(complex(Fa.inner(Fb)))
        quad = abs(complex(l2m_inner_quadrature(Fa, Fb)))
        scale = math.sqrt(float(Fa.norm_sq().real) * float(Fb.norm_sq().real))
        return (
            max(closed, quad) / scale,
            1e-6,
            "distinct sectors, closed-form and quadrature routes",
        )

    def reconstruction():
        rng = ctx.rng("p24-reconstruct")
        G = twist_j(weil_brezin(k, chain, fam[0]), aks[0])
        for j, f in zip(aks[1:3], fam[1:3]):
            G = G + twist_j(weil_brezin(k, chain, f), j)
        probes = _group_probes(rng, n, 30, scale=0.5)
        total = np.zeros(len(probes), dtype=complex)
        for j in aks:
            total += project_sector(G, j).evaluate(probes)
        base = G.evaluate(probes)
        return (
            _maxdev(total, base) / max(float(np.max(np.abs(base))), 1e-300),
            1e-9,
            "sector projections sum back to the function",
        )

    def projection_oracle():
        rng = ctx.rng("p24-proj-oracle")
        G = twist_j(weil_brezin(k, chain, fam[0]), aks[0]) + twist_j(
            weil_brezin(k, chain, fam[1]), aks[1 % len(aks)]
        )
        probes = _group_probes(rng, n, 10, scale=0.5)
        worst = 0.0
        for j in aks[:2]:
            sym = project_sector(G, j).evaluate(probes)
            avg = _project_average(G, j, probes)
            worst = max(worst, _maxdev(sym, avg))
        return worst, 1e-9, "symbolic selection vs character-average quadrature"

    def idempotence():
        rng = ctx.rng("p24-idem")
        ja, jb = aks[0], aks[1 % len(aks)]
        G = twist_j(weil_brezin(k, chain, fam[2]), ja)
        probes = _group_probes(rng, n, 10)
        twice = project_sector(project_sector(G, ja), ja).evaluate(probes)
        once = project_sector(G, ja).evaluate(probes)
        cross = project_sector(project_sector(G, ja), jb).evaluate(probes)
        return (
            max(_maxdev(twice, once), float(np.max(np.abs(cross)))),
            1e-10,
            "projections idempotent and mutually annihilating",
        )

    def parseval():
        G = twist_j(weil_brezin(k, chain, fam[0]), aks[0]) + twist_j(
            weil_brezin(k, chain, fam[1]), aks[1 % len(aks)]
        )
        total = sum(
            float(project_sector(G, j).norm_sq().real) for j in aks
        )
        return (
            abs(total / float(G.norm_sq().real) - 1.0),
            1e-6,
            "squared norms add across sectors",
        )

    def intertwine():
        rng = ctx.rng("p24-intertwine")
        f = fam[0]
        G = weil_brezin(k, chain, f)
        probes = _group_probes(rng, n, 8)
        worst = 0.0
        for _ in range(10):
            g = GroupPoint(
                tuple(rng.standard_normal(n) * 0.6),
                tuple(rng.standard_normal(n) * 0.6),
                float(rng.standard_normal() * 0.5),
            )
            lhs = weil_brezin(k, chain, schrodinger_apply(lam, g, f))
            moved = np.array(
                [
                    group_mul(
                        GroupPoint(tuple(p[:n]), tuple(p[n : 2 * n]), p[2 * n]), g
                    ).coords()
                    for p in probes
                ]
            )
            worst = max(worst, _maxdev(lhs.evaluate(probes), G.evaluate(moved)))
        return worst, 1e-8, "periodization intertwines the action with translation"

    def zero_linearity():
        G = weil_brezin(k, chain, GaussHermiteSum.zero(n))
        pts = np.zeros((3, 2 * n + 1))
        return (
            float(np.max(np.abs(G.evaluate(pts)))),
            0.0,
            "zero input periodizes to zero",
        )

    return [
        ("isometry-closed-form", isometry_closed),
        ("isometry-quadrature", isometry_quadrature),
        ("lattice-invariance", lattice_invariance),
        ("twist-sector-condition", twist_condition),
        ("cross-sector-orthogonality", orthogonality),
        ("sector-reconstruction", reconstruction),
        ("projection-average-oracle", projection_oracle),
        ("projection-idempotent", idempotence),
        ("parseval-across-sectors", parseval),
        ("intertwines-translation", intertwine),
        ("zero-linearity", zero_linearity),
    ]


def _suite_prop25(ctx):
    from .lattice import ak_elements, lambda_k, make_gamma_l
    from .hgroup import schrodinger_apply
    from .weilbrezin import nu_j_apply

    k = ctx.k
    chain = ctx.chain
    n = chain.n
    lam = lambda_k(k, chain)

    def node_sum_oracle():
        f = gaussian(n, [0.6 + 0.1 * d for d in range(n)], center=[0.2] * n)
        got = nu_j_apply(k, chain, (0,) * n, f)
        # independent route: wide-interval quadrature for the oscillatory
        # transform integral, then a brute node sum; two steps out the
        # transform tail is already far below the tolerance, and the rule
        # density tracks the fastest retained oscillation
        steps = [2 * k * p / l for p, l in zip(chain.ratios, chain.values)]
        smax = 2.0 * max(abs(s) for s in steps)
        nodes = max(400, int(80 * smax) + 1)
        pts, wts = tensor_rule([gauss_legendre(nodes, -8.0, 8.0)] * n)
        vals = wts * f.evaluate(pts)
        total = 0.0 + 0.0j
        import itertools

        for m in itertools.product(*([range(-2, 3)] * n)):
            node = np.array([steps[i] * m[i] for i in range(n)])
            total += np.sum(vals * np.exp(-2j * math.pi * (pts @ node)))
        return abs(got - total), 1e-10, "quadrature transform, brute lattice sum"

    def invariance():
        f = gaussian(n, [0.8] * n, center=[0.1] * n, modulation=[0.4] * n)
        j = ak_elements(k, chain)[1 % len(ak_elements(k, chain))]
        base = nu_j_apply(k, chain, j, f)
        worst = 0.0
        for gen in make_gamma_l(chain):
            moved = nu_j_apply(k, chain, j, schrodinger_apply(lam, gen, f))
            worst = max(worst, abs(moved - base))
        return worst, 1e-8, "pairing invariant under all lattice generators"

    def away_support():
        # a wide, slowly modulated profile has a narrow transform; center
        # it halfway between adjacent nodes so the sum sees only tails
        steps = [2 * k * p / l for p, l in zip(chain.ratios, chain.values)]
        f = gaussian(n, [0.05] * n, modulation=[math.pi * s for s in steps])
        got = nu_j_apply(k, chain, (0,) * n, f)
        return abs(got), 1e-10, "transform concentrated between the nodes"

    return [
        ("node-sum-oracle", node_sum_oracle),
        ("lattice-invariance", invariance),
        ("between-node-support", away_support),
    ]


def _suite_prop26(ctx):
    from .lattice import ak_elements, lambda_k
    from .weilbrezin import invert_sector, prop26_check, twist_j, weil_brezin

    k = ctx.k
    chain = ctx.chain
    n = chain.n
    lam = lambda_k(k, chain)
    aks = ak_elements(k, chain)

    def identity_residual():
        rng = ctx.rng("p26-identity")
        probes = _group_probes(rng, n, 20, scale=0.5)
        worst = 0.0
        f = gaussian(n, [0.9] * n, center=[0.1] * n)
        for j in aks[:2]:
            worst = max(worst, prop26_check(k, chain, j, f, probes))
        return worst, 1e-6, "moving-frame factorization at 20 probes"

    def ratio_consistency():
        dev = max(
            abs(Fraction(2 * k * p, l) - Fraction(2 * k, chain.values[0]))
            for p, l in zip(chain.ratios, chain.values)
        )
        return float(dev), 0.0, "axis step ratios all equal the base step"

    def zero_input():
        rng = ctx.rng("p26-zero")
        probes = _group_probes(rng, n, 5)
        res = prop26_check(k, chain, aks[0], GaussHermiteSum.zero(n), probes)
        return res, 0.0, "zero input gives zero residual"

    def invert_roundtrip():
        rng = ctx.rng("p26-invert")
        f = gaussian(n, [1.1] * n, center=[0.3] * n, modulation=[-0.8] * n)
        j = aks[1 % len(aks)]
        F = twist_j(weil_brezin(k, chain, f), j)
        rec = invert_sector(F, j)
        probes = rng.standard_normal((12, n)) * 0.8
        return (
            _reldev(rec.evaluate(probes), f.evaluate(probes)),
            1e-10,
            "generating function recovered from its sector image",
        )

    def coefficient_shift():
        # Fourier coefficients of the periodization satisfy
        # c_m(u) = c_0(u + m l) (checked for |m| <= 2 by x-quadrature)
        f = gaussian(1, 1.0, center=(0.2,))
        chain1 = chain if n == 1 else type(chain)((1,))
        G = weil_brezin(k, chain1, f)
        xq, wq = gauss_legendre(160, 0.0, 1.0)
        lam1 = lambda_k(k, chain1)
        l1 = float(chain1.values[0])
        worst = 0.0
        for u in (-0.4, 0.15, 0.5):
            for m in (-2, -1, 0, 1, 2):
                pts = np.zeros((len(xq), 3))
                pts[:, 0] = xq
                pts[:, 1] = u
                vals = G.evaluate(pts) * np.exp(
                    -0.5j * lam1 * xq * u - 1j * lam1 * l1 * m * xq
                )
                cm = float(np.sum(wq * vals.real)) + 1j * float(
                    np.sum(wq * vals.imag)
                )
                worst = max(worst, abs(cm - f.evaluate(np.array([[u + m * l1]]))[0]))
        return worst, 1e-8, "lattice-shifted coefficients collapse to one profile"

    def mismatch_guard():
        f = gaussian(n, [0.9] * n)
        F = twist_j(weil_brezin(k, chain, f), aks[1 % len(aks)])
        try:
            invert_sector(F, aks[0])
            return 1.0, 0.0, "foreign sector accepted"
        except SectorMismatchError:
            return 0.0, 0.0, "foreign sector rejected"

    del lam
    return [
        ("factorization-residual", identity_residual),
        ("axis-step-consistency", ratio_consistency),
        ("zero-input", zero_input),
        ("inversion-roundtrip", invert_roundtrip),
        ("coefficient-shift-identity", coefficient_shift),
        ("sector-mismatch-guard", mismatch_guard),
    ]


def _suite_prop27(ctx):
    from .bergman import bergman_inner, bergman_inner_direct, bergman_norm_sq
    from .heat import sector_heat_transform
    from .lattice import ak_elements
    from .weilbrezin import sector_condition_residual, twist_j, weil_brezin

    k = ctx.k
    chain = ctx.chain
    n = chain.n
    t = ctx.t if ctx.t is not None else 0.04
    aks = ak_elements(k, chain)

    def make_part(j, f):
        return sector_heat_transform(twist_j(weil_brezin(k, chain, f), j), t)

    def orthogonality():
        f = gaussian(n, [0.9] * n, center=[0.2] * n)
        parts = {j: make_part(j, f) for j in aks[:3]}
        worst = 0.0
        names = list(parts)
        for a in range(len(names)):
            for b in range(a + 1, len(names)):
                ip = bergman_inner(parts[names[a]], parts[names[b]], t)
                na = bergman_norm_sq(parts[names[a]], t)
                nb = bergman_norm_sq(parts[names[b]], t)
                worst = max(worst, abs(ip) / math.sqrt(na * nb))
        return worst, 1e-5, "weighted inner products across distinct sectors"

    def orthogonality_dense():
        td = 0.005
        Ga = sector_heat_transform(
            twist_j(weil_brezin(k, chain, gaussian(n, [1.1] * n)), aks[0]), td
        )
        Gb = sector_heat_transform(
            twist_j(weil_brezin(k, chain, gaussian(n, [1.1] * n)), aks[-1]), td
        )
        ip = bergman_inner_direct(Ga, Gb, td)
        sc = math.sqrt(bergman_norm_sq(Ga, td) * bergman_norm_sq(Gb, td))
        return abs(ip) / sc, 1e-5, "dense-grid route, extreme sector pair"

    def completeness():
        fs = [
            gaussian(n, [0.9] * n),
            gaussian(n, [1.2] * n, center=[0.3] * n),
            gaussian(n, [0.8] * n, modulation=[1.0] * n),
        ]
        parts = [make_part(j, f) for j, f in zip(aks[:3], fs)]
        F = parts[0]
        for p in parts[1:]:
            F = F + p
        total = sum(bergman_norm_sq(p, t) for p in parts)
        whole = bergman_norm_sq(F, t)
        return (
            abs(total / whole - 1.0),
            1e-4,
            "component squared norms add to the whole",
        )

    def membership_condition():
        rng = ctx.rng("p27-membership")
        j = aks[1 % len(aks)]
        F = make_part(j, gaussian(n, [1.0] * n))
        probes = rng.standard_normal((10, 2 * n)) * 0.4 + 1j * (
            rng.standard_normal((10, 2 * n)) * 0.15
        )
        res = sector_condition_residual(F, j, probes)
        return res, 1e-6, "sector shift condition at complex probes"

    def realness():
        F = make_part(aks[0], gaussian(n, [1.0] * n, modulation=[0.6] * n))
        val = bergman_inner(F, F, t)
        return (
            abs(val.imag) / max(abs(val.real), 1e-300),
            1e-8,
            "weighted squared norm is real",
        )

    def divergence_guard():
        try:
            bergman_norm_sq(
                weil_brezin(k, chain, gaussian(n, [0.05] * n)), 2 * t
            )
            return 1.0, 0.0, "divergent norm accepted"
        except DivergentNormError:
            return 0.0, 0.0, "divergent norm rejected"

    return [
        ("cross-sector-orthogonality", orthogonality),
        ("orthogonality-dense-route", orthogonality_dense),
        ("direct-sum-completeness", completeness),
        ("membership-complex-condition", membership_condition),
        ("norm-realness", realness),
        ("divergence-guard", divergence_guard),
    ]


def _suite_thm28(ctx):
    from .bergman import bergman_norm_sq, thm28_ratio
    from .heat import sector_heat_transform
    from .lattice import ak_elements, lambda_k
    from .weilbrezin import twist_j, weil_brezin

    k = ctx.k
    chain = ctx.chain
    n = chain.n
    t = ctx.t if ctx.t is not None else 0.04
    lam = lambda_k(k, chain)
    j = ak_elements(k, chain)[0]
    fam = _test_family(n, lam, count=5)

    def finiteness():
        F = sector_heat_transform(twist_j(weil_brezin(k, chain, fam[0]), j), t)
        val = bergman_norm_sq(F, t)
        ok = math.isfinite(val) and val > 0
        return (0.0 if ok else 1.0), 0.0, f"norm of a smoothed image: {val:.6e}"

    def constancy():
        cvs = {}
        means = {}
        for variant in ("single", "double"):
            ratios = np.array(
                [
                    thm28_ratio(f, k, chain, j, t, exponent_variant=variant)
                    for f in fam
                ]
            )
            cvs[variant] = float(ratios.std() / ratios.mean())
            means[variant] = float(ratios.mean())
        best = min(cvs.values())
        detail = (
            f"means single {means['single']:.6e} double {means['double']:.6e}; "
            f"cv single {cvs['single']:.2e} double {cvs['double']:.2e}"
        )
        return best, 1e-3, detail

    def homogeneity():
        r1 = thm28_ratio(fam[0], k, chain, j, t)
        r2 = thm28_ratio(2.0 * fam[0], k, chain, j, t)
        return abs(r2 / r1 - 1.0), 1e-12, "scaling the input leaves the ratio fixed"

    def variant_guard():
        try:
            thm28_ratio(fam[0], k, chain, j, t, exponent_variant="triple")
            return 1.0, 0.0, "unknown variant accepted"
        except ValueError:
            return 0.0, 0.0, "unknown variant rejected"

    return [
        ("image-norm-finite", finiteness),
        ("ratio-constancy", constancy),
        ("ratio-homogeneity", homogeneity),
        ("variant-guard", variant_guard),
    ]


def _suite_heat(ctx):
    from .heat import (
        HeatFlow,
        cauchy_riemann_residual,
        eval_kt,
        eval_kt_lambda,
        eval_qt,
        heat_residual,
        heat_transform,
        kernel_mass,
        kt_lambda_family,
        twisted_convolution,
    )

    t = ctx.t if ctx.t is not None else 0.3

    def unit_mass():
        worst = max(
            abs(kernel_mass(t, 1) - 1.0), abs(kernel_mass(max(t, 0.3), 2) - 1.0)
        )
        return worst, 1e-6, "calibrated kernel integrates to one"

    def semigroup():
        rng = ctx.rng("heat-semigroup")
        ts, ss = 2.0 * t / 3.0, t / 3.0
        probes = rng.standard_normal((5, 3)) * 0.5
        # frequency range shrinks as the total time grows; the node
        # density per unit length is kept fixed, and an even count keeps
        # the rule away from the removable point at zero frequency
        L = min(max(45.0 * math.sqrt(0.35 / t), 20.0), 90.0)
        count = int(260 * L / 45.0)
        lamq, wq = gauss_legendre(count + count % 2, -L, L)
        acc = np.zeros(5, dtype=complex)
        for L, W in zip(lamq, wq):
            if L == 0.0:
                continue
            tc = twisted_convolution(
                kt_lambda_family(ts, L, 1),
                kt_lambda_family(ss, L, 1),
                L,
                probes[:, :2],
            )
            acc += W * tc * np.exp(1j * L * probes[:, 2])
        acc /= 2.0 * math.pi
        want = eval_kt(ts + ss, probes)
        return (
            float(np.max(np.abs(acc - want) / np.abs(want))),
            1e-4,
            "two-step composition against the one-step kernel",
        )

    def kernel_heat_equation():
        rng = ctx.rng("heat-eq")
        probes = rng.standard_normal((5, 3)) * 0.5
        res = heat_residual(lambda tt, q: eval_kt(tt, q, tol=1e-12), t, probes)
        return float(np.max(np.abs(res))), 1e-4, "sub-Laplacian evolution residual"

    def flow_heat_equation():
        rng = ctx.rng("heat-flow-eq")
        f = gaussian(3, [0.9, 1.1, 0.8], center=[0.1, -0.2, 0.3]).mul_poly(
            0, (0.2, 1.0)
        )
        probes = rng.standard_normal((4, 3)) * 0.5
        res = heat_residual(lambda tt, q: HeatFlow(f, tt)(q), t, probes)
        return float(np.max(np.abs(res))), 1e-4, "smoothed function solves the flow"

    def flow_convolution_oracle():
        f = gaussian(3, [0.9, 1.1, 0.8], center=[0.1, -0.2, 0.3]).mul_poly(
            0, (0.2, 1.0)
        )
        flow = heat_transform(f, t)
        g0 = np.array([0.25, -0.4, 0.2])
        # the kernel spreads with time: widen the grids accordingly
        stretch = max(1.0, t / 0.3)
        gridxu, wxu = tensor_rule([gauss_hermite(40, rate=0.5 / stretch)] * 2)
        xiq, wxi = gauss_legendre(int(120 * stretch), -3.0 * stretch, 3.0 * stretch)
        val = 0.0
        for xv, wv in zip(xiq, wxi):
            hpts = np.column_stack(
                [gridxu, np.full(len(gridxu), xv)]
            )
            kt = eval_kt(t, hpts, tol=1e-9)
            fpts = np.empty((len(gridxu), 3), dtype=complex)
            fpts[:, 0] = g0[0] - gridxu[:, 0]
            fpts[:, 1] = g0[1] - gridxu[:, 1]
            fpts[:, 2] = (
                g0[2]
                - xv
                + 0.5 * (g0[0] * gridxu[:, 1] - gridxu[:, 0] * g0[1])
            )
            val += wv * np.sum(wxu * kt * f.evaluate(fpts))
        got = flow(np.array([g0]))[0]
        return abs(val - got) / abs(got), 1e-6, "full-grid group convolution probe"

    def holomorphy():
        rng = ctx.rng("heat-cr")
        f = gaussian(3, [0.9, 1.1, 0.8]).mul_poly(1, (0.1, 0.5))
        flow = heat_transform(f, t)
        probes = (rng.standard_normal((2, 3)) * 0.4).astype(complex)
        worst = 0.0
        for ax in range(3):
            cr = cauchy_riemann_residual(lambda q: flow(q), probes, ax)
            worst = max(worst, float(np.max(np.abs(cr))))
        return worst, 1e-5, "complex differentiability along each axis"

    def slice_closed_form():
        rng = ctx.rng("heat-slice")
        lam = 2.2
        pts2 = rng.standard_normal((5, 2))
        ssq = (pts2**2).sum(axis=1)
        pref = lam / math.sinh(t * lam)
        want = (
            (4 * math.pi) ** (-1)
            * pref
            * np.exp(-t * lam**2)
            * np.exp(-0.25 * lam / math.tanh(t * lam) * ssq)
        )
        return (
            _maxdev(eval_kt_lambda(t, lam, pts2), want),
            1e-12,
            "fixed-frequency kernel matches its formula",
        )

    def slice_superposition():
        p3 = np.array([[0.3, -0.2, 0.15]])
        lamq, wq = gauss_legendre(400, -40.0 / max(t, 0.2), 40.0 / max(t, 0.2))
        acc = 0.0 + 0.0j
        for L, W in zip(lamq, wq):
            if L == 0.0:
                continue
            acc += W * eval_kt_lambda(t, L, p3[:, :2])[0] * np.exp(1j * L * p3[0, 2])
        acc /= 2 * math.pi
        want = eval_kt(t, p3)[0]
        return abs(acc - want) / abs(want), 1e-8, "frequency synthesis of the kernel"

    def qt_routes():
        rng = ctx.rng("heat-qt")
        p33 = rng.standard_normal((4, 5)) * 0.5
        qr = eval_qt(t, p33, 1, 3)
        qp = eval_qt(t, p33, 1, 3, force_product=True)
        p33c = p33.astype(complex)
        p33c[:, 1] += 0.1j
        p33c[:, 3] += 0.05j
        qrc = eval_qt(t, p33c, 1, 3)
        qpc = eval_qt(t, p33c, 1, 3, force_product=True)
        p31 = rng.standard_normal((4, 3)) * 0.5
        m1 = _maxdev(eval_qt(t, p31, 1, 1), eval_kt(t, p31))
        return (
            max(_reldev(qr, qp), _reldev(qrc, qpc), m1),
            1e-8,
            "radial route vs product route, real and complex points",
        )

    return [
        ("unit-mass", unit_mass),
        ("semigroup-composition", semigroup),
        ("kernel-heat-equation", kernel_heat_equation),
        ("flow-heat-equation", flow_heat_equation),
        ("flow-convolution-oracle", flow_convolution_oracle),
        ("flow-holomorphy", holomorphy),
        ("slice-closed-form", slice_closed_form),
        ("slice-superposition", slice_superposition),
        ("layer-kernel-routes", qt_routes),
    ]


def _suite_radon(ctx):
    from .heat import eval_kt, eval_qt

    st = _htype.make_quaternionic()
    heis = _htype.make_heisenberg(1)
    t = ctx.t if ctx.t is not None else 0.15

    def fiber_closed_form():
        f = gaussian(7, [0.7] * 4 + [0.9] * 3)
        w = np.array([1.0, 2.0, 2.0]) / 3.0
        G = _htype.radon(st, f, w)
        coef, _, quad, lin = G.terms[0]
        dev = max(
            abs(coef - math.pi / 0.9),
            abs(quad[-1] - 0.9),
            max(abs(complex(c)) for c in lin),
        )
        return float(dev), 1e-12, "product input gives the exact marginal"

    def fiber_vs_quadrature():
        rng = ctx.rng("radon-quad")
        f = gaussian(
            7,
            [0.5, 0.7, 0.9, 1.1, 0.6, 0.9, 1.2],
            modulation=[0.0, 0.0, 0.0, 0.0, 0.4, -0.3, 0.2],
        )
        w = np.array([1.0, 2.0, 2.0]) / 3.0
        G = _htype.radon(st, f, w)
        probes = np.column_stack(
            [rng.standard_normal((4, 4)) * 0.6, rng.standard_normal(4) * 0.5]
        )
        direct = _htype.radon_quadrature(st, f.evaluate, w, probes, rate=0.5, nodes=28)
        return (
            _reldev(direct, G.evaluate(probes)),
            1e-7,
            "closed form against the fiber quadrature",
        )

    def kernel_reduction():
        rng = ctx.rng("radon-kernel")
        worst = 0.0
        for w in (np.array([0.0, 0.0, 1.0]), np.array([1.0, 2.0, 2.0]) / 3.0):
            pr = np.column_stack(
                [rng.standard_normal((5, 4)) * 0.45, rng.standard_normal(5) * 0.3]
            )
            red = _htype.radon_quadrature(
                st,
                lambda b: eval_qt(t, b, 2, 3),
                w,
                pr,
                rate=1.0 / (8.0 * t),
                nodes=26,
            )
            kt = eval_kt(t, pr)
            worst = max(worst, float(np.max(np.abs(red - kt) / np.abs(kt))))
        return worst, 1e-3, "layer kernel is the fiber integral of the full kernel"

    def convolution_identity():
        rng = ctx.rng("radon-conv")
        f1 = gaussian(7, [0.6] * 4 + [0.8] * 3)
        g1 = gaussian(7, [0.9] * 4 + [0.7] * 3, modulation=[0, 0, 0, 0, 0.3, 0.0, -0.2])
        wv = np.array([1.0, 2.0, 2.0]) / 3.0
        Jw = st.j_omega(wv)
        probes = np.column_stack(
            [rng.standard_normal((5, 4)) * 0.5, rng.standard_normal(5) * 0.4]
        )
        lhs = _htype.radon_quadrature(
            st,
            lambda batch: _htype.group_convolution_quadrature(
                f1, g1, 4, st.bracket_rows, batch, nodes=10, refine=False
            ),
            wv,
            probes,
            rate=0.25,
            nodes=18,
            tol=1e-4,
        )
        tw = Jw.T
        rhs = _htype.group_convolution_quadrature(
            _htype.radon(st, f1, wv),
            _htype.radon(st, g1, wv),
            4,
            lambda V, ww: (V @ (tw @ ww))[:, None],
            probes,
            nodes=14,
        )
        return _reldev(lhs, rhs), 1e-4, "fiber integral intertwines convolutions"

    def multiplier_oracle():
        f_pi = gaussian(7, [0.8, 0.9, 1.0, 1.1, 0.6, 0.9, 1.2])
        wv = np.array([1.0, 2.0, 2.0]) / 3.0
        R = _htype.modified_radon(st, f_pi, wv)
        Gb = R.base
        _, _, qB, lB = Gb.terms[0]
        bq, bl = qB[-1], lB[-1]
        Gd = Gb.mul_poly(4, (bl, -2.0 * bq))
        rng = ctx.rng("radon-mult")
        v0 = rng.standard_normal(4) * 0.4
        Lam = math.sqrt(4.0 * bq.real * 40.0)
        l_nodes, l_wts = gauss_legendre(360, 0.0, Lam)
        worst = 0.0
        for s in (0.2, 0.8, 1.5):
            acc = 0.0 + 0.0j
            for sign in (1.0, -1.0):
                for L, wt in zip(l_nodes, l_wts):
                    ghat = complex(R.slice_at(sign * L).evaluate(v0[None, :])[0])
                    acc += wt * ghat * np.exp(-1j * sign * L * s)
            mult_side = acc / (2.0 * math.pi)
            R_up = abs(s) + 10.0 / math.sqrt(bq.real)
            r_nodes, r_wts = gauss_legendre(320, 0.0, R_up)
            pts_m = np.column_stack(
                [np.repeat(v0[None, :], len(r_nodes), axis=0), s - r_nodes]
            )
            pts_p = np.column_stack(
                [np.repeat(v0[None, :], len(r_nodes), axis=0), s + r_nodes]
            )
            diff = (Gd.evaluate(pts_m) - Gd.evaluate(pts_p)) / r_nodes
            oracle = (diff @ r_wts) / math.pi
            worst = max(worst, abs(mult_side - oracle) / abs(oracle))
        mtriv = _htype.modified_radon(heis, gaussian(3, [0.8, 0.8, 0.9]), np.array([1.0]))
        if mtriv.power != 0.0:
            worst = max(worst, 1.0)
        return (
            worst,
            1e-3,
            "half-derivative multiplier vs singular-integral quadrature",
        )

    def plancherel():
        f_pi = gaussian(7, [0.8, 0.9, 1.0, 1.1, 0.6, 0.9, 1.2])
        res = _htype.radon_plancherel(st, f_pi, lebedev_order=26, lam_nodes=48)
        res1 = _htype.radon_plancherel(heis, gaussian(3, [0.8, 1.1, 0.9]))
        return (
            max(res["rel_error"], res1["rel_error"]),
            1e-3,
            f"direction-integrated norms; sphere drift {res['grid_drift']:.1e}",
        )

    def central_poly_guard():
        f = gaussian(7, [0.7] * 4 + [0.9] * 3).mul_poly(5, (0.0, 1.0))
        try:
            _htype.radon(st, f, np.array([1.0, 2.0, 2.0]) / 3.0)
            return 1.0, 0.0, "central polynomial accepted"
        except ValueError:
            return 0.0, 0.0, "central polynomial rejected"

    return [
        ("fiber-closed-form", fiber_closed_form),
        ("fiber-vs-quadrature", fiber_vs_quadrature),
        ("kernel-reduction", kernel_reduction),
        ("convolution-identity", convolution_identity),
        ("multiplier-oracle", multiplier_oracle),
        ("norm-recovery", plancherel),
        ("central-polynomial-guard", central_poly_guard),
    ]


def _suite_htype_axioms(ctx):
    def j_algebra():
        st = _htype.make_quaternionic()
        rng = ctx.rng("htype-j")
        worst = 0.0
        for Ji in st.J:
            worst = max(worst, float(np.max(np.abs(Ji @ Ji + np.eye(4)))))
        for i in range(3):
            for jj in range(i + 1, 3):
                worst = max(
                    worst,
                    float(np.max(np.abs(st.J[i] @ st.J[jj] + st.J[jj] @ st.J[i]))),
                )
        for _ in range(20):
            w = rng.standard_normal(3)
            w /= np.linalg.norm(w)
            Jw = st.j_omega(w)
            worst = max(worst, float(np.max(np.abs(Jw @ Jw + np.eye(4)))))
            worst = max(worst, float(np.max(np.abs(Jw.T @ Jw - np.eye(4)))))
        return worst, 1e-12, "unit-direction complex structures, 20 directions"

    def validation():
        st = _htype.make_quaternionic()
        heis = _htype.make_heisenberg(2)
        ok = _htype.validate_htype(st).passed and _htype.validate_htype(heis).passed
        bad = _htype.HTypeStructure(
            n=1, m=1, J=(_htype.standard_j(1) + 0.01 * np.ones((2, 2)),)
        )
        rep = _htype.validate_htype(bad)
        caught = (not rep.passed) and "complex_structure" in rep.failures
        return (
            0.0 if (ok and caught) else 1.0,
            0.0,
            f"broken axiom reported: {rep.failures}",
        )

    def group_law():
        st = _htype.make_quaternionic()
        rng = ctx.rng("htype-law")
        worst = 0.0
        for _ in range(10):
            ps = [
                _htype.HTypePoint(
                    tuple(rng.standard_normal(4)), tuple(rng.standard_normal(3))
                )
                for _ in range(3)
            ]
            a = st.mul(st.mul(ps[0], ps[1]), ps[2])
            b = st.mul(ps[0], st.mul(ps[1], ps[2]))
            worst = max(worst, max(abs(x - y) for x, y in zip(a.coords(), b.coords())))
        p = _htype.HTypePoint((1, 0, 0, 0), (0, 0, Fraction(1, 2)))
        q = _htype.HTypePoint((0, 1, 0, 0), (Fraction(1, 3), 0, 0))
        prod = st.mul(p, q)
        exact = all(isinstance(c, (int, Fraction)) for c in prod.coords())
        if not exact:
            worst = max(worst, 1.0)
        return worst, 1e-12, "associativity on floats, exactness on rationals"

    def adapted_frame():
        st = _htype.make_quaternionic()
        rng = ctx.rng("htype-sigma")
        worst = 0.0
        dirs = [np.eye(3)[i] for i in range(3)]
        for _ in range(10):
            w = rng.standard_normal(3)
            dirs.append(w / np.linalg.norm(w))
        for w in dirs:
            sig = _htype.sigma_omega(st, w)
            worst = max(worst, float(np.max(np.abs(sig.T @ sig - np.eye(4)))))
            worst = max(
                worst,
                float(
                    np.max(np.abs(sig @ _htype.standard_j(2) @ sig.T - st.j_omega(w)))
                ),
            )
        s1 = _htype.sigma_omega(st, np.array([0.0, 0.0, 1.0]))
        s2 = _htype.sigma_omega(st, np.array([0.0, 0.0, 1.0]))
        if not np.array_equal(s1, s2):
            worst = max(worst, 1.0)
        return worst, 1e-10, "orthogonal, conjugating, deterministic"

    def homomorphism():
        st = _htype.make_quaternionic()
        rng = ctx.rng("htype-alpha")
        from .hgroup import group_mul

        worst = 0.0
        for _ in range(30):
            w = rng.standard_normal(3)
            w /= np.linalg.norm(w)
            pa = _htype.HTypePoint(
                tuple(rng.standard_normal(4)), tuple(rng.standard_normal(3))
            )
            pb = _htype.HTypePoint(
                tuple(rng.standard_normal(4)), tuple(rng.standard_normal(3))
            )
            lhs = _htype.alpha_omega_apply(st, w, st.mul(pa, pb))
            rhs = group_mul(
                _htype.alpha_omega_apply(st, w, pa),
                _htype.alpha_omega_apply(st, w, pb),
            )
            worst = max(worst, max(abs(x - y) for x, y in zip(lhs.coords(), rhs.coords())))
        return worst, 1e-10, "projection is a group homomorphism, 30 pairs"

    def kernel_and_center():
        st = _htype.make_quaternionic()
        w = np.array([1.0, 2.0, 2.0]) / 3.0
        eta = np.array([2.0, 2.0, -3.0])
        img = _htype.alpha_omega_apply(st, w, _htype.HTypePoint((0, 0, 0, 0), tuple(eta)))
        worst = max(abs(c) for c in img.coords())
        img = _htype.alpha_omega_apply(
            st, w, _htype.HTypePoint((0, 0, 0, 0), tuple(0.7 * w))
        )
        worst = max(worst, abs(img.xi - 0.7))
        worst = max(worst, max(abs(c) for c in img.x + img.u))
        return worst, 1e-14, "orthogonal directions die, the axis maps to the center"

    def serialization():
        st = _htype.make_quaternionic()
        st2 = _htype.structure_from_json(_htype.structure_to_json(st))
        ok = st2.n == 2 and st2.m == 3 and np.allclose(st2.J[0], st.J[0])
        bad = _htype.HTypeStructure(
            n=1, m=1, J=(_htype.standard_j(1) + 0.01 * np.ones((2, 2)),)
        )
        try:
            _htype.structure_from_json(_htype.structure_to_json(bad))
            caught = False
        except ValueError:
            caught = True
        return 0.0 if (ok and caught) else 1.0, 0.0, "round trip and axiom gate"

    return [
        ("complex-structure-algebra", j_algebra),
        ("axiom-validation", validation),
        ("group-law", group_law),
        ("adapted-frame", adapted_frame),
        ("projection-homomorphism", homomorphism),
        ("kernel-and-center", kernel_and_center),
        ("serialization-gate", serialization),
    ]


def _suite_lemma35(ctx):
    from .hgroup import _graded_indices, _mc1, hermite_matrix

    st = _htype.make_quaternionic()
    wv = np.array([1.0, 2.0, 2.0]) / 3.0

    def matrix_vs_group_quadrature():
        lam = 0.8
        f_pi = gaussian(7, [0.8, 0.9, 1.0, 1.1, 0.6, 0.9, 1.2])
        M = _htype.pi_lambda_omega_matrix(st, lam, wv, f_pi, 4)
        Gq = _htype.radon(st, f_pi, wv)
        sig = _htype.sigma_omega(st, wv)

        def sampler(pts):
            v = pts[:, :4] @ sig.T
            return Gq.evaluate(np.column_stack([v, pts[:, 4]]))

        Mref = hermite_matrix(lam, sampler, 4, n=2, rate=0.8, nodes=16)
        return (
            _maxdev(M, Mref),
            1e-6,
            "frame-reduced assembly vs full group quadrature",
        )

    def central_shift_phase():
        lam = 0.8
        f_pi = gaussian(7, [0.8, 0.9, 1.0, 1.1, 0.6, 0.9, 1.2])
        M = _htype.pi_lambda_omega_matrix(st, lam, wv, f_pi, 4)
        s0 = 0.37
        f_sh = f_pi.translate([0, 0, 0, 0] + list(-s0 * wv))
        Msh = _htype.pi_lambda_omega_matrix(st, lam, wv, f_sh, 4)
        return (
            _maxdev(Msh, np.exp(1j * lam * s0) * M),
            1e-6,
            "central translation acts as the scalar phase",
        )

    def multiplicativity():
        lam = 0.9
        f = gaussian(7, [0.8] * 4 + [0.7, 0.9, 1.1])
        g = gaussian(
            7, [1.0] * 4 + [0.9, 0.8, 1.2], modulation=[0, 0, 0, 0, 0.2, 0.0, -0.1]
        )
        Mf = _htype.pi_lambda_omega_matrix(st, lam, wv, f, 6)
        Mg = _htype.pi_lambda_omega_matrix(st, lam, wv, g, 6)
        F = _htype.radon(st, f, wv)
        G = _htype.radon(st, g, wv)
        fa = _htype._central_slice(G, lam)
        fb = _htype._central_slice(F, lam)
        pts_g, wts_g = tensor_rule([gauss_hermite(16, rate=0.45)] * 4)
        T = _heat.twisted_convolution(fa, fb, lam, pts_g) * wts_g
        idx = _graded_indices(2, 6)
        Mc = np.zeros((6, 6), dtype=complex)
        for a, ai in enumerate(idx):
            for b, bi in enumerate(idx):
                mc = _mc1(lam, ai[0], bi[0], pts_g[:, 0], pts_g[:, 2]) * _mc1(
                    lam, ai[1], bi[1], pts_g[:, 1], pts_g[:, 3]
                )
                Mc[a, b] = np.sum(T * mc)
        prod = Mf @ Mg
        return (
            _maxdev(Mc, prod) / max(float(np.max(np.abs(prod))), 1e-300),
            1e-4,
            "matrix of a convolution equals the product of matrices",
        )

    def delta_approximation():
        lam = 1.1
        width = 40.0
        f = gaussian(7, [width] * 7)
        mass = float(f.integrate().real)
        M = _htype.pi_lambda_omega_matrix(st, lam, wv, f, 4, nodes=20, rate=8.0)
        return (
            float(np.max(np.abs(M / mass - np.eye(4)))),
            2e-2,
            "narrow input acts as its mass times the identity",
        )

    def degenerate_guard():
        try:
            _htype.pi_lambda_omega_matrix(st, 0.0, wv, gaussian(7, [1.0] * 7), 3)
            return 1.0, 0.0, "zero frequency accepted"
        except DegenerateCentralCharacterError:
            return 0.0, 0.0, "zero frequency rejected"

    return [
        ("matrix-vs-group-quadrature", matrix_vs_group_quadrature),
        ("central-shift-phase", central_shift_phase),
        ("matrix-multiplicativity", multiplicativity),
        ("delta-approximation", delta_approximation),
        ("degenerate-frequency-guard", degenerate_guard),
    ]


def _suite_thm34(ctx):
    st = _htype.make_quaternionic()
    heis = _htype.make_heisenberg(1)
    t = ctx.t if ctx.t is not None else 0.18

    def constancy():
        fs = [
            gaussian(7, [0.5] * 4 + [0.8] * 3),
            gaussian(7, [1.1] * 4 + [0.6, 0.9, 1.3]),
        ]
        base3 = gaussian(7, [0.8] * 4 + [0.7] * 3)
        f3 = 0.7 * base3
        for d in range(4):
            f3 = f3 + base3.mul_poly(d, (0.0, 0.0, 1.0))
        fs.append(f3)
        ratios = []
        bad = 0.0
        details = []
        for f in fs:
            r = _htype.thm34_integral(st, f, t, size=6, tol=5e-2)
            ratios.append(r.ratio)
            details.append(f"{r.ratio:.4f}")
            if not (r.converged and r.value > 0):
                bad = 1.0
        spread = (max(ratios) - min(ratios)) / (sum(ratios) / len(ratios))
        return (
            max(spread, bad),
            0.10,
            f"ratios {', '.join(details)} across three inputs",
        )

    def zero_input():
        r0 = _htype.thm34_integral(st, GaussHermiteSum.zero(7), t)
        ok = r0.value == 0.0 and r0.converged
        return (0.0 if ok else 1.0), 0.0, "zero input integrates to zero"

    def budget_cap():
        rb = _htype.thm34_integral(
            st, gaussian(7, [0.5] * 4 + [0.8] * 3), t, size=6, budget=30
        )
        ok = (not rb.converged) and rb.error > 0 and math.isfinite(rb.value)
        return (
            0.0 if ok else 1.0,
            0.0,
            f"capped run reports value {rb.value:.3e} with error bar {rb.error:.1e}",
        )

    def single_center():
        rh = _htype.thm34_integral(heis, gaussian(3, [0.8, 0.8, 0.9]), t, size=8)
        ok = rh.converged and rh.value > 0
        return (0.0 if ok else 1.0), 0.0, f"one-dimensional center, ratio {rh.ratio:.4f}"

    def invariance_guard():
        try:
            _htype.thm34_integral(
                st, gaussian(7, [0.5, 0.9, 0.5, 0.5, 0.8, 0.8, 0.8]), t
            )
            return 1.0, 0.0, "non-invariant input accepted"
        except ValueError:
            return 0.0, 0.0, "non-invariant input rejected"

    return [
        ("ratio-constancy", constancy),
        ("zero-input", zero_input),
        ("budget-cap", budget_cap),
        ("single-center-case", single_center),
        ("invariance-guard", invariance_guard),
    ]


def _suite_gamma_omega(ctx):
    from .weilbrezin import project_sector, twist_j, weil_brezin

    st = _htype.make_quaternionic()
    heis = _htype.make_heisenberg(1)

    def projection_verified():
        proj = _htype.project_lattice(st, _htype.quaternionic_lattice(), (0, 0, 1))
        ok = (
            proj.verified
            and proj.beta == Fraction(1, 2)
            and proj.rank == 4
            and proj.normal_form is not None
            and tuple(proj.normal_form.chain.values) == (1, 1)
        )
        return (
            0.0 if ok else 1.0,
            0.0,
            f"beta {proj.beta}, rank {proj.rank}, chain "
            f"{proj.normal_form and tuple(proj.normal_form.chain.values)}",
        )

    def self_projection():
        gens = [
            _htype.HTypePoint((1, 0), (0,)),
            _htype.HTypePoint((0, 1), (0,)),
            _htype.HTypePoint((0, 0), (Fraction(1, 2),)),
        ]
        proj = _htype.project_lattice(heis, gens, (1,))
        ok = (
            proj.verified
            and proj.beta == Fraction(1, 2)
            and tuple(proj.normal_form.chain.values) == (1,)
        )
        return (0.0 if ok else 1.0), 0.0, "single-center lattice maps to itself"

    def honest_failure():
        proj = _htype.project_lattice(
            st,
            _htype.quaternionic_lattice(),
            (Fraction(1, 3), Fraction(2, 3), Fraction(2, 3)),
        )
        ok = (not proj.verified) and "not verified" in proj.message
        return (0.0 if ok else 1.0), 0.0, proj.message

    def sectors_on_projection():
        proj = _htype.project_lattice(st, _htype.quaternionic_lattice(), (0, 0, 1))
        chain = proj.normal_form.chain
        n = chain.n
        k = 1
        fam = [
            gaussian(n, [0.8, 1.2][:n]),
            gaussian(n, [1.1, 0.9][:n], center=[0.3] * n),
        ]
        worst = 0.0
        for f in fam:
            G = weil_brezin(k, chain, f)
            worst = max(
                worst,
                abs(float(G.norm_sq().real) / float(f.norm_sq().real) - 1.0),
            )
        rng = ctx.rng("gamma-sectors")
        from .lattice import ak_elements

        aks = ak_elements(k, chain)
        G = twist_j(weil_brezin(k, chain, fam[0]), aks[0]) + twist_j(
            weil_brezin(k, chain, fam[1]), aks[1]
        )
        probes = _group_probes(rng, n, 12, scale=0.5)
        total = np.zeros(len(probes), dtype=complex)
        for j in aks:
            total += project_sector(G, j).evaluate(probes)
        base = G.evaluate(probes)
        worst = max(
            worst,
            _maxdev(total, base) / max(float(np.max(np.abs(base))), 1e-300),
        )
        return worst, 1e-6, "isometry and sector reconstruction on the image chain"

    return [
        ("projection-verified", projection_verified),
        ("self-projection", self_projection),
        ("unverifiable-direction-reported", honest_failure),
        ("sectors-on-image-chain", sectors_on_projection),
    ]


def _suite_interfaces(ctx):
    import contextlib
    import io
    import os
    import tempfile

    from . import cli
    from .heat import eval_kt, eval_qt
    from .lattice import basis_to_json

    def run_cli(argv):
        buf = io.StringIO()
        err = io.StringIO()
        with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(err):
            code = cli.main(argv)
        return code, buf.getvalue(), err.getvalue()

    def eval_values():
        code, out, _ = run_cli(
            ["eval", "--kernel", "hn", "--n", "1", "--t", "0.5", "--point", "0,0,0",
             "--json"]
        )
        data = json.loads(out)
        got = complex(data["values"][0][0], data["values"][0][1])
        want = complex(eval_kt(0.5, np.zeros((1, 3)))[0])
        dev = abs(got - want) / abs(want)
        if code != 0 or want.real <= 0:
            dev = max(dev, 1.0)
        code2, out2, _ = run_cli(
            ["eval", "--kernel", "htype", "--n", "2", "--m", "3", "--t", "0.5",
             "--point", "0,0,0,0,0,0,0", "--json"]
        )
        data2 = json.loads(out2)
        got2 = complex(data2["values"][0][0], data2["values"][0][1])
        want2 = complex(eval_qt(0.5, np.zeros((1, 7)), 2, 3)[0])
        dev = max(dev, abs(got2 - want2) / abs(want2))
        if code2 != 0:
            dev = max(dev, 1.0)
        return dev, 1e-12, "kernel evaluation matches the library routes"

    def eval_complex_and_csv():
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "vals.csv")
            code, _, _ = run_cli(
                ["eval", "--kernel", "hn", "--n", "1", "--t", "0.4",
                 "--point", "0.1+0.2i,0.3,-0.1", "--csv", path]
            )
            rows = [line.split(",") for line in open(path).read().strip().splitlines()]
        if code != 0 or len(rows) != 2:
            return 1.0, 0.0, "csv shape unexpected"
        got = complex(float(rows[1][-2]), float(rows[1][-1]))
        pt = np.array([[0.1 + 0.2j, 0.3, -0.1]])
        want = complex(eval_kt(0.4, pt)[0])
        return (
            abs(got - want) / abs(want),
            1e-12,
            "complex point parsed, value row written",
        )

    def eval_error_paths():
        bad_t, _, _ = run_cli(
            ["eval", "--kernel", "hn", "--n", "1", "--t", "-1", "--point", "0,0,0"]
        )
        bad_dim, _, _ = run_cli(
            ["eval", "--kernel", "hn", "--n", "1", "--t", "0.5", "--point", "0,0"]
        )
        bad_flag, _, _ = run_cli(["eval", "--kernel", "unknown", "--t", "0.5"])
        ok = bad_t == 2 and bad_dim == 2 and bad_flag == 1
        return (
            0.0 if ok else 1.0,
            0.0,
            f"exit codes: bad t {bad_t}, bad dim {bad_dim}, bad flag {bad_flag}",
        )

    def verify_subcommand():
        code, out, _ = run_cli(["verify", "--suite", "htype-axioms", "--json"])
        try:
            rep = SuiteReport.from_json(out)
            ok = code == 0 and rep.passed and rep.suite == "htype-axioms"
        except Exception:
            ok = False
        unknown, _, err = run_cli(["verify", "--suite", "nope"])
        ok = ok and unknown == 1 and "available" in err
        k0, _, err0 = run_cli(["verify", "--suite", "thm2.8", "--k", "0"])
        ok = ok and k0 == 1 and "k=0 sector out of scope" in err0
        return (
            0.0 if ok else 1.0,
            0.0,
            f"verify exits: run {code}, unknown {unknown}, degenerate {k0}",
        )

    def normal_form_subcommand():
        from .lattice import DivisorChain

        rows = _canonical_basis(DivisorChain((1, 2)))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "basis.json")
            with open(path, "w") as fh:
                fh.write(basis_to_json(rows))
            code, out, _ = run_cli(["normal-form", "--basis", path])
            data = json.loads(out)
            ok = code == 0 and data["l"] == [1, 2] and abs(data["d"] - 1.0) < 1e-12
            rows2 = _canonical_basis(DivisorChain((1,)), d=3)
            path2 = os.path.join(tmp, "scaled.json")
            with open(path2, "w") as fh:
                fh.write(basis_to_json(rows2))
            code2, out2, _ = run_cli(["normal-form", "--basis", path2])
            data2 = json.loads(out2)
            ok = ok and code2 == 0 and abs(data2["d"] - 3.0) < 1e-12
            bad = [[1, 0], [2, 0]]
            path3 = os.path.join(tmp, "bad.json")
            with open(path3, "w") as fh:
                fh.write(json.dumps({"n": 1, "basis": [["1", "0"], ["2", "0"]]}))
            code3, out3, _ = run_cli(["normal-form", "--basis", path3])
            degenerate_ok = code3 == 2 and "error" in json.loads(out3)
            del bad
        return (
            0.0 if (ok and degenerate_ok) else 1.0,
            0.0,
            "canonical, scaled, and degenerate inputs",
        )

    return [
        ("eval-values", eval_values),
        ("eval-complex-and-csv", eval_complex_and_csv),
        ("eval-error-paths", eval_error_paths),
        ("verify-subcommand", verify_subcommand),
        ("normal-form-subcommand", normal_form_subcommand),
    ]


# ---------------------------------------------------------------------------
# registry

@dataclass(frozen=True)
class _SuiteDef:
    summary: str
    ops: tuple
    builder: object
    uses_k: bool = False
    default_t: float = None
    default_k: int = 1


SUITES = {
    "hgroup": _SuiteDef(
        "group law, unitary action, and operator matrices on the layer group",
        ("hgroup.group_mul", "hgroup.schrodinger_apply", "hgroup.hermite_matrix"),
        _suite_hgroup,
    ),
    "thm2.2": _SuiteDef(
        "exact lattice classification: canonical chains, scaling, module equality",
        (
            "lattice.make_gamma_l",
            "lattice.beta",
            "lattice.symplectic_gram",
            "lattice.normal_form",
            "lattice.ak_elements",
        ),
        _suite_lattice,
        uses_k=True,
    ),
    "prop2.4": _SuiteDef(
        "periodization isometry and the orthogonal sector decomposition",
        (
            "weilbrezin.weil_brezin",
            "weilbrezin.twist_j",
            "weilbrezin.project_sector",
            "hgroup.schrodinger_apply",
        ),
        _suite_prop24,
        uses_k=True,
    ),
    "prop2.5": _SuiteDef(
        "invariant node distributions: lattice invariance and node-sum values",
        ("weilbrezin.nu_j_apply",),
        _suite_prop25,
        uses_k=True,
    ),
    "prop2.6": _SuiteDef(
        "moving-frame factorization of the node pairing and sector inversion",
        (
            "weilbrezin.prop26_check",
            "weilbrezin.invert_sector",
            "weilbrezin.weil_brezin",
        ),
        _suite_prop26,
        uses_k=True,
    ),
    "prop2.7": _SuiteDef(
        "weighted-norm orthogonality and completeness across sectors",
        ("bergman.bergman_norm_sq", "weilbrezin.weil_brezin"),
        _suite_prop27,
        uses_k=True,
        default_t=0.04,
        default_k=2,
    ),
    "thm2.8": _SuiteDef(
        "weighted-norm to plain-norm ratio constancy for smoothed sector images",
        ("bergman.thm28_ratio", "bergman.bergman_norm_sq"),
        _suite_thm28,
        uses_k=True,
        default_t=0.04,
    ),
    "heat": _SuiteDef(
        "kernel mass, semigroup, evolution equation, holomorphy, slices",
        ("heat.eval_kt", "heat.eval_kt_lambda", "heat.eval_qt", "heat.heat_transform"),
        _suite_heat,
        default_t=0.3,
    ),
    "radon": _SuiteDef(
        "central-fiber reduction: closed forms, kernel slices, convolutions, norms",
        ("htype.radon", "htype.modified_radon", "heat.eval_qt", "heat.eval_kt"),
        _suite_radon,
        default_t=0.15,
    ),
    "htype-axioms": _SuiteDef(
        "structure axioms of the built-in examples and the frame algebra",
        (
            "htype.make_quaternionic",
            "htype.validate_htype",
            "htype.sigma_omega",
            "htype.alpha_omega_apply",
        ),
        _suite_htype_axioms,
    ),
    "lemma3.5": _SuiteDef(
        "adapted frames and reduced representation matrices",
        (
            "htype.pi_lambda_omega_matrix",
            "hgroup.hermite_matrix",
            "htype.radon",
            "htype.sigma_omega",
        ),
        _suite_lemma35,
    ),
    "thm3.4": _SuiteDef(
        "weighted square-integral constancy of continued representation matrices",
        ("htype.thm34_integral",),
        _suite_thm34,
        default_t=0.18,
    ),
    "gamma-omega": _SuiteDef(
        "lattice projection to the layer group and sectors on the image chain",
        (
            "htype.project_lattice",
            "lattice.beta",
            "lattice.normal_form",
            "lattice.make_gamma_l",
            "weilbrezin.weil_brezin",
            "weilbrezin.project_sector",
        ),
        _suite_gamma_omega,
    ),
    "interfaces": _SuiteDef(
        "command-line surface: evaluation, verification, normal forms",
        ("cli.cmd_eval", "cli.cmd_verify", "cli.cmd_normal_form"),
        _suite_interfaces,
    ),
}


def available_suites():
    """Suite identifiers in registry order, including the aggregate."""
    return list(SUITES) + ["all"]


def suite_summary(suite):
    if suite == "all":
        return "every suite in sequence plus the operation-coverage ledger"
    return SUITES[suite].summary


def suite_operations(suite):
    if suite == "all":
        return tuple(sorted(covered_operations()))
    return SUITES[suite].ops


def covered_operations():
    ops = set()
    for sd in SUITES.values():
        ops.update(sd.ops)
    return ops


def missing_operations():
    return OPERATIONS - covered_operations()


def _resolve_params(suite, k, l, t):
    from .lattice import DivisorChain

    sd = SUITES[suite]
    k = sd.default_k if k is None else int(k)
    if sd.uses_k and k == 0:
        raise DegenerateCentralCharacterError("k=0 sector out of scope")
    chain = DivisorChain(tuple(int(v) for v in l)) if l is not None else DivisorChain((1,))
    t = sd.default_t if t is None else float(t)
    return k, chain, t


def run_suite(suite, *, k=None, l=None, t=None, tol=None, seed=0, workers=1):
    """Run one suite (or ``all``) and return its :class:`SuiteReport`.

    ``k``, ``l`` and ``t`` override the suite defaults where the suite
    consumes them; ``tol`` can loosen (never tighten) the per-check
    tolerances; ``seed`` fixes every randomized probe; ``workers`` > 1
    runs independent checks concurrently (results are seeded per check,
    so the report does not depend on scheduling).
    """
    if suite == "all":
        return _run_all(k=k, l=l, t=t, tol=tol, seed=seed, workers=workers)
    if suite not in SUITES:
        raise KeyError(
            f"unknown suite {suite!r}; available: {', '.join(available_suites())}"
        )
    sd = SUITES[suite]
    rk, chain, rt = _resolve_params(suite, k, l, t)
    ctx = _Ctx(rk, chain, rt, tol, int(seed))
    start = time.perf_counter()
    checks = _run_checks(sd.builder(ctx), ctx, workers)
    runtime = time.perf_counter() - start
    return SuiteReport(
        suite=suite,
        summary=sd.summary,
        seed=int(seed),
        params={
            "k": rk,
            "l": list(chain.values),
            "t": rt,
            "tol": tol,
        },
        ops=tuple(sd.ops),
        checks=tuple(checks),
        runtime=runtime,
        passed=all(c.passed for c in checks),
    )


def _run_all(*, k, l, t, tol, seed, workers):
    start = time.perf_counter()
    checks = []
    for suite in SUITES:
        rep = run_suite(
            suite, k=k, l=l, t=t, tol=tol, seed=seed, workers=workers
        )
        for c in rep.checks:
            checks.append(
                CheckResult(
                    name=f"{suite}/{c.name}",
                    residual=c.residual,
                    tolerance=c.tolerance,
                    passed=c.passed,
                    runtime=c.runtime,
                    detail=c.detail,
                )
            )
    missing = sorted(missing_operations())
    checks.append(
        CheckResult(
            name="operation-coverage",
            residual=float(len(missing)),
            tolerance=0.0,
            passed=not missing,
            runtime=0.0,
            detail="all operations claimed" if not missing else f"missing: {missing}",
        )
    )
    runtime = time.perf_counter() - start
    return SuiteReport(
        suite="all",
        summary=suite_summary("all"),
        seed=int(seed),
        params={
            "k": k,
            "l": list(l) if l is not None else None,
            "t": t,
            "tol": tol,
        },
        ops=tuple(sorted(covered_operations())),
        checks=tuple(checks),
        runtime=runtime,
        passed=all(c.passed for c in checks),
    )
