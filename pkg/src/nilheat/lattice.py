"""Lattices in the polarized Heisenberg group: construction, invariants,
and the exact symplectic normal form.

Everything here is exact: coordinates are ints or fractions, the skew
congruence reduction runs over arbitrary-precision integers, and the
returned change-of-basis data reconstructs the input basis exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DegenerateCentralCharacterError,
    ExactArithmeticError,
    NotLatticeError,
)
from .hgroup import GroupPoint, group_mul

__all__ = [
    "DivisorChain",
    "make_gamma_l",
    "lattice_contains",
    "lambda_k",
    "ak_elements",
    "beta",
    "symplectic_gram",
    "NormalForm",
    "normal_form",
    "random_symplectic",
    "basis_to_json",
    "basis_from_json",
    "normal_form_to_json",
]


@dataclass(frozen=True)
class DivisorChain:
    """Positive integers l_1 | l_2 | ... | l_n."""

    values: tuple

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if not vals or any(v <= 0 for v in vals):
            raise NotLatticeError("divisor chain entries must be positive")
        for a, b in zip(vals, vals[1:]):
            if b % a != 0:
                raise NotLatticeError(f"chain not divisible: {a} does not divide {b}")
        object.__setattr__(self, "values", vals)

    @property
    def n(self):
        return len(self.values)

    @property
    def ratios(self):
        """p_i = l_i / l_1 (p_1 = 1)."""
        return tuple(v // self.values[0] for v in self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


def make_gamma_l(chain):
    """Generators of the lattice Z^n x (l_1 Z x ... x l_n Z) x (l_1/2) Z.

    Returns 2n+1 group elements: the 2n horizontal generators
    (e_i, 0, 0) and (0, l_i e_i, 0), plus the explicit central generator
    (0, 0, l_1/2).  The central generator is not redundant: every word in
    the horizontal generators has central part in which the two parities
    of 2 xi and x.u are locked together, so the horizontal generators
    alone produce only an index-two subgroup.
    """
    chain = chain if isinstance(chain, DivisorChain) else DivisorChain(tuple(chain))
    n = chain.n
    gens = []
    for i in range(n):
        x = tuple(1 if d == i else 0 for d in range(n))
        gens.append(GroupPoint(x, (0,) * n, 0))
    for i in range(n):
        u = tuple(chain[i] if d == i else 0 for d in range(n))
        gens.append(GroupPoint((0,) * n, u, 0))
    gens.append(GroupPoint((0,) * n, (0,) * n, Fraction(chain[0], 2)))
    return gens


def lattice_contains(chain, g, tol=0):
    """Exact membership of g in the lattice of ``make_gamma_l(chain)``."""
    chain = chain if isinstance(chain, DivisorChain) else DivisorChain(tuple(chain))

    def integral(value, step):
        q = Fraction(value) / step
        return q.denominator == 1

    return (
        all(integral(c, 1) for c in g.x)
        and all(integral(c, chain[i]) for i, c in enumerate(g.u))
        and integral(g.xi, Fraction(chain[0], 2))
    )


def lambda_k(k, chain):
    """Central character parameter of the k-th nondegenerate class."""
    k = int(k)
    if k == 0:
        raise DegenerateCentralCharacterError("k = 0 sector out of scope")
    chain = chain if isinstance(chain, DivisorChain) else DivisorChain(tuple(chain))
    return 4.0 * math.pi * k / chain[0]


def ak_elements(k, chain):
    """Index tuples of the multiplicity torus: ranges (2|k|, 2|k| p_2, ...)."""
    import itertools

    k = int(k)
    if k == 0:
        raise DegenerateCentralCharacterError("k = 0 sector out of scope")
    chain = chain if isinstance(chain, DivisorChain) else DivisorChain(tuple(chain))
    ranges = [range(2 * abs(k) * p) for p in chain.ratios]
    return [tuple(t) for t in itertools.product(*ranges)]


# ---------------------------------------------------------------------------
# smallest positive central value


def beta(generators, max_word=6):
    """Smallest positive central coordinate over words of bounded length.

    Breadth-first search over products of the generators and their
    inverses, in exact integer-scaled coordinates.  Raises
    NotLatticeError when no positive central value is reached.
    """
    if not generators:
        raise NotLatticeError("no generators")
    n = generators[0].n
    dens = [1]
    for g in generators:
        for c in g.x + g.u:
            dens.append(Fraction(c).denominator)
        dens.append(Fraction(g.xi).denominator)
    D = math.lcm(*dens)
    # scaled coords: x' = D x, u' = D u, z' = 2 D^2 xi are all integers,
    # and the law becomes z'' = z'_g + z'_h + (x'_h.u'_g - x'_g.u'_h)
    gens = []
    for g in generators:
        x = tuple(int(D * Fraction(c)) for c in g.x)
        u = tuple(int(D * Fraction(c)) for c in g.u)
        z = int(2 * D * D * Fraction(g.xi))
        gens.append((x, u, z))
        gens.append((tuple(-c for c in x), tuple(-c for c in u), -z))

    def mul(a, b):
        ax, au, az = a
        bx, bu, bz = b
        cross = sum(p * q for p, q in zip(bx, au)) - sum(
            p * q for p, q in zip(ax, bu)
        )
        return (
            tuple(p + q for p, q in zip(ax, bx)),
            tuple(p + q for p, q in zip(au, bu)),
            az + bz + cross,
        )

    zero = ((0,) * n, (0,) * n, 0)
    seen = {zero}
    frontier = [zero]
    best = None
    for _ in range(max_word):
        nxt = []
        for el in frontier:
            for g in gens:
                w = mul(el, g)
                if w in seen:
                    continue
                seen.add(w)
                nxt.append(w)
                if w[2] > 0 and all(c == 0 for c in w[0] + w[1]):
                    val = Fraction(w[2], 2 * D * D)
                    if best is None or val < best:
                        best = val
        frontier = nxt
    if best is None:
        raise NotLatticeError(
            f"no positive central value within word length {max_word}"
        )
    return best


# ---------------------------------------------------------------------------
# symplectic Gram data and the exact normal form


def _as_fraction_matrix(basis):
    try:
        return [[Fraction(c) for c in row] for row in basis]
    except (TypeError, ValueError) as exc:
        raise ExactArithmeticError(
            "normal form requires exact rational input"
        ) from exc


def symplectic_gram(basis):
    """Pairwise symplectic products of basis vectors, plus their gcd.

    ``basis`` is a sequence of 2n rational vectors in R^2n (rows).
    Returns (S, g): S[i][j] = omega(b_i, b_j) as fractions, and g > 0 the
    positive generator of the subgroup of central values the vectors
    reach.  Raises NotLatticeError when the form degenerates on the span.
    """
    B = _as_fraction_matrix(basis)
    m = len(B)
    if m == 0 or any(len(row) != m for row in B):
        raise NotLatticeError("need 2n vectors of dimension 2n")
    if m % 2 != 0:
        raise NotLatticeError("odd number of basis vectors")
    n = m // 2

    def omega(a, b):
        return sum(a[i] * b[n + i] - a[n + i] * b[i] for i in range(n))

    S = [[omega(B[i], B[j]) for j in range(m)] for i in range(m)]
    nums = [abs(S[i][j].numerator) for i in range(m) for j in range(m) if S[i][j] != 0]
    if not nums:
        raise NotLatticeError("symplectic form vanishes on the span")
    dens = [S[i][j].denominator for i in range(m) for j in range(m)]
    g = Fraction(math.gcd(*nums), math.lcm(*dens))
    if _fraction_det(S) == 0:
        raise NotLatticeError("degenerate symplectic Gram matrix")
    return S, g


def _fraction_det(M):
    M = [row[:] for row in M]
    m = len(M)
    det = Fraction(1)
    for c in range(m):
        p = next((r for r in range(c, m) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, m):
            f = M[r][c] * inv
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


def _skew_normal_form(S):
    """W unimodular with W^T S W = [[0, diag mu], [-diag mu, 0]], mu_i > 0,
    mu_1 | mu_2 | ... ; S an even-size nonsingular integer skew matrix."""
    m = len(S)
    S = [row[:] for row in S]
    W = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def colop(dst, src, q):
        # col_dst += q col_src, with the paired row operation
        for r in range(m):
            S[r][dst] += q * S[r][src]
        for r in range(m):
            S[dst][r] += q * S[src][r]
        for r in range(m):
            W[r][dst] += q * W[r][src]

    def swap(i, j):
        if i == j:
            return
        for r in range(m):
            S[r][i], S[r][j] = S[r][j], S[r][i]
        S[i], S[j] = S[j], S[i]
        for r in range(m):
            W[r][i], W[r][j] = W[r][j], W[r][i]

    def negate(i):
        for r in range(m):
            S[r][i] = -S[r][i]
        for r in range(m):
            S[i][r] = -S[i][r]
        for r in range(m):
            W[r][i] = -W[r][i]

    mus = []
    for base in range(0, m, 2):
        while True:
            # minimal nonzero entry of the active block to the pivot slot
            best = None
            for i in range(base, m):
                for j in range(base, m):
                    v = S[i][j]
                    if v != 0 and (best is None or abs(v) < abs(best[2])):
                        best = (i, j, v)
            if best is None:
                raise NotLatticeError("skew reduction hit a zero block")
            i, j, _ = best
            swap(i, base)
            swap(j if j != base else i, base + 1)
            if S[base][base + 1] < 0:
                negate(base + 1)
            # clear rows base, base+1 beyond the 2x2 block
            dirty = False
            for c in range(base + 2, m):
                p = S[base][base + 1]
                q, r = divmod(S[base][c], p)
                colop(c, base + 1, -q)
                if r != 0:
                    dirty = True
                q, r = divmod(S[base + 1][c], -p)
                colop(c, base, -q)
                if r != 0:
                    dirty = True
            if dirty:
                continue
            # divisibility sweep: pull a non-multiple into the pivot rows
            p = S[base][base + 1]
            bad = None
            for i in range(base + 2, m):
                for j in range(base + 2, m):
                    if S[i][j] % p != 0:
                        bad = (i, j)
                        break
                if bad:
                    break
            if bad is None:
                mus.append(p)
                break
            colop(base, bad[1], 1)

    # pair blocks -> [[0, diag mu], [-diag mu, 0]] column order
    n = m // 2
    perm = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    S2 = [[S[perm[i]][perm[j]] for j in range(m)] for i in range(m)]
    W2 = [[W[r][perm[c]] for c in range(m)] for r in range(m)]
    # exact verification of the reduced form
    for i in range(m):
        for j in range(m):
            want = 0
            if i < n and j == n + i:
                want = mus[i]
            elif i >= n and j == i - n:
                want = -mus[i - n]
            if S2[i][j] != want:
                raise ExactArithmeticError("skew reduction self-check failed")
    return W2, mus


@dataclass(frozen=True)
class NormalForm:
    """Exact classification data of a rational symplectic lattice basis.

    The basis columns B satisfy B X = A . (d E(l)) for an integer
    unimodular X, where E(l) = diag(1, ..., 1, l_1, ..., l_n), A is
    symplectic, l is the canonical divisor chain (l_1 = 1) and d > 0.
    ``d`` may be irrational; ``d2 = d**2`` and ``Ad = d A`` are exact.
    """

    chain: DivisorChain
    d2: Fraction
    Ad: tuple
    mu: tuple
    tau: int
    W: tuple

    @property
    def d(self):
        return math.sqrt(self.d2)

    @property
    def A(self):
        d = self.d
        return np.array([[float(c) / d for c in row] for row in self.Ad])

    @property
    def d_exact(self):
        """Exact d when d2 is a perfect rational square, else None."""
        p, q = self.d2.numerator, self.d2.denominator
        sp, sq = math.isqrt(p), math.isqrt(q)
        if sp * sp == p and sq * sq == q:
            return Fraction(sp, sq)
        return None


def normal_form(basis):
    """Classify a rational symplectic lattice given by 2n basis vectors.

    Input rows span the vector lattice; the central direction is implied.
    Returns a NormalForm; the reduction is exact throughout.
    """
    B = _as_fraction_matrix(basis)
    S, _ = symplectic_gram(basis)
    m = len(B)
    n = m // 2
    tau = math.lcm(*[S[i][j].denominator for i in range(m) for j in range(m)])
    Sint = [[int(S[i][j] * tau) for j in range(m)] for i in range(m)]
    W, mus = _skew_normal_form(Sint)
    chain = DivisorChain(tuple(v // mus[0] for v in mus))
    d2 = Fraction(mus[0], tau)
    # basis rows are vectors; the frame matrix has them as columns,
    # F = B^T, and the reduced frame is F W with u-block columns
    # rescaled by 1/l_i
    F = [[B[c][r] for c in range(m)] for r in range(m)]
    FW = [
        [sum(F[r][k] * W[k][c] for k in range(m)) for c in range(m)]
        for r in range(m)
    ]
    Ad = tuple(
        tuple(
            FW[r][c] / (chain[c - n] if c >= n else 1) for c in range(m)
        )
        for r in range(m)
    )
    # exact symplectic check: Gram of Ad columns must equal d2 J
    def omega_cols(c1, c2):
        return sum(
            Ad[i][c1] * Ad[n + i][c2] - Ad[n + i][c1] * Ad[i][c2]
            for i in range(n)
        )

    for c1 in range(m):
        for c2 in range(m):
            want = Fraction(0)
            if c2 == c1 + n:
                want = d2
            elif c1 == c2 + n:
                want = -d2
            if omega_cols(c1, c2) != want:
                raise ExactArithmeticError("normal form symplectic check failed")
    return NormalForm(
        chain=chain,
        d2=d2,
        Ad=Ad,
        mu=tuple(mus),
        tau=tau,
        W=tuple(tuple(row) for row in W),
    )


def random_symplectic(n, rng, steps=6, span=2):
    """Random integer symplectic matrix as a word in elementary factors."""
    m = 2 * n
    J = [[0] * m for _ in range(m)]
    for i in range(n):
        J[i][n + i] = 1
        J[n + i][i] = -1

    def matmul(A, B):
        return [
            [sum(A[r][k] * B[k][c] for k in range(m)) for c in range(m)]
            for r in range(m)
        ]

    M = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    for _ in range(steps):
        kind = rng.integers(0, 3)
        if kind == 0:
            # [[I, B], [0, I]] with B symmetric
            Bm = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    v = int(rng.integers(-span, span + 1))
                    Bm[i][j] = Bm[j][i] = v
            E = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
            for i in range(n):
                for j in range(n):
                    E[i][n + j] = Bm[i][j]
        elif kind == 1:
            # [[A, 0], [0, A^-T]] with A an elementary unimodular matrix
            A = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
            if n > 1:
                i, j = rng.choice(n, size=2, replace=False)
                A[int(i)][int(j)] = int(rng.integers(-span, span + 1))
            AiT = _int_inverse_transpose(A)
            E = [[0] * m for _ in range(m)]
            for i in range(n):
                for j in range(n):
                    E[i][j] = A[i][j]
                    E[n + i][n + j] = AiT[i][j]
        else:
            E = J
        M = matmul(M, E)
    return M


def _int_inverse_transpose(A):
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] for i in range(n)]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        inv[c], inv[p] = inv[p], inv[c]
        f = 1 / M[c][c]
        M[c] = [v * f for v in M[c]]
        inv[c] = [v * f for v in inv[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
                inv[r] = [a - f * b for a, b in zip(inv[r], inv[c])]
    return [[int(inv[j][i]) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# JSON interchange


def basis_to_json(basis):
    B = _as_fraction_matrix(basis)
    return json.dumps(
        {
            "n": len(B) // 2,
            "basis": [[str(c) for c in row] for row in B],
        }
    )


def basis_from_json(text):
    data = json.loads(text)
    basis = [[Fraction(c) for c in row] for row in data["basis"]]
    if len(basis) != 2 * int(data["n"]):
        raise NotLatticeError("basis count does not match n")
    return basis


def normal_form_to_json(nf):
    return json.dumps(
        {
            "l": list(nf.chain.values),
            "d": nf.d,
            "d2": str(nf.d2),
            "A": [[float(c) / nf.d for c in row] for row in nf.Ad],
            "Ad": [[str(c) for c in row] for row in nf.Ad],
        }
    )
