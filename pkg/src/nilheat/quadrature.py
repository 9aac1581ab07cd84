"""Quadrature rules used across the package.

Conventions
-----------
All rules return ``(nodes, weights)`` such that ``integral ~ f(nodes) @
weights``.  Gauss-Hermite rules are returned in "physical" form: the
weights already contain the inverse of the Gaussian factor, so they
integrate plain functions ``int_R f(s) ds`` for integrands decaying at
least like ``exp(-rate * s^2)``.

Sphere rules are Lebedev grids with weights summing to one (the mean over
the sphere); multiply by ``4 pi`` for the surface integral.
"""

import numpy as np

from .errors import QuadratureError

_SQ2 = np.sqrt(2.0)


def gauss_legendre(n, a=-1.0, b=1.0):
    """Gauss-Legendre rule with ``n`` nodes on ``[a, b]``."""
    x, w = np.polynomial.legendre.leggauss(int(n))
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def gauss_hermite(n, rate=1.0, center=0.0):
    """Gauss-Hermite rule adapted to decay ``exp(-rate (s-center)^2)``.

    Returns nodes/weights for ``int_R f(s) ds`` where ``f`` decays at least
    at the given Gaussian rate.  Weights carry the ``exp(x^2)`` factor.
    """
    if rate <= 0:
        raise ValueError("rate must be positive")
    x, w = np.polynomial.hermite.hermgauss(int(n))
    s = np.sqrt(rate)
    return center + x / s, w * np.exp(x * x) / s


def trapezoid_periodic(n, period=1.0):
    """Equispaced rule, exact for trigonometric polynomials of degree < n."""
    x = np.arange(n) * (period / n)
    w = np.full(n, period / n)
    return x, w


def tensor_rule(rules):
    """Tensor product of 1-d ``(nodes, weights)`` rules.

    Returns ``(points, weights)`` with ``points`` of shape ``(P, len(rules))``.
    """
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    w = rules[0][1]
    for r in rules[1:]:
        w = np.outer(w, r[1]).ravel()
    return pts, w


def refine_stable(evaluate, order, tol, factor=2, floor=0.0, label=""):
    """Evaluate at two refinement levels and insist they agree.

    ``evaluate(order)`` must return a scalar (possibly complex).  Raises
    :class:`QuadratureError` when the two levels differ by more than
    ``tol`` relative to the finer value (or ``floor`` if larger).
    """
    coarse = evaluate(order)
    fine = evaluate(int(np.ceil(order * factor)))
    scale = max(abs(fine), floor)
    if scale == 0.0:
        return fine
    if abs(fine - coarse) > tol * scale:
        raise QuadratureError(
            f"quadrature did not stabilize{' for ' + label if label else ''}: "
            f"order {order} gave {coarse}, refined gave {fine}",
            coarse=coarse,
            fine=fine,
        )
    return fine


# Lebedev grids on S^2.  Orders 6, 14, 26, 38, 50 cover the default grid and
# its refinement steps.  Weights are exact rationals where known; the grids
# integrate spherical polynomials exactly up to the stated degree and the
# test suite checks that on monomials.

def _orbit_vertices():
    pts = []
    for i in range(3):
        for s in (1.0, -1.0):
            p = [0.0, 0.0, 0.0]
            p[i] = s
            pts.append(p)
    return np.array(pts)


def _orbit_edges():
    c = 1.0 / _SQ2
    pts = []
    for i in range(3):
        j, k = [a for a in range(3) if a != i]
        for si in (1.0, -1.0):
            for sj in (1.0, -1.0):
                p = [0.0, 0.0, 0.0]
                p[j] = si * c
                p[k] = sj * c
                pts.append(p)
    return np.array(pts)


def _orbit_corners():
    c = 1.0 / np.sqrt(3.0)
    pts = []
    for sx in (1.0, -1.0):
        for sy in (1.0, -1.0):
            for sz in (1.0, -1.0):
                pts.append([sx * c, sy * c, sz * c])
    return np.array(pts)


def _orbit_pq0(p):
    q = np.sqrt(1.0 - p * p)
    pts = []
    for i in range(3):
        j = (i + 1) % 3
        for sp in (1.0, -1.0):
            for sq in (1.0, -1.0):
                a = [0.0, 0.0, 0.0]
                a[i] = sp * p
                a[j] = sq * q
                pts.append(a)
                b = [0.0, 0.0, 0.0]
                b[i] = sq * q
                b[j] = sp * p
                pts.append(b)
    arr = np.array(pts)
    # the double loop above emits each of the 24 distinct points once
    return arr


def _orbit_ppq(p):
    q = np.sqrt(1.0 - 2.0 * p * p)
    pts = []
    for i in range(3):  # position of the q component
        for sq in (1.0, -1.0):
            for s1 in (1.0, -1.0):
                for s2 in (1.0, -1.0):
                    a = [0.0, 0.0, 0.0]
                    idx = [j for j in range(3) if j != i]
                    a[idx[0]] = s1 * p
                    a[idx[1]] = s2 * p
                    a[i] = sq * q
                    pts.append(a)
    return np.array(pts)


def lebedev(order):
    """Lebedev grid with the given point count (6, 14, 26, 38 or 50).

    Returns ``(points, weights)`` with weights summing to 1.
    """
    if order == 6:
        pts = _orbit_vertices()
        w = np.full(6, 1.0 / 6.0)
    elif order == 14:
        pts = np.vstack([_orbit_vertices(), _orbit_corners()])
        w = np.concatenate([np.full(6, 1.0 / 15.0), np.full(8, 3.0 / 40.0)])
    elif order == 26:
        pts = np.vstack([_orbit_vertices(), _orbit_edges(), _orbit_corners()])
        w = np.concatenate(
            [np.full(6, 1.0 / 21.0), np.full(12, 4.0 / 105.0), np.full(8, 27.0 / 840.0)]
        )
    elif order == 38:
        pts = np.vstack(
            [_orbit_vertices(), _orbit_corners(), _orbit_pq0(0.4597008433809831)]
        )
        w = np.concatenate(
            [np.full(6, 1.0 / 105.0), np.full(8, 9.0 / 280.0), np.full(24, 1.0 / 35.0)]
        )
    elif order == 50:
        pts = np.vstack(
            [
                _orbit_vertices(),
                _orbit_edges(),
                _orbit_corners(),
                _orbit_ppq(1.0 / np.sqrt(11.0)),
            ]
        )
        w = np.concatenate(
            [
                np.full(6, 4.0 / 315.0),
                np.full(12, 64.0 / 2835.0),
                np.full(8, 27.0 / 1280.0),
                np.full(24, 14641.0 / 725760.0),
            ]
        )
    else:
        raise ValueError(f"no Lebedev grid with {order} points (use 6/14/26/38/50)")
    return pts, w


LEBEDEV_ORDERS = (6, 14, 26, 38, 50)


def lebedev_next(order):
    """The next finer Lebedev grid size, for refinement checks."""
    idx = LEBEDEV_ORDERS.index(order)
    if idx + 1 >= len(LEBEDEV_ORDERS):
        raise ValueError(f"no finer grid than {order}")
    return LEBEDEV_ORDERS[idx + 1]
