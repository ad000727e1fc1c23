"""Exact and numeric recognizers for approximate progressions and cubes.

The 1-D recognizer decides, in exact rational arithmetic, whether k strictly
increasing integers fit inside open balls of radius eps*d around some real
progression a, a+d, ..., a+(k-1)d.  Feasibility is decided by maximizing the
common slack

    margin(d) = eps*d - (max_i(x_i - i*d) - min_i(x_i - i*d)) / 2

over d > 0.  The margin is concave and piecewise linear in d, so its maximum
is attained at one of the O(k^2) pairwise slopes (x_j - x_i)/(j - i); a
positive maximum is equivalent to strict feasibility, and the midrange of
{x_i - i*d} at the optimum gives the intercept a.

The m-D recognizer cannot stay rational (the constraints are Euclidean
balls), so it minimizes g(d) = R(d) - eps*d numerically, where R(d) is the
smallest-enclosing-ball radius of the translated family {x_v - d*v}.  R is a
partial minimization of a jointly convex function, hence g is convex, and the
verdict is three-valued (feasible / infeasible / boundary) with an explicit
tolerance.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Optional, Sequence

from .rational import to_fraction

__all__ = [
    "Witness1D",
    "WitnessMD",
    "IndexedGrid",
    "CubeDecision",
    "FeasibleRegion2D",
    "IndexingError",
    "check_epsilon",
    "check_points_1d",
    "recognize_ap",
    "gap_ratio_filter",
    "region_new",
    "region_add_point",
    "region_closed_empty",
    "min_enclosing_ball",
    "recognize_cube",
    "index_grid_points",
    "grid_from_points_1d",
]


class IndexingError(ValueError):
    """A point set cannot be unambiguously indexed as a grid."""


def check_epsilon(eps, *, set_level: bool = False) -> Fraction:
    """Validate an approximation parameter and return it as a Fraction.

    Set-level recognition additionally requires eps < 1/2: below that bound
    the balls around a+i*d are pairwise disjoint, so sorted order is the only
    possible indexing.  At eps >= 1/2 the indexing is ambiguous and set-level
    questions are refused rather than guessed.
    """
    e = to_fraction(eps)
    if e <= 0:
        raise ValueError(f"eps must be positive, got {e}")
    if set_level and e >= Fraction(1, 2):
        raise ValueError(
            f"set-level recognition requires eps < 1/2 (got {e}): "
            "the index permutation is ambiguous otherwise"
        )
    return e


def check_points_1d(points) -> tuple:
    """Validate a strictly increasing sequence of at least two integers."""
    pts = tuple(points)
    if len(pts) < 2:
        raise ValueError(f"need at least 2 points, got {len(pts)}")
    for p in pts:
        if isinstance(p, bool) or not isinstance(p, int):
            raise TypeError(f"points must be integers, got {p!r}")
    for a, b in zip(pts, pts[1:]):
        if a >= b:
            raise ValueError(f"points must be strictly increasing, got {a} >= {b}")
    return pts


@dataclass(frozen=True)
class Witness1D:
    """An exact certificate (a, d) for a 1-D approximate progression.

    margin = eps*d - spread(d)/2 where spread(d) is the range of the offsets
    x_i - i*d; it is positive exactly when every residual |x_i - (a + i*d)|
    is strictly below eps*d.
    """

    a: Fraction
    d: Fraction
    margin: Fraction

    def residuals(self, points: Sequence[int]) -> tuple:
        return tuple(abs(x - (self.a + i * self.d)) for i, x in enumerate(points))

    def certifies(self, points: Sequence[int], eps) -> bool:
        """Exact strict check of the defining inequalities."""
        e = check_epsilon(eps)
        if self.d <= 0:
            return False
        bound = e * self.d
        return all(r < bound for r in self.residuals(points))


def _margin_at(pts: tuple, e: Fraction, d: Fraction):
    offs = [x - i * d for i, x in enumerate(pts)]
    hi, lo = max(offs), min(offs)
    return e * d - Fraction(hi - lo, 2), hi, lo


def recognize_ap(points, eps) -> Optional[Witness1D]:
    """Decide exactly whether the points form an approximate progression.

    Returns the margin-maximizing witness (smallest optimal d; the intercept
    a is then the unique midrange), or None when the maximum margin is <= 0,
    i.e. when no (a, d) with d > 0 satisfies every strict inequality
    |x_i - (a + i*d)| < eps*d.

    Points are taken in sorted order as x_0 < x_1 < ... < x_{k-1}; for
    eps < 1/2 this is the only indexing a witness can use.  Any positive eps
    is accepted here (indexed recognition); set-level callers enforce
    eps < 1/2 themselves.
    """
    pts = check_points_1d(points)
    e = check_epsilon(eps)
    k = len(pts)

    breaks = sorted(
        {Fraction(pts[j] - pts[i], j - i) for i in range(k) for j in range(i + 1, k)}
    )

    best = best_hi = best_lo = best_d = None
    for d in breaks:
        m, hi, lo = _margin_at(pts, e, d)
        if best is None or m > best:
            best, best_hi, best_lo, best_d = m, hi, lo, d

    # Slope of the margin on the final ray: beyond the last breakpoint the
    # extreme offsets are i=0 and i=k-1, so spread grows at rate k-1.
    tail_slope = e - Fraction(k - 1, 2)
    if tail_slope > 0:
        # The slack is unbounded above (only reachable for eps >= (k-1)/2,
        # i.e. indexed recognition with a huge eps); no maximizer exists, so
        # return a canonical finite witness: the smallest breakpoint with
        # positive margin, else the point on the final ray where the margin
        # reaches 1.
        for d in breaks:
            m, hi, lo = _margin_at(pts, e, d)
            if m > 0:
                break
        else:
            d0 = breaks[-1]
            m0, _, _ = _margin_at(pts, e, d0)
            d = d0 + (1 - m0) / tail_slope
            m, hi, lo = _margin_at(pts, e, d)
        return Witness1D(a=Fraction(hi + lo, 2), d=d, margin=m)

    if best <= 0:
        return None
    return Witness1D(a=Fraction(best_hi + best_lo, 2), d=best_d, margin=best)


def gap_ratio_filter(points, eps) -> bool:
    """Necessary consecutive-gap test for approximate progressions.

    True iff every ratio of consecutive gaps lies strictly inside
    (1 - 5*eps, 1 + 5*eps).  For eps < 1/10 a False verdict guarantees that
    recognize_ap rejects; with fewer than 3 points the test is vacuous.
    """
    pts = check_points_1d(points)
    e = check_epsilon(eps)
    if len(pts) < 3:
        return True
    gaps = [b - a for a, b in zip(pts, pts[1:])]
    hi, lo = max(gaps), min(gaps)
    five = 5 * e
    return Fraction(hi, lo) - 1 < five and 1 - Fraction(lo, hi) < five


# ---------------------------------------------------------------------------
# Incremental closed feasible region in the (a, d) half-plane
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FeasibleRegion2D:
    """Closed relaxation of the witness constraints for a partial tuple.

    The region is the set of (a, d), d >= 0, with
    a + (i - eps)*d <= x_i <= a + (i + eps)*d for every added (i, x_i).
    It is stored by its exact projection onto the d axis (Fourier-Motzkin
    elimination of a): the region is nonempty iff d_lo <= d_hi and no
    degenerate constant constraint failed.  Emptiness of the closed region is
    a sound prune only; open infeasibility is decided by recognize_ap.
    """

    k: int
    eps: Fraction
    points: tuple
    d_lo: Fraction
    d_hi: Optional[Fraction]  # None means unbounded above
    degenerate_infeasible: bool = False

    def contains(self, a, d) -> bool:
        """Exact closed membership test for a candidate (a, d)."""
        av, dv = to_fraction(a), to_fraction(d)
        if dv < 0:
            return False
        for i, x in self.points:
            if not (av + (i - self.eps) * dv <= x <= av + (i + self.eps) * dv):
                return False
        return True


def region_new(k: int, eps) -> FeasibleRegion2D:
    e = check_epsilon(eps)
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return FeasibleRegion2D(k=k, eps=e, points=(), d_lo=Fraction(0), d_hi=None)


def region_add_point(region: FeasibleRegion2D, i: int, x_i: int) -> FeasibleRegion2D:
    """Intersect with the two closed half-planes for index i at point x_i."""
    if not 0 <= i < region.k:
        raise ValueError(f"index {i} out of range for k={region.k}")
    if region.points and i <= region.points[-1][0]:
        raise ValueError("indices must be added in increasing order")
    d_lo, d_hi = region.d_lo, region.d_hi
    degenerate = region.degenerate_infeasible
    # Eliminating a from the pair of box constraints for (j, y) and (i, x)
    # leaves, for each ordered pair, the linear inequality
    #     dst - src <= (i_dst - i_src + 2*eps) * d.
    for j, y in region.points + ((i, x_i),):
        for (ia, xa), (ib, xb) in (((j, y), (i, x_i)), ((i, x_i), (j, y))):
            c = Fraction(ib - ia) + 2 * region.eps
            rhs = Fraction(xb - xa)
            if c > 0:
                bound = rhs / c
                if bound > d_lo:
                    d_lo = bound
            elif c == 0:
                if rhs > 0:
                    degenerate = True
            else:
                bound = rhs / c
                if d_hi is None or bound < d_hi:
                    d_hi = bound
    return FeasibleRegion2D(
        k=region.k,
        eps=region.eps,
        points=region.points + ((i, x_i),),
        d_lo=d_lo,
        d_hi=d_hi,
        degenerate_infeasible=degenerate,
    )


def region_closed_empty(region: FeasibleRegion2D) -> bool:
    if region.degenerate_infeasible:
        return True
    return region.d_hi is not None and region.d_hi < region.d_lo


# ---------------------------------------------------------------------------
# Smallest enclosing ball (Welzl) and the m-D recognizer
# ---------------------------------------------------------------------------

_WELZL_SEED = 0x5EB21  # fixed: results must not depend on interpreter hash state


def _circumsphere(boundary):
    """Ball through all boundary points, centered in their affine hull.

    Solves the Gram system G @ lam = |u_i|^2 / 2 with u_i = p_i - p_0;
    returns None if the points are (numerically) affinely dependent.
    """
    p0 = boundary[0]
    us = [tuple(c - c0 for c, c0 in zip(p, p0)) for p in boundary[1:]]
    n = len(us)
    if n == 0:
        return p0, 0.0
    # Gaussian elimination with partial pivoting on the Gram matrix.
    g = [[sum(a * b for a, b in zip(us[r], us[c])) for c in range(n)] for r in range(n)]
    rhs = [sum(a * a for a in us[r]) / 2.0 for r in range(n)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(g[r][col]))
        if abs(g[piv][col]) < 1e-12:
            return None
        g[col], g[piv] = g[piv], g[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        for r in range(col + 1, n):
            f = g[r][col] / g[col][col]
            for c in range(col, n):
                g[r][c] -= f * g[col][c]
            rhs[r] -= f * rhs[col]
    lam = [0.0] * n
    for r in range(n - 1, -1, -1):
        acc = rhs[r] - sum(g[r][c] * lam[c] for c in range(r + 1, n))
        lam[r] = acc / g[r][r]
    center = tuple(
        c0 + sum(lam[r] * us[r][axis] for r in range(n))
        for axis, c0 in enumerate(p0)
    )
    radius = math.dist(center, p0)
    return center, radius


def _inside(ball, p) -> bool:
    if ball is None:
        return False
    center, radius = ball
    return math.dist(center, p) <= radius * (1 + 1e-12) + 1e-12


def min_enclosing_ball(points):
    """Smallest enclosing Euclidean ball of a finite point list.

    Welzl's expected-linear algorithm with a fixed shuffle seed so repeated
    calls are deterministic.  Returns (center, radius) as floats; containment
    holds up to the usual floating slack.
    """
    pts = [tuple(float(c) for c in p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise ValueError("points must share one dimension")
    rng = random.Random(_WELZL_SEED)
    rng.shuffle(pts)

    def welzl(idx: int, boundary):
        if idx == len(pts) or len(boundary) == dim + 1:
            if not boundary:
                return None
            return _circumsphere(boundary)
        ball = welzl(idx + 1, boundary)
        p = pts[idx]
        if ball is not None and _inside(ball, p):
            return ball
        return welzl(idx + 1, boundary + [p])

    ball = welzl(0, [])
    if ball is None:
        # only possible for a single repeated point after degenerate solves
        return pts[0], 0.0
    return ball


@dataclass(frozen=True)
class IndexedGrid:
    """k^m integer points indexed by vectors v in {0..k-1}^m."""

    m: int
    k: int
    assignment: Mapping

    def __post_init__(self):
        if self.m < 1 or self.k < 2:
            raise ValueError(f"need m >= 1 and k >= 2, got m={self.m}, k={self.k}")
        expected = self.k ** self.m
        keys = set(self.assignment)
        if keys != set(product(range(self.k), repeat=self.m)):
            raise ValueError("assignment keys must be exactly {0..k-1}^m")
        vals = list(self.assignment.values())
        if len(set(vals)) != expected:
            raise ValueError("assignment must be injective (duplicate points)")
        for p in vals:
            if len(p) != self.m or any(
                isinstance(c, bool) or not isinstance(c, int) for c in p
            ):
                raise ValueError(f"grid points must be integer {self.m}-tuples, got {p!r}")

    def items_in_index_order(self):
        return [(v, self.assignment[v]) for v in sorted(self.assignment)]


@dataclass(frozen=True)
class WitnessMD:
    """Numeric certificate for an approximate cube: center a, scale d.

    residual = eps*d - R(d) with R the enclosing-ball radius of {x_v - d*v};
    a positive residual places every point strictly inside its ball, up to
    the recognizer's floating tolerance.
    """

    a: tuple
    d: float
    residual: float


@dataclass(frozen=True)
class CubeDecision:
    status: str  # "feasible" | "infeasible" | "boundary"
    witness: Optional[WitnessMD]
    d: float
    g: float
    d_max: float


def _cube_eps_float(eps) -> float:
    if isinstance(eps, float):
        if eps <= 0:
            raise ValueError(f"eps must be positive, got {eps}")
        return eps
    return float(check_epsilon(eps))


def recognize_cube(grid: IndexedGrid, eps, tol: float = 1e-9) -> CubeDecision:
    """Three-valued feasibility of an approximate cube witness.

    Minimizes g(d) = R(d) - eps*d over (0, d_max] by golden-section search,
    where R(d) is the smallest-enclosing-ball radius of {x_v - d*v} and
    d_max = max_j spread_j / (k - 1 - 2*eps) bounds every feasible scale.
    Verdicts: feasible when min g < -tol*d_max (with witness), infeasible
    when min g > +tol*d_max, boundary otherwise.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    e = _cube_eps_float(eps)
    k, m = grid.k, grid.m
    pairs = grid.items_in_index_order()
    pts = [p for _, p in pairs]
    vecs = [v for v, _ in pairs]

    denom = (k - 1) - 2 * e
    if denom <= 0:
        raise ValueError(
            f"eps={e} too large for the scale bound; recognize_cube needs eps < (k-1)/2"
        )
    spreads = [
        max(p[j] for p in pts) - min(p[j] for p in pts) for j in range(m)
    ]
    d_max = max(spreads) / denom
    if d_max <= 0:
        return CubeDecision("infeasible", None, 0.0, math.inf, 0.0)

    def g_of(d: float) -> float:
        shifted = [
            tuple(c - d * vc for c, vc in zip(p, v)) for v, p in zip(vecs, pts)
        ]
        _, radius = min_enclosing_ball(shifted)
        return radius - e * d

    lo = d_max * 2.0 ** -60
    hi = d_max
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1, f2 = g_of(x1), g_of(x2)
    best_d, best_g = (x1, f1) if f1 <= f2 else (x2, f2)
    for _ in range(200):
        if hi - lo < tol * d_max:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = g_of(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = g_of(x2)
        for d, f in ((x1, f1), (x2, f2)):
            if f < best_g:
                best_d, best_g = d, f

    if best_g < -tol * d_max:
        shifted = [
            tuple(c - best_d * vc for c, vc in zip(p, v)) for v, p in zip(vecs, pts)
        ]
        center, _ = min_enclosing_ball(shifted)
        witness = WitnessMD(a=center, d=best_d, residual=-best_g)
        return CubeDecision("feasible", witness, best_d, best_g, d_max)
    if best_g > tol * d_max:
        return CubeDecision("infeasible", None, best_d, best_g, d_max)
    return CubeDecision("boundary", None, best_d, best_g, d_max)


def index_grid_points(point_set, m: int, k: int, eps) -> IndexedGrid:
    """Recover the index vectors of k^m points by per-axis clustering.

    For eps < 1/2 the balls around a + d*v are pairwise disjoint, so along
    each axis the coordinates split into k contiguous clusters of size
    k^(m-1) and the cluster rank is the index.  Ties straddling a cluster
    boundary make the split ambiguous and raise IndexingError; nothing is
    ever guessed.
    """
    e = check_epsilon(eps)
    if e >= Fraction(1, 2):
        raise ValueError(f"index recovery requires eps < 1/2, got {e}")
    pts = sorted(set(tuple(p) for p in point_set))
    if len(pts) != k ** m:
        raise ValueError(f"expected {k ** m} distinct points, got {len(pts)}")
    for p in pts:
        if len(p) != m:
            raise ValueError(f"point {p!r} is not {m}-dimensional")

    cluster = k ** (m - 1)
    index_of = {p: [] for p in pts}
    for axis in range(m):
        order = sorted(pts, key=lambda p: (p[axis], p))
        coords = [p[axis] for p in order]
        for c in range(1, k):
            if coords[c * cluster - 1] == coords[c * cluster]:
                raise IndexingError(
                    f"axis {axis}: tied coordinate {coords[c * cluster]} straddles "
                    f"the cluster boundary at rank {c}"
                )
        for rank, p in enumerate(order):
            index_of[p].append(rank // cluster)

    assignment = {tuple(idx): p for p, idx in index_of.items()}
    if len(assignment) != k ** m:
        raise IndexingError("per-axis clustering produced a non-injective indexing")
    return IndexedGrid(m=m, k=k, assignment=assignment)


def grid_from_points_1d(points) -> IndexedGrid:
    """View sorted 1-D points as a 1-dimensional IndexedGrid."""
    pts = check_points_1d(points)
    return IndexedGrid(
        m=1, k=len(pts), assignment={(i,): (x,) for i, x in enumerate(pts)}
    )
