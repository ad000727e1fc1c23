"""Density-side constructions: progression-free alphabets, digit sets, blow-ups.

The digit construction confines every non-leading base-q digit to the middle
band [2q/5, 3q/5], so consecutive-element gaps are dominated by the leading
distinct digit; combined with progression-free digit alphabets this kills
every approximate progression.  The cube blow-up and the translation
averaging step are the two halves of the density upper bound machinery.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

from .errors import MemoryGuardExceeded, SearchCapExceeded
from .geometry import (
    IndexedGrid,
    WitnessMD,
    check_epsilon,
    recognize_cube,
)
from .rational import ceil_frac, floor_frac, to_fraction

__all__ = [
    "ApkFreeProvider",
    "DigitConstruction",
    "CubeBlowupSpec",
    "TranslateResult",
    "apk_free_set",
    "build_behrend_digit_set",
    "product_free_set",
    "build_cube_blowup",
    "find_dense_translate",
    "verify_cube_free",
]


@dataclass(frozen=True)
class ApkFreeProvider:
    """Source of k-progression-free subsets of an interval.

    modes: "exact" (maximum set by branch and bound, lex-smallest tie),
    "behrend3" (sphere digit construction, k = 3 only), "greedy", or "auto"
    which picks exact up to exact_cap elements, then behrend3 for k = 3,
    else greedy.
    """

    mode: str = "auto"
    exact_cap: int = 60

    def __post_init__(self):
        if self.mode not in ("auto", "exact", "behrend3", "greedy"):
            raise ValueError(f"unknown provider mode {self.mode!r}")


DEFAULT_PROVIDER = ApkFreeProvider()


def _forms_exact_ap_ending(x: int, chosen: set, k: int) -> bool:
    d = 1
    while x - (k - 1) * d >= 0:
        if all(x - i * d in chosen for i in range(1, k)):
            return True
        d += 1
    return False


def _greedy_ap_free(n: int, k: int) -> tuple:
    chosen = set()
    for x in range(n):
        if not _forms_exact_ap_ending(x, chosen, k):
            chosen.add(x)
    return tuple(sorted(chosen))


def _max_ap_free_exact(n: int, k: int) -> tuple:
    """Maximum k-progression-free subset of {0..n-1}, lex-smallest among ties.

    Include-first branch and bound; cost grows exponentially with n, which is
    why the provider caps this mode.
    """
    best = {"size": -1, "set": ()}
    chosen: set = set()

    def recurse(x: int, picked: list):
        if len(picked) + (n - x) <= best["size"]:
            return
        if x == n:
            best["size"] = len(picked)
            best["set"] = tuple(picked)
            return
        if not _forms_exact_ap_ending(x, chosen, k):
            chosen.add(x)
            picked.append(x)
            recurse(x + 1, picked)
            picked.pop()
            chosen.discard(x)
        recurse(x + 1, picked)

    recurse(0, [])
    return best["set"]


def _behrend3(n: int) -> tuple:
    """Sphere digit construction inside {0..n-1}, 3-progression-free.

    Digits bounded by (b-1)//2 make x + z = 2y carry-free and digitwise, and
    a fixed digit-square-sum then forces x = z.  Tries a few digit counts and
    keeps the largest sphere.
    """
    if n <= 2:
        return tuple(range(n))
    best: tuple = (0,)
    max_digits = max(1, int(math.log2(n)))
    for ndig in range(1, max_digits + 1):
        base = math.ceil(n ** (1.0 / ndig))
        while base ** ndig < n:
            base += 1
        dmax = (base - 1) // 2
        if dmax < 1 and ndig > 1:
            continue
        spheres: dict = {}
        for digits in product(range(dmax + 1), repeat=ndig):
            value = sum(dg * base ** i for i, dg in enumerate(digits))
            if value < n:
                spheres.setdefault(sum(dg * dg for dg in digits), []).append(value)
        candidate = max(spheres.values(), key=lambda vs: (len(vs), vs))
        if len(candidate) > len(best):
            best = tuple(sorted(candidate))
    return best


def apk_free_set(lo: int, hi: int, k: int,
                 provider: ApkFreeProvider = DEFAULT_PROVIDER) -> tuple:
    """A subset of [lo, hi] with no exact k-term progression.

    Computed canonically on {0..hi-lo} and shifted, so translated intervals
    give translated sets.
    """
    if lo > hi:
        raise ValueError(f"need lo <= hi, got [{lo}, {hi}]")
    if k < 3:
        raise ValueError(f"need k >= 3, got k={k}")
    n = hi - lo + 1
    mode = provider.mode
    if mode == "auto":
        mode = "exact" if n <= provider.exact_cap else (
            "behrend3" if k == 3 else "greedy")
    if mode == "exact":
        if n > provider.exact_cap:
            raise ValueError(
                f"exact mode capped at {provider.exact_cap} elements, interval has {n}"
            )
        base = _max_ap_free_exact(n, k)
    elif mode == "behrend3":
        if k != 3:
            raise ValueError(f"behrend3 provider is only valid for k=3, got k={k}")
        base = _behrend3(n)
    else:
        base = _greedy_ap_free(n, k)
    return tuple(x + lo for x in base)


# ---------------------------------------------------------------------------
# Digit sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DigitConstruction:
    """Parameters of the base-q digit set: head alphabet for the leading digit,
    middle-band tail alphabet for all others."""

    q: int
    h: int
    k: int
    head: tuple
    tail: tuple

    @property
    def N(self) -> int:
        return self.q ** self.h

    @property
    def size(self) -> int:
        return len(self.head) * len(self.tail) ** (self.h - 1)


def build_behrend_digit_set(eps, h: int, k: int = 3,
                            provider: ApkFreeProvider = DEFAULT_PROVIDER,
                            one_based: bool = False):
    """Digit set in [0, q^h - 1] free of approximate k-progressions.

    q = floor(1/(25 eps)); the leading digit ranges over a progression-free
    subset of [0, q-1], every other digit over one of [ceil(2q/5),
    floor(3q/5)].  Requires 0 < eps <= 1/125 so q >= 5.
    """
    e = check_epsilon(eps)
    if e > Fraction(1, 125):
        raise ValueError(f"digit construction needs eps <= 1/125, got {e}")
    if h < 1:
        raise ValueError(f"need h >= 1, got h={h}")
    if k < 3:
        raise ValueError(f"need k >= 3, got k={k}")
    q = floor_frac(1 / (25 * e))
    head = apk_free_set(0, q - 1, k, provider)
    tail = apk_free_set(ceil_frac(Fraction(2 * q, 5)), floor_frac(Fraction(3 * q, 5)),
                        k, provider)
    if h == 1:
        members = head
    else:
        members = tuple(sorted(
            top * q ** (h - 1) + sum(dg * q ** i for i, dg in enumerate(rest))
            for top in head
            for rest in product(tail, repeat=h - 1)
        ))
    spec = DigitConstruction(q=q, h=h, k=k, head=head, tail=tail)
    if one_based:
        members = tuple(x + 1 for x in members)
    return spec, members


def product_free_set(A, m: int, N: int) -> tuple:
    """A x [N]^(m-1) as sorted m-tuples; freeness projects to the first axis."""
    if m < 1:
        raise ValueError(f"need m >= 1, got m={m}")
    avals = sorted(set(A))
    if not avals:
        return ()
    if any(not 1 <= a <= N for a in avals):
        raise ValueError("A must lie inside [1, N]")
    return tuple(sorted(
        (a,) + rest for a in avals for rest in product(range(1, N + 1), repeat=m - 1)
    ))


# ---------------------------------------------------------------------------
# Cube blow-up
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CubeBlowupSpec:
    """m-fold product of the 1-D blow-up with scale t = ceil(k sqrt(m)/eps)."""

    m: int
    k: int
    eps: Fraction
    alpha: Fraction
    r: int
    t: int
    elements: tuple  # sorted m-tuples
    n0_bound: int  # bounding box: elements fit in [0, n0_bound - 1]^m

    def blocks(self):
        """The k^m translated copies of the (r-1)-fold blow-up, keyed by u."""
        step = self.t ** (self.r - 1)
        if self.r == 1:
            prefix = [(0,) * self.m]
        else:
            axis = [
                sum(b * self.t ** p for p, b in enumerate(bs))
                for bs in product(range(self.k), repeat=self.r - 1)
            ]
            prefix = list(product(axis, repeat=self.m))
        out = []
        for u in product(range(self.k), repeat=self.m):
            shift = tuple(step * c for c in u)
            out.append((u, tuple(sorted(
                tuple(w + s for w, s in zip(p, shift)) for p in prefix
            ))))
        return out


def build_cube_blowup(m: int, k: int, eps, alpha,
                      cap: int = 200_000) -> CubeBlowupSpec:
    """Blow-up iterated r = ceil(log(1/alpha) / log(k^m/(k^m-1))) times."""
    if m < 1 or k < 3:
        raise ValueError(f"need m >= 1 and k >= 3, got m={m}, k={k}")
    e = check_epsilon(eps)
    a = to_fraction(alpha)
    if not 0 < a < 1:
        raise ValueError(f"need 0 < alpha < 1, got {a}")
    loss = math.log(k ** m / (k ** m - 1))
    r = max(1, math.ceil(math.log(1 / float(a)) / loss))
    count = k ** (r * m)
    if count > cap:
        raise MemoryGuardExceeded(
            f"blow-up needs r={r} iterations, k^(r*m) = {count} exceeds cap {cap}"
        )
    root = math.isqrt(m)
    if root * root == m:
        t = ceil_frac(Fraction(k * root) / e)
    else:
        t = math.ceil(k * math.sqrt(m) / float(e))
    axis = [
        sum(b * t ** p for p, b in enumerate(bs))
        for bs in product(range(k), repeat=r)
    ]
    elements = tuple(sorted(product(sorted(axis), repeat=m)))
    return CubeBlowupSpec(m=m, k=k, eps=e, alpha=a, r=r, t=t,
                          elements=elements, n0_bound=k * t ** (r - 1))


# ---------------------------------------------------------------------------
# Translation averaging
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TranslateResult:
    shift: tuple
    count: int
    bound: Fraction  # the guaranteed average |X||A| / (2N)^m
    mode: str


def find_dense_translate(A, X, N: int, m: int, mode: str = "auto",
                         seed: int = 0, shift_cap: int = 1_000_000,
                         max_draws: int = 10_000_000) -> TranslateResult:
    """A shift u in [-N+1, N]^m with |X intersect (A+u)| at least the average.

    Deterministic mode scans all (2N)^m shifts and returns the maximizer
    (lex-smallest among ties); it refuses to run past shift_cap shifts.
    Randomized mode samples shifts uniformly with the given seed until the
    average bound is met, which happens with probability one.
    """
    a_pts = _check_grid_points(A, m, N, "A")
    x_set = set(_check_grid_points(X, m, N, "X"))
    if not a_pts:
        raise ValueError("A must be nonempty")
    total_shifts = (2 * N) ** m
    bound = Fraction(len(x_set) * len(a_pts), total_shifts)
    if mode == "auto":
        mode = "deterministic" if total_shifts <= shift_cap else "randomized"
    if mode not in ("deterministic", "randomized"):
        raise ValueError(f"unknown mode {mode!r}")

    def count_at(u):
        return sum(
            1 for p in a_pts if tuple(c + s for c, s in zip(p, u)) in x_set
        )

    if mode == "deterministic":
        if total_shifts > shift_cap:
            raise SearchCapExceeded(
                f"deterministic scan over {total_shifts} shifts exceeds cap {shift_cap}"
            )
        best_u, best_c = None, -1
        for u in product(range(-N + 1, N + 1), repeat=m):
            c = count_at(u)
            if c > best_c:
                best_u, best_c = u, c
        return TranslateResult(shift=best_u, count=best_c, bound=bound,
                               mode="deterministic")

    rng = random.Random(seed)
    for _ in range(max_draws):
        u = tuple(rng.randint(-N + 1, N) for _ in range(m))
        c = count_at(u)
        if c >= bound:
            return TranslateResult(shift=u, count=c, bound=bound, mode="randomized")
    raise SearchCapExceeded(f"no shift met the bound within {max_draws} draws")


def _check_grid_points(pts, m: int, N: int, name: str) -> tuple:
    out = []
    for p in pts:
        t = tuple(p)
        if len(t) != m or any(not 1 <= c <= N for c in t):
            raise ValueError(f"{name} must lie inside [1, {N}]^{m}, got {t}")
        out.append(t)
    return tuple(sorted(set(out)))


# ---------------------------------------------------------------------------
# Cube search
# ---------------------------------------------------------------------------

def verify_cube_free(S, m: int, k: int, eps, tol: float = 1e-9,
                     node_cap: int = 20_000_000) -> Optional[tuple]:
    """First approximate cube found in S (lex order of assignments), or None.

    DFS assigns points to index vectors in lex order.  Each partial
    assignment keeps the exact interval of scales d allowed by the
    per-axis box constraints |x_j - (a_j + d*v_j)| <= eps*d (a necessary
    consequence of the ball constraint); an empty interval prunes.  Complete
    assignments are confirmed by the numeric ball recognizer; only a
    'feasible' verdict counts, so boundary candidates are skipped.

    Because every injective index assignment is tried explicitly, no sorted-
    order disambiguation is needed and any eps accepted by the recognizer is
    allowed (in particular eps = 1/2).
    """
    e = check_epsilon(eps)
    points = sorted(set(tuple(p) for p in S))
    slots = sorted(product(range(k), repeat=m))
    total = k ** m
    if len(points) < total:
        return None
    for p in points:
        if len(p) != m:
            raise ValueError(f"point {p!r} is not {m}-dimensional")

    two_eps = 2 * e
    budget = [node_cap]

    def narrowed(d_lo, d_hi, v, p, assigned):
        """Intersect the d interval with the constraints p brings against
        every already assigned point; returns None when it empties."""
        for v2, p2 in assigned:
            for axis in range(m):
                dv = v[axis] - v2[axis]
                dx = p[axis] - p2[axis]
                for c, rhs in ((dv + two_eps, dx), (-dv + two_eps, -dx)):
                    if c > 0:
                        b = Fraction(rhs) / c
                        if b > d_lo:
                            d_lo = b
                    elif rhs > 0:
                        return None
                if d_hi is not None and d_lo > d_hi:
                    return None
                # upper bounds come from c < 0 cases of the same pairs
                for c, rhs in ((dv - two_eps, dx), (-dv - two_eps, -dx)):
                    if c > 0:
                        b = Fraction(rhs) / c
                        if d_hi is None or b < d_hi:
                            d_hi = b
                if d_hi is not None and d_lo > d_hi:
                    return None
        return d_lo, d_hi

    assigned: list = []
    used: set = set()

    def recurse(slot_idx: int, d_lo, d_hi):
        budget[0] -= 1
        if budget[0] < 0:
            raise SearchCapExceeded("cube search node cap exceeded")
        if slot_idx == total:
            grid = IndexedGrid(m=m, k=k,
                               assignment={v: p for v, p in assigned})
            decision = recognize_cube(grid, e, tol=tol)
            if decision.status == "feasible":
                return grid, decision.witness
            return None
        v = slots[slot_idx]
        for p in points:
            if p in used:
                continue
            shrunk = narrowed(d_lo, d_hi, v, p, assigned)
            if shrunk is None:
                continue
            assigned.append((v, p))
            used.add(p)
            hit = recurse(slot_idx + 1, *shrunk)
            assigned.pop()
            used.discard(p)
            if hit is not None:
                return hit
        return None

    return recurse(0, Fraction(0), None)
