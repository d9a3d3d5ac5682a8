"""Reproducible point-set sources.

Randomness comes from :class:`random.Random` (Mersenne Twister) and only
through ``Random.random()``, whose output sequence for a given integer seed
is guaranteed stable across Python versions and platforms.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import CoordinateOverflow, RangeTooSmall
from .geometry import (
    COORD_LIMIT,
    PointSet,
    convex_hull,
    cross,
    ensure_general_position,
    is_convex_position,
    validate_general_position,
)

DEFAULT_RANGE = 10_000
DEFAULT_CONVEX_RANGE = 1 << 20
MAX_HORTON_M = 8


@dataclass(frozen=True)
class GenSpec:
    kind: str  # random | convex | horton
    n: int = 0
    seed: int = 0
    bound: int = DEFAULT_RANGE
    m: int = 0

    def build(self) -> PointSet:
        if self.kind == "random":
            return gen_random(self.n, self.seed, self.bound)
        if self.kind == "convex":
            return gen_convex(self.n, self.seed, self.bound)
        if self.kind == "horton":
            return gen_horton(self.m)
        raise ValueError(f"unknown generator kind {self.kind!r}")


def _check_range(n: int, bound: int) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if bound > COORD_LIMIT:
        raise CoordinateOverflow(f"range {bound} exceeds 2**26")
    if bound * bound < 4 * n * n:
        raise RangeTooSmall(f"range {bound} too small for {n} points")


def _draw(r: random.Random, bound: int) -> int:
    return int(r.random() * (2 * bound + 1)) - bound


def _direction(dx: int, dy: int) -> tuple[int, int]:
    g = gcd(dx, dy)
    dx, dy = dx // g, dy // g
    if dx < 0 or (dx == 0 and dy < 0):
        return -dx, -dy
    return dx, dy


def gen_random(n: int, seed: int, bound: int = DEFAULT_RANGE) -> PointSet:
    """``n`` uniform points of ``[-bound, bound]^2`` in general position.

    A candidate is rejected when it repeats a point or is collinear with two
    accepted points (two accepted points in the same direction from it).
    """
    _check_range(n, bound)
    r = random.Random(seed)
    pts: list[tuple[int, int]] = []
    taken = set()
    while len(pts) < n:
        c = (_draw(r, bound), _draw(r, bound))
        if c in taken:
            continue
        dirs = {_direction(x - c[0], y - c[1]) for x, y in pts}
        if len(dirs) < len(pts):
            continue
        pts.append(c)
        taken.add(c)
    return PointSet(pts)


def gen_convex(n: int, seed: int, bound: int = DEFAULT_CONVEX_RANGE) -> PointSet:
    """``n`` points in convex and general position near a circle of radius ``bound``.

    Angles are evenly spaced with a random jitter of up to half a slot; the
    rounded set is validated and redrawn on failure.
    """
    if n < 3:
        raise ValueError("a convex set needs at least 3 points")
    _check_range(n, bound)
    r = random.Random(seed)
    for _ in range(200):
        pts = []
        for i in range(n):
            theta = 2 * math.pi * (i + 0.5 * r.random()) / n
            pts.append((round(bound * math.cos(theta)), round(bound * math.sin(theta))))
        ps = PointSet(pts)
        if validate_general_position(ps) is None and is_convex_position(ps, range(n)):
            return ps
    raise RangeTooSmall(f"could not place {n} convex points at radius {bound}")


def _strictly_beyond_lines(base: list[tuple[int, int]], other: list[tuple[int, int]], sign: int) -> bool:
    """Every point of ``other`` lies strictly on side ``sign`` of every base line.

    ``sign`` is +1 for "above".  The side test is linear in the tested point,
    so checking the hull vertices of ``other`` suffices.
    """
    ps = PointSet(other)
    probe = [other[i] for i in convex_hull(ps, range(len(other)))]
    for a in range(len(base)):
        pa = base[a]
        for b in range(a + 1, len(base)):
            pb = base[b]
            lo, hi = (pb, pa) if pb[0] < pa[0] else (pa, pb)
            for c in probe:
                if cross(lo, hi, c) * sign <= 0:
                    return False
    return True


def _max_slope(pts: list[tuple[int, int]]) -> Fraction:
    best = Fraction(0)
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            s = abs(Fraction(pts[b][1] - pts[a][1], pts[b][0] - pts[a][0]))
            best = max(best, s)
    return best


def _lift(pts: list[tuple[int, int]], delta: int) -> tuple[list, list]:
    even = [(2 * x, y) for x, y in pts]
    odd = [(2 * x + 1, y + delta) for x, y in pts]
    return even, odd


def _separated(pts: list[tuple[int, int]], delta: int) -> bool:
    even, odd = _lift(pts, delta)
    return _strictly_beyond_lines(even, odd, 1) and _strictly_beyond_lines(odd, even, -1)


def gen_horton(m: int) -> PointSet:
    """The Horton set with ``2**m`` points and x-coordinates ``0..2**m - 1``.

    Each level doubles the set: the even copy keeps the previous y values and
    the odd copy is lifted by ``delta``.  The lifted copy must lie above every
    line through two base points, and the base below every line through two
    lifted points.  Both conditions are monotone in ``delta``; the lift starts
    at the steepest base slope, doubles until valid and is then bisected down
    to the smallest valid value, which keeps coordinates small.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    pts = [(0, 0)]
    for t in range(1, m + 1):
        hi = max(1, math.ceil(_max_slope([(2 * x, y) for x, y in pts]))) if len(pts) > 1 else 1
        top = max(y for _, y in pts)
        while not _separated(pts, hi):
            hi *= 2
            if top + hi > COORD_LIMIT:
                raise CoordinateOverflow(f"Horton set of order {m} exceeds 2**26 at level {t}")
        lo = hi // 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _separated(pts, mid):
                hi = mid
            else:
                lo = mid
        if top + hi > COORD_LIMIT:
            raise CoordinateOverflow(f"Horton set of order {m} exceeds 2**26 at level {t}")
        even, odd = _lift(pts, hi)
        pts = sorted(even + odd)
    ps = PointSet(pts)
    ensure_general_position(ps)
    return ps
