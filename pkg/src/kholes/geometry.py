"""Exact integer predicates, hulls, radial orders and emptiness tests.

Every predicate reduces to the sign of a 2x2 determinant of integer
coordinates.  Coordinates are bounded by ``2**26`` in absolute value so each
determinant fits in a signed 64-bit word; Python integers make that a
documentation guarantee rather than a correctness requirement.

Angle convention: ``angle(a, b, c)`` is the clockwise sweep from ray ``b->a``
to ray ``b->c``.  It is smaller than pi exactly when ``cross(a-b, c-b) < 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import cmp_to_key
from math import gcd
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import CenterNotOnHull, CollinearInput, CoordinateOverflow, GeneralPositionError

COORD_LIMIT = 1 << 26


class Point(NamedTuple):
    x: int
    y: int


class Orientation(IntEnum):
    CW = -1
    CCW = 1


@dataclass(frozen=True)
class PointSet:
    """An ordered tuple of integer points; points are referred to by index.

    Construction only checks integrality and the coordinate bound.  Use
    :meth:`checked` (or :func:`ensure_general_position`) to also enforce that
    the points are pairwise distinct with no three collinear.
    """

    points: tuple[Point, ...]

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = []
        for p in points:
            x, y = p
            if not (isinstance(x, int) and isinstance(y, int)):
                raise TypeError(f"coordinates must be integers, got {p!r}")
            if abs(x) > COORD_LIMIT or abs(y) > COORD_LIMIT:
                raise CoordinateOverflow(f"point {p!r} exceeds |c| <= 2**26")
            pts.append(Point(int(x), int(y)))
        object.__setattr__(self, "points", tuple(pts))

    @classmethod
    def checked(cls, points: Iterable[Sequence[int]]) -> "PointSet":
        ps = cls(points)
        ensure_general_position(ps)
        return ps

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def subset(self, indices: Sequence[int]) -> "PointSet":
        return PointSet(self.points[i] for i in indices)


def cross(o: Sequence[int], a: Sequence[int], b: Sequence[int]) -> int:
    """Twice the signed area of triangle ``o, a, b`` (positive when CCW)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orient(a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> Orientation:
    d = cross(a, b, c)
    if d == 0:
        raise CollinearInput(f"collinear points {tuple(a)}, {tuple(b)}, {tuple(c)}")
    return Orientation.CCW if d > 0 else Orientation.CW


def angle_lt_pi(a: Sequence[int], b: Sequence[int], c: Sequence[int]) -> bool:
    """True iff the clockwise sweep from ray b->a to ray b->c is below pi."""
    d = cross(b, a, c)
    if d == 0:
        raise CollinearInput(f"collinear points {tuple(a)}, {tuple(b)}, {tuple(c)}")
    return d < 0


def _hull_of_sorted(pts: Sequence[Point], idx: Sequence[int]) -> list[int]:
    # Andrew's monotone chain; idx must be sorted by (x, y).
    if len(idx) < 3:
        return list(idx)
    lower: list[int] = []
    for i in idx:
        while len(lower) >= 2 and cross(pts[lower[-2]], pts[lower[-1]], pts[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(idx):
        while len(upper) >= 2 and cross(pts[upper[-2]], pts[upper[-1]], pts[i]) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def convex_hull(ps: PointSet, subset: Iterable[int]) -> list[int]:
    """Hull vertices of ``subset``, CCW, starting at the smallest (x, y) vertex.

    Subsets of one or two points are returned sorted; they are legal as
    innermost onion layers but not as polygons.
    """
    pts = ps.points
    idx = sorted(set(subset), key=lambda i: pts[i])
    return _hull_of_sorted(pts, idx)


def is_convex_position(ps: PointSet, subset: Iterable[int]) -> bool:
    idx = set(subset)
    if len(idx) <= 3:
        return True
    return len(convex_hull(ps, idx)) == len(idx)


def point_in_convex_polygon(pts: Sequence[Point], polygon: Sequence[int], q: Sequence[int]) -> bool:
    """Strict containment of ``q`` in a CCW convex polygon given by indices."""
    k = len(polygon)
    for t in range(k):
        if cross(pts[polygon[t]], pts[polygon[(t + 1) % k]], q) <= 0:
            return False
    return True


def polygon_empty(ps: PointSet, polygon: Sequence[int]) -> bool:
    """True iff no point of ``ps`` other than the vertices lies strictly inside."""
    pts = ps.points
    verts = set(polygon)
    xs = [pts[i][0] for i in polygon]
    ys = [pts[i][1] for i in polygon]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    for j, q in enumerate(pts):
        if j in verts or not (x0 < q[0] < x1 and y0 < q[1] < y1):
            continue
        if point_in_convex_polygon(pts, polygon, q):
            return False
    return True


def triangle_empty(ps: PointSet, a: int, b: int, c: int) -> bool:
    pts = ps.points
    if cross(pts[a], pts[b], pts[c]) < 0:
        b, c = c, b
    return polygon_empty(ps, (a, b, c))


@dataclass(frozen=True)
class RadialOrder:
    """Clockwise order of a subset about a hull vertex ``center``."""

    center: int
    order: tuple[int, ...]

    def positions(self) -> dict[int, int]:
        return {v: t for t, v in enumerate(self.order)}

    def __len__(self) -> int:
        return len(self.order)


def is_hull_vertex(ps: PointSet, subset: Iterable[int], p: int) -> bool:
    idx = set(subset)
    idx.add(p)
    if len(idx) <= 3:
        return True
    return p in convex_hull(ps, idx)


def radial_order(ps: PointSet, subset: Iterable[int], p: int) -> RadialOrder:
    """Order the points of ``subset`` (other than ``p``) clockwise about ``p``.

    The sweep from the first to the last point is below pi, and every point
    lies in the angular region of any pair surrounding it.
    """
    pts = ps.points
    others = sorted(set(subset) - {p})
    if not is_hull_vertex(ps, others, p):
        raise CenterNotOnHull(f"point {p} is interior to the hull of the subset")
    c = pts[p]

    def cmp(i: int, j: int) -> int:
        # i precedes j when j lies clockwise of i
        return -1 if cross(c, pts[i], pts[j]) < 0 else 1

    others.sort(key=cmp_to_key(cmp))
    return RadialOrder(p, tuple(others))


@dataclass(frozen=True)
class Violation:
    kind: str  # "duplicate" or "collinear"
    indices: tuple[int, ...]


def _direction(dx: int, dy: int) -> tuple[int, int]:
    g = gcd(dx, dy)
    dx, dy = dx // g, dy // g
    if dx < 0 or (dx == 0 and dy < 0):
        dx, dy = -dx, -dy
    return dx, dy


def validate_general_position(ps: PointSet) -> Optional[Violation]:
    """Return ``None`` when the set is in general position, else one violation."""
    pts = ps.points
    seen: dict[Point, int] = {}
    for i, q in enumerate(pts):
        if q in seen:
            return Violation("duplicate", (seen[q], i))
        seen[q] = i
    n = len(pts)
    for i in range(n):
        xi, yi = pts[i]
        dirs: dict[tuple[int, int], int] = {}
        for j in range(i + 1, n):
            d = _direction(pts[j][0] - xi, pts[j][1] - yi)
            if d in dirs:
                return Violation("collinear", (i, dirs[d], j))
            dirs[d] = j
    return None


def ensure_general_position(ps: PointSet) -> None:
    v = validate_general_position(ps)
    if v is not None:
        raise GeneralPositionError(f"{v.kind} points at indices {v.indices}")
