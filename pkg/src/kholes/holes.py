"""Enumerate and count k-holes (empty convex k-gons).

Two independent routes are provided:

* :func:`enumerate_brute` tests every k-subset for convex position and
  emptiness.  It is the oracle.
* :func:`count_chain_dp` and :func:`build_catalog` work per *anchor*, the
  lowest vertex of a hole (smallest ``(y, x)``).  Points above the anchor are
  sorted by angle, the graph of empty triangles with the anchor is built, and
  convex chains through that graph are counted (dynamic programming) or
  walked (depth-first search).

A convex polygon with the anchor as a vertex is empty iff every triangle of
its fan from the anchor is empty, so the chains are exactly the holes.
"""
from __future__ import annotations

import bisect
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations
from typing import Iterable, Sequence

from .errors import BudgetExceeded
from .geometry import Point, PointSet, _hull_of_sorted, cross, polygon_empty
from .parallel import pmap

DEFAULT_HOLE_CAP = 10**7
MAX_K = 12


@dataclass(frozen=True, order=True)
class Hole:
    """Vertex indices in CCW order starting at the smallest (x, y) vertex."""

    k: int
    vertices: tuple[int, ...]

    def key(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertices))


def canonical(pts: Sequence[Point], ccw: Sequence[int]) -> Hole:
    start = min(range(len(ccw)), key=lambda t: pts[ccw[t]])
    return Hole(len(ccw), tuple(ccw[start:]) + tuple(ccw[:start]))


def enumerate_brute(ps: PointSet, k: int) -> list[Hole]:
    n = len(ps)
    if not 3 <= k:
        raise ValueError("k must be at least 3")
    if k > n:
        return []
    pts = ps.points
    order = sorted(range(n), key=lambda i: pts[i])
    holes = []
    for combo in combinations(order, k):
        hull = _hull_of_sorted(pts, combo)
        if len(hull) == k and polygon_empty(ps, hull):
            holes.append(Hole(k, tuple(hull)))
    holes.sort()
    return holes


class _Fan:
    """Empty-triangle graph of the points above one anchor.

    ``q`` lists point indices sorted CCW about the anchor.  Positions refer
    to ``q``.  ``out[i]`` holds the positions ``j > i`` whose triangle with
    the anchor is empty, sorted CCW by direction ``q_j - q_i``; ``inc[j]``
    holds the positions ``i < j`` of the same edges sorted CCW by direction
    ``q_i - q_j``.
    """

    def __init__(self, pts: Sequence[Point], a: int):
        ax, ay = pts[a]
        anchor = pts[a]
        above = [i for i, (x, y) in enumerate(pts) if (y, x) > (ay, ax)]
        above.sort(key=cmp_to_key(lambda i, j: -1 if cross(anchor, pts[i], pts[j]) > 0 else 1))
        q = [pts[i] for i in above]
        m = len(q)
        out: list[list[int]] = [[] for _ in range(m)]
        inc: list[list[int]] = [[] for _ in range(m)]
        for i in range(m):
            qi = q[i]
            best = -1
            for j in range(i + 1, m):
                # empty iff q_j is left of q_i -> q_l for every l strictly between
                if best < 0 or cross(qi, q[best], q[j]) > 0:
                    out[i].append(j)
                    inc[j].append(i)
                    best = j
        for i in range(m):
            qi = q[i]
            key = cmp_to_key(lambda s, t: -1 if cross(qi, q[s], q[t]) > 0 else 1)
            out[i].sort(key=key)
            inc[i].sort(key=key)
        self.index = above
        self.q = q
        self.out = out
        self.inc = inc

    def first_convex(self, h: int, i: int) -> int:
        """Offset into ``out[i]`` from which every ``j`` makes a left turn h, i, j."""
        q = self.q
        qi, qh = q[i], q[h]
        return bisect.bisect_left(self.out[i], True, key=lambda j: cross(qi, qh, q[j]) < 0)


def _count_anchor(pts: Sequence[Point], a: int, k: int) -> int:
    fan = _Fan(pts, a)
    q = fan.q
    f: dict[tuple[int, int], list[int]] = {}
    total = 0
    for i in range(len(q)):
        qi = q[i]
        inc = fan.inc[i]
        acc = [0] * (k + 1)
        ptr = 0
        for j in fan.out[i]:
            qj = q[j]
            while ptr < len(inc) and cross(qi, q[inc[ptr]], qj) < 0:
                prev = f[(inc[ptr], i)]
                for t in range(4, k + 1):
                    acc[t] += prev[t - 1]
                ptr += 1
            row = acc[:]
            row[3] = 1
            f[(i, j)] = row
            total += row[k]
    return total


def _count_chunk(args: tuple[tuple[Point, ...], list[int], int]) -> int:
    pts, anchors, k = args
    return sum(_count_anchor(pts, a, k) for a in anchors)


def count_chain_dp(ps: PointSet, k: int, workers: int = 1) -> int:
    """Number of k-holes of ``ps`` (3 <= k <= 12)."""
    if not 3 <= k <= MAX_K:
        raise ValueError(f"k must lie in 3..{MAX_K}")
    n = len(ps)
    if k > n:
        return 0
    pts = ps.points
    anchors = list(range(n))
    chunks = [(pts, anchors[w::workers], k) for w in range(max(1, workers))]
    return sum(pmap(_count_chunk, chunks, workers))


def _walk_anchor(pts: Sequence[Point], a: int, ks: frozenset[int], emit) -> None:
    fan = _Fan(pts, a)
    kmax = max(ks)
    idx = fan.index
    starts: dict[tuple[int, int], int] = {}

    def extend(chain: list[int]) -> None:
        size = len(chain) + 1
        if size in ks:
            emit([a] + [idx[c] for c in chain])
        if size >= kmax:
            return
        h, i = chain[-2], chain[-1]
        s = starts.get((h, i))
        if s is None:
            s = starts[(h, i)] = fan.first_convex(h, i)
        outs = fan.out[i]
        for t in range(s, len(outs)):
            chain.append(outs[t])
            extend(chain)
            chain.pop()

    for i in range(len(fan.q)):
        for j in fan.out[i]:
            extend([i, j])


def iter_holes(ps: PointSet, ks: Iterable[int]) -> Iterable[Hole]:
    """Yield every k-hole for k in ``ks`` in anchor order (not sorted)."""
    ks = frozenset(ks)
    if not ks:
        return
    if min(ks) < 3 or max(ks) > MAX_K:
        raise ValueError(f"hole sizes must lie in 3..{MAX_K}")
    pts = ps.points
    found: list[list[int]] = []
    for a in range(len(pts)):
        _walk_anchor(pts, a, ks, found.append)
        for ccw in found:
            yield canonical(pts, ccw)
        found.clear()


def enumerate_dp(ps: PointSet, k: int) -> list[Hole]:
    return sorted(iter_holes(ps, [k]))


@dataclass
class HoleCatalog:
    """All holes of the requested sizes, sorted canonically; ids are positions."""

    holes: list[Hole]
    pair_index: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    by_vertex_set: dict[tuple[int, ...], int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.holes)

    def count(self, k: int) -> int:
        return sum(1 for h in self.holes if h.k == k)

    def find(self, vertices: Iterable[int]) -> int | None:
        return self.by_vertex_set.get(tuple(sorted(vertices)))


def build_catalog(ps: PointSet, ks: Iterable[int], cap: int = DEFAULT_HOLE_CAP) -> HoleCatalog:
    holes = []
    for h in iter_holes(ps, ks):
        holes.append(h)
        if len(holes) > cap:
            raise BudgetExceeded(f"more than {cap} holes")
    holes.sort()
    pair_index: dict[tuple[int, int], list[int]] = defaultdict(list)
    by_set = {}
    for hid, h in enumerate(holes):
        key = h.key()
        by_set[key] = hid
        for u, v in combinations(key, 2):
            pair_index[(u, v)].append(hid)
    return HoleCatalog(holes, dict(pair_index), by_set)


def holes_containing_pair(cat: HoleCatalog, u: int, v: int) -> list[int]:
    if u == v:
        raise ValueError("pair must have distinct vertices")
    return list(cat.pair_index.get((min(u, v), max(u, v)), ()))
