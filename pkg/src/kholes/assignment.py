"""Assignment of 5-holes to points, block by block along radial orders.

For a point ``p`` of layer ``i <= k_mid`` the other points of the suffix set
``P_i`` are ordered radially about ``p`` and cut into disjoint blocks of ten
consecutive points.  Each block yields one 5-hole assigned to ``p``:

* a 5-hole having ``p`` and some block member as vertices (``vertex`` kind),
  the smallest in canonical order; otherwise
* a 5-hole with all vertices in the block and two vertices ``a, b`` such
  that triangle ``p a b`` is empty (``anchored`` kind).  Candidates are ranked
  good-trustworthy, then good-dubious, then bad; ties go to the smallest hole.

Blocks are chosen to maximise the number of good assignments (an interval
scheduling problem on equal-length windows) and the remaining gaps are
filled with plain blocks.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import NoCandidate, PreconditionViolated
from .geometry import (
    PointSet,
    RadialOrder,
    angle_lt_pi,
    convex_hull,
    cross,
    is_convex_position,
    is_hull_vertex,
    point_in_convex_polygon,
    radial_order,
    triangle_empty,
    validate_general_position,
)
from .holes import Hole, HoleCatalog, build_catalog, enumerate_brute
from .layers import LayerDecomposition, decompose, suffix_set

BLOCK = 10


class AssignmentClass(str, Enum):
    GOOD_TRUSTWORTHY = "good_trustworthy"
    GOOD_DUBIOUS = "good_dubious"
    BAD = "bad"

    @property
    def is_good(self) -> bool:
        return self is not AssignmentClass.BAD


_RANK = {AssignmentClass.GOOD_TRUSTWORTHY: 0, AssignmentClass.GOOD_DUBIOUS: 1, AssignmentClass.BAD: 2}


@dataclass(frozen=True, order=True)
class Block:
    center: int
    layer: int
    start: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class Sector:
    center: int
    hole: Hole
    points: tuple[int, ...]


@dataclass(frozen=True)
class Assignment:
    center: int
    block: Block
    hole_id: int
    kind: str  # "vertex" or "anchored"
    anchors: Optional[tuple[int, int]]
    cls: AssignmentClass

    @property
    def is_good(self) -> bool:
        return self.cls.is_good


class AssignmentContext:
    """Read-only inputs of the assignment plus per-center caches."""

    def __init__(self, ps: PointSet, dec: LayerDecomposition | None = None,
                 catalog: HoleCatalog | None = None):
        self.ps = ps
        self.dec = dec if dec is not None else decompose(ps)
        self._catalog = catalog
        self._radial: dict[int, RadialOrder] = {}
        self._positions: dict[int, dict[int, int]] = {}
        self._empty: dict[tuple[int, int, int], bool] = {}
        self._assigned: dict[tuple[int, int], Assignment] = {}

    @property
    def catalog(self) -> HoleCatalog:
        """The 5-hole catalog, built on first use."""
        if self._catalog is None:
            self._catalog = build_catalog(self.ps, [5])
        return self._catalog

    def layer(self, p: int) -> int:
        return self.dec.layer_of[p]

    def radial(self, p: int) -> RadialOrder:
        """Radial order of ``P_i`` about ``p``, where ``p`` lies in layer ``i``."""
        ro = self._radial.get(p)
        if ro is None:
            ro = radial_order(self.ps, suffix_set(self.dec, self.layer(p)), p)
            self._radial[p] = ro
            self._positions[p] = ro.positions()
        return ro

    def positions(self, p: int) -> dict[int, int]:
        self.radial(p)
        return self._positions[p]

    def empty_triangle(self, a: int, b: int, c: int) -> bool:
        key = tuple(sorted((a, b, c)))
        res = self._empty.get(key)
        if res is None:
            res = self._empty[key] = triangle_empty(self.ps, *key)
        return res

    def hole(self, hole_id: int) -> Hole:
        return self.catalog.holes[hole_id]

    def block_at(self, p: int, start: int) -> Block:
        ro = self.radial(p)
        if not 0 <= start <= len(ro) - BLOCK:
            raise PreconditionViolated(f"no block of {BLOCK} at offset {start} (m = {len(ro)})")
        return Block(p, self.layer(p), start, ro.order[start : start + BLOCK])


# -- per-hole and per-block constructions ---------------------------------------

@dataclass(frozen=True)
class PentagonOutcome:
    kind: str  # "hole_with_p" or "anchored"
    hole: Hole
    anchors: Optional[tuple[int, int]] = None


def pentagon_selection(ps11: PointSet, p: int) -> PentagonOutcome:
    """Eleven points, ``p`` on their hull: a 5-hole through ``p`` or an anchored one.

    Follows the case analysis of the existence argument: take a 5-hole among
    the first nine radial points; two radially consecutive vertices are
    anchors.  Otherwise the odd and even positions each form a 5-hole, and
    either some triangle ``p p_i p_{i+2}`` misses ``p_{i+1}`` or the ten
    points form a 10-hole whose first five points are anchored by the first
    two.
    """
    if len(ps11) != 11:
        raise PreconditionViolated(f"need exactly 11 points, got {len(ps11)}")
    if validate_general_position(ps11) is not None:
        raise PreconditionViolated("points are not in general position")
    if not 0 <= p < 11 or not is_hull_vertex(ps11, range(11), p):
        raise PreconditionViolated(f"point {p} is not a hull vertex")
    holes = enumerate_brute(ps11, 5)
    for h in holes:
        if p in h.vertices:
            return PentagonOutcome("hole_with_p", h)

    ro = radial_order(ps11, range(11), p).order
    pos = {v: t for t, v in enumerate(ro)}

    def first_within(pool: Sequence[int]) -> Hole:
        allowed = set(pool)
        for h in holes:
            if allowed.issuperset(h.vertices):
                return h
        raise NoCandidate("ten points without a 5-hole")

    def consecutive_pair(h: Hole) -> Optional[tuple[int, int]]:
        ts = sorted(pos[v] for v in h.vertices)
        for s, t in zip(ts, ts[1:]):
            if t == s + 1:
                return tuple(sorted((ro[s], ro[t])))
        return None

    h1 = first_within(ro[0:9])
    pair = consecutive_pair(h1)
    if pair:
        return PentagonOutcome("anchored", h1, pair)
    h2 = first_within(ro[1:10])
    pair = consecutive_pair(h2)
    if pair:
        return PentagonOutcome("anchored", h2, pair)
    pts = ps11.points
    for t in range(8):
        a, mid, b = ro[t], ro[t + 1], ro[t + 2]
        tri = (p, b, a) if cross(pts[p], pts[b], pts[a]) > 0 else (p, a, b)
        if not point_in_convex_polygon(pts, tri, pts[mid]):
            h = h1 if a in h1.vertices else h2
            return PentagonOutcome("anchored", h, tuple(sorted((a, b))))
    first5 = tuple(ro[0:5])
    for h in holes:
        if sorted(h.vertices) == sorted(first5):
            return PentagonOutcome("anchored", h, tuple(sorted(ro[0:2])))
    raise NoCandidate("radial chain is not a 10-hole")


def check_pentagon_outcome(ps11: PointSet, p: int, out: PentagonOutcome) -> list[str]:
    """Independent recheck of a :func:`pentagon_selection` result."""
    from .geometry import polygon_empty

    problems = []
    verts = out.hole.vertices
    if len(verts) != 5 or len(convex_hull(ps11, verts)) != 5:
        problems.append("returned polygon is not a convex pentagon")
    elif not polygon_empty(ps11, convex_hull(ps11, verts)):
        problems.append("returned pentagon is not empty")
    if out.kind == "hole_with_p":
        if p not in verts:
            problems.append("p is not a vertex of the returned hole")
    else:
        a, b = out.anchors
        if a not in verts or b not in verts:
            problems.append("anchors are not hole vertices")
        elif not triangle_empty(ps11, p, a, b):
            problems.append("anchor triangle is not empty")
    return problems


# -- Per-block machinery ------------------------------------------------------

def sector_of(ro: RadialOrder, hole: Hole, positions: dict[int, int] | None = None) -> Sector:
    pos = positions if positions is not None else ro.positions()
    ts = [pos[v] for v in hole.vertices]
    return Sector(ro.center, hole, ro.order[min(ts) : max(ts) + 1])


def classify(ps: PointSet, p: int, hole: Hole, sector: Sector) -> AssignmentClass:
    if p in hole.vertices:
        return AssignmentClass.GOOD_TRUSTWORTHY
    q = sector.points
    if is_convex_position(ps, q) and len(convex_hull(ps, (*q, p))) == 3:
        return AssignmentClass.BAD
    if len(convex_hull(ps, (*hole.vertices, p))) == 3:
        return AssignmentClass.GOOD_DUBIOUS
    return AssignmentClass.GOOD_TRUSTWORTHY


def candidate_family(ctx: AssignmentContext, p: int, block: Block) -> list[tuple[int, tuple[int, int]]]:
    """5-holes inside the block with an anchor pair, as ``(hole_id, (a, b))``.

    The anchor pair is the lexicographically smallest pair of vertex indices
    whose triangle with ``p`` is empty.
    """
    family = []
    for combo in combinations(sorted(block.members), 5):
        hid = ctx.catalog.find(combo)
        if hid is None:
            continue
        for a, b in combinations(combo, 2):
            if ctx.empty_triangle(p, a, b):
                family.append((hid, (a, b)))
                break
    family.sort()
    return family


def _vertex_hole(ctx: AssignmentContext, p: int, block: Block) -> Optional[int]:
    best = None
    holes = ctx.catalog.holes
    for u in block.members:
        for hid in ctx.catalog.pair_index.get((min(p, u), max(p, u)), ()):
            if holes[hid].k == 5 and (best is None or hid < best):
                best = hid
                break  # ids are sorted, the first 5-hole is the smallest here
    return best


def assign_block(ctx: AssignmentContext, p: int, block: Block) -> Assignment:
    key = (p, block.start)
    cached = ctx._assigned.get(key)
    if cached is not None and cached.block == block:
        return cached
    hid = _vertex_hole(ctx, p, block)
    if hid is not None:
        res = Assignment(p, block, hid, "vertex", None, AssignmentClass.GOOD_TRUSTWORTHY)
    else:
        family = candidate_family(ctx, p, block)
        if not family:
            raise NoCandidate(f"block at {block.start} of point {p} admits no 5-hole")
        ro, pos = ctx.radial(p), ctx.positions(p)
        ranked = []
        for fid, anchors in family:
            h = ctx.hole(fid)
            cls = classify(ctx.ps, p, h, sector_of(ro, h, pos))
            ranked.append((_RANK[cls], fid, anchors, cls))
        _, fid, anchors, cls = min(ranked)
        res = Assignment(p, block, fid, "anchored", anchors, cls)
    ctx._assigned[key] = res
    return res


def find_good_block(ctx: AssignmentContext, p: int, start: int) -> tuple[Block, Assignment]:
    """Given 11 radial points from ``start`` whose middle angle is reflex, find a good block."""
    ro = ctx.radial(p)
    if not 0 <= start <= len(ro) - (BLOCK + 1):
        raise PreconditionViolated(f"no window of 11 points at offset {start}")
    w = ro.order[start : start + BLOCK + 1]
    pts = ctx.ps.points
    if angle_lt_pi(pts[w[4]], pts[w[5]], pts[w[6]]):
        raise PreconditionViolated("middle angle of the window is not reflex")
    for s in (start, start + 1):
        block = ctx.block_at(p, s)
        a = assign_block(ctx, p, block)
        if a.is_good:
            return block, a
    raise NoCandidate(f"no good block in window at {start} of point {p}")


def good_candidate_starts(ctx: AssignmentContext, p: int) -> list[int]:
    m = len(ctx.radial(p))
    return [s for s in range(m - BLOCK + 1) if assign_block(ctx, p, ctx.block_at(p, s)).is_good]


def max_disjoint_windows(starts: Iterable[int], width: int = BLOCK) -> list[int]:
    """Earliest-end greedy; optimal for equal-length intervals."""
    chosen: list[int] = []
    end = None
    for s in sorted(starts):
        if end is None or s >= end:
            chosen.append(s)
            end = s + width
    return chosen


def select_blocks(ctx: AssignmentContext, p: int) -> list[Block]:
    """Maximum family of disjoint good blocks, gaps filled with plain blocks."""
    m = len(ctx.radial(p))
    chosen = max_disjoint_windows(good_candidate_starts(ctx, p))
    starts = list(chosen)
    covered = [False] * m
    for s in chosen:
        for t in range(s, s + BLOCK):
            covered[t] = True
    t = 0
    while t < m:
        if covered[t]:
            t += 1
            continue
        r = t
        while t < m and not covered[t]:
            t += 1
        starts.extend(range(r, r + (t - r) // BLOCK * BLOCK, BLOCK))
    return [ctx.block_at(p, s) for s in sorted(starts)]


def gap_runs(m: int, good_blocks: Iterable[Block]) -> list[tuple[int, int]]:
    """Maximal inclusive position ranges not covered by the given blocks."""
    covered = [False] * m
    for b in good_blocks:
        for t in range(b.start, b.start + BLOCK):
            covered[t] = True
    runs = []
    t = 0
    while t < m:
        if covered[t]:
            t += 1
            continue
        r = t
        while t < m and not covered[t]:
            t += 1
        runs.append((r, t - 1))
    return runs


def gap_convexity_violations(ctx: AssignmentContext, p: int, blocks: Sequence[Block]) -> list[int]:
    """Positions ``j`` with a reflex angle deep inside a gap free of good blocks.

    A gap ``r..t`` with ``t - r >= 10`` must have every angle at positions
    ``r+5..t-5`` below pi.
    """
    ro = ctx.radial(p)
    pts = ctx.ps.points
    good = [b for b in blocks if assign_block(ctx, p, b).is_good]
    bad = []
    for r, t in gap_runs(len(ro), good):
        if t - r < 10:
            continue
        for j in range(r + 5, t - 4):
            a, b, c = ro.order[j - 1], ro.order[j], ro.order[j + 1]
            if not angle_lt_pi(pts[a], pts[b], pts[c]):
                bad.append(j)
    return bad


# -- Whole-set ledger ---------------------------------------------------------

@dataclass
class AssignmentLedger:
    ctx: AssignmentContext
    assignments: list[Assignment] = field(default_factory=list)
    blocks: dict[int, list[Block]] = field(default_factory=dict)

    @property
    def ps(self) -> PointSet:
        return self.ctx.ps

    @property
    def centers(self) -> list[int]:
        return sorted(self.blocks)

    def g(self, p: int) -> int:
        return sum(1 for a in self.assignments if a.center == p and a.is_good)

    def g_all(self) -> dict[int, int]:
        out = {p: 0 for p in self.blocks}
        for a in self.assignments:
            if a.is_good:
                out[a.center] += 1
        return out

    def by_center(self, p: int) -> list[Assignment]:
        return [a for a in self.assignments if a.center == p]

    def hole_multiplicity(self, p: int) -> Counter:
        return Counter(a.hole_id for a in self.assignments if a.center == p)

    def nonvertex_centers(self, hole_id: int) -> list[Assignment]:
        return [a for a in self.assignments if a.hole_id == hole_id and a.kind == "anchored"]

    def per_layer_nonvertex(self) -> dict[tuple[int, int], int]:
        """``(hole_id, layer) -> number of distinct non-vertex centers``."""
        seen = defaultdict(set)
        for a in self.assignments:
            if a.kind == "anchored":
                seen[(a.hole_id, a.block.layer)].add(a.center)
        return {k: len(v) for k, v in seen.items()}

    def distinct_holes(self) -> set[int]:
        return {a.hole_id for a in self.assignments}

    def good_per_hole(self) -> Counter:
        return Counter(a.hole_id for a in self.assignments if a.is_good)

    def class_counts(self) -> dict[str, int]:
        c = Counter(a.cls.value for a in self.assignments)
        c["vertex"] = sum(1 for a in self.assignments if a.kind == "vertex")
        return {k: c.get(k, 0) for k in ("vertex", "good_trustworthy", "good_dubious", "bad")}


def run_assignment(ps: PointSet, catalog: HoleCatalog | None = None,
                   dec: LayerDecomposition | None = None) -> AssignmentLedger:
    ctx = AssignmentContext(ps, dec, catalog)
    ledger = AssignmentLedger(ctx)
    for p in ctx.dec.centers():
        blocks = select_blocks(ctx, p)
        ledger.blocks[p] = blocks
        for b in blocks:
            ledger.assignments.append(assign_block(ctx, p, b))
    return ledger


@dataclass(frozen=True)
class PartitionClass:
    anchors: tuple[int, int]
    side: int
    members: tuple[int, ...]
    convex: bool


@dataclass(frozen=True)
class HolePartitionReport:
    hole_id: int
    classes: tuple[PartitionClass, ...]

    @property
    def valid(self) -> bool:
        return all(c.convex for c in self.classes) and len(self.classes) <= 20


def lemma31_partition(ledger: AssignmentLedger, hole_id: int) -> HolePartitionReport:
    """Split non-vertex centers of a hole by anchor pair and side of the anchor line."""
    pts = ledger.ps.points
    groups: dict[tuple[tuple[int, int], int], set[int]] = defaultdict(set)
    for a in ledger.nonvertex_centers(hole_id):
        u, v = a.anchors
        side = 1 if cross(pts[u], pts[v], pts[a.center]) > 0 else -1
        groups[(a.anchors, side)].add(a.center)
    classes = tuple(
        PartitionClass(anchors, side, tuple(sorted(members)), is_convex_position(ledger.ps, members))
        for (anchors, side), members in sorted(groups.items())
    )
    return HolePartitionReport(hole_id, classes)


def sector_point_kind(ps: PointSet, p: int, hole: Hole, q: int) -> str:
    """``nearby`` when ``q`` lies inside the hull of the hole plus ``p``, else ``away``."""
    hull = convex_hull(ps, (*hole.vertices, p))
    return "nearby" if point_in_convex_polygon(ps.points, hull, ps.points[q]) else "away"
