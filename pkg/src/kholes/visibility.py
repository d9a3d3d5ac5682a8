"""Convex runs of radial orders, visible and long 5-holes, and the end-to-end report.

For a center ``p`` the radial order of its suffix set is cut into *runs*:
maximal stretches of consecutive points that turn the same way.  Each run is
then checked to be in convex position with an empty hull against the whole
set; a run failing the check is cut at the longest valid prefix and the cut
is recorded in the run's flags.  Every 5-subset of a run is then a 5-hole
seen by ``p`` (visible); it is *long* when its vertices sit at least ten
radial positions apart.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence

from .assignment import (
    AssignmentContext,
    AssignmentLedger,
    gap_convexity_violations,
    lemma31_partition,
    run_assignment,
)
from .errors import BudgetExceeded
from .geometry import PointSet, convex_hull, cross, is_convex_position, polygon_empty
from .holes import HoleCatalog, build_catalog

LONG_GAP = 10
DEFAULT_LONG_CAP = 10**6


@dataclass(frozen=True)
class RunFlags:
    convex: bool
    empty: bool
    verify_split: bool  # the run was cut short by a failed check


@dataclass(frozen=True)
class ConvexRunPartition:
    """Runs as inclusive ``(first, last)`` positions into ``order``."""

    center: int
    order: tuple[int, ...]
    runs: tuple[tuple[int, int], ...]
    flags: tuple[RunFlags, ...]

    def sizes(self) -> list[int]:
        return [b - a + 1 for a, b in self.runs]

    def members(self, r: int) -> tuple[int, ...]:
        a, b = self.runs[r]
        return self.order[a : b + 1]

    @property
    def verify_splits(self) -> int:
        return sum(1 for f in self.flags if f.verify_split)

    def run_of(self) -> dict[int, int]:
        """Point index -> run number."""
        return {v: r for r in range(len(self.runs)) for v in self.members(r)}


def _turn_runs(pts, order: Sequence[int]) -> list[tuple[int, int]]:
    # maximal stretches whose interior turns share one sign
    m = len(order)
    runs = []
    s = 0
    while s < m:
        e = s + 1
        sign = 0
        while e + 1 < m:
            t = cross(pts[order[e - 1]], pts[order[e]], pts[order[e + 1]])
            t = 1 if t > 0 else -1
            if sign and t != sign:
                break
            sign = t
            e += 1
        e = min(e, m - 1)
        runs.append((s, e))
        s = e + 1
    return runs


def _valid_run(ps: PointSet, members: Sequence[int]) -> tuple[bool, bool]:
    if len(members) < 3:
        return True, True
    hull = convex_hull(ps, members)
    convex = len(hull) == len(members)
    return convex, polygon_empty(ps, hull)


def convex_runs(ctx: AssignmentContext, p: int) -> ConvexRunPartition:
    ro = ctx.radial(p)
    order = ro.order
    pts = ctx.ps.points
    runs: list[tuple[int, int]] = []
    flags: list[RunFlags] = []
    for a, b in _turn_runs(pts, order):
        while a <= b:
            convex, empty = _valid_run(ctx.ps, order[a : b + 1])
            if convex and empty:
                runs.append((a, b))
                flags.append(RunFlags(True, True, False))
                break
            # subsets of a valid run are valid, so the longest valid prefix is found by bisection
            lo, hi = a + 1, b  # prefix a..lo is valid (two points), a..hi is not
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if all(_valid_run(ctx.ps, order[a : mid + 1])):
                    lo = mid
                else:
                    hi = mid
            runs.append((a, lo))
            flags.append(RunFlags(True, True, True))
            a = lo + 1
    return ConvexRunPartition(p, order, tuple(runs), tuple(flags))


def count_visible(runs: ConvexRunPartition) -> int:
    return sum(comb(s, 5) for s in runs.sizes())


def long_count(size: int) -> int:
    """5-subsets of ``size`` consecutive positions with pairwise gaps >= 10."""
    return comb(max(0, size - 4 * (LONG_GAP - 1)), 5)


def count_long_visible(runs: ConvexRunPartition) -> int:
    return sum(long_count(s) for s in runs.sizes())


def iter_long_positions(size: int) -> Iterable[tuple[int, ...]]:
    """Explicit 5-subsets of ``range(size)`` with consecutive gaps >= 10."""

    def rec(prefix: list[int], start: int):
        if len(prefix) == 5:
            yield tuple(prefix)
            return
        need = (4 - len(prefix)) * LONG_GAP
        for t in range(start, size - need):
            prefix.append(t)
            yield from rec(prefix, t + LONG_GAP)
            prefix.pop()

    return rec([], 0)


def long_visible_centers(partitions: Iterable[ConvexRunPartition],
                         cap: int = DEFAULT_LONG_CAP) -> dict[tuple[int, ...], list[int]]:
    """Sorted hole vertex tuple -> centers seeing it as visible and long."""
    seen: dict[tuple[int, ...], list[int]] = defaultdict(list)
    total = 0
    for part in partitions:
        for r, size in enumerate(part.sizes()):
            total += long_count(size)
            if total > cap:
                raise BudgetExceeded(f"more than {cap} long visible holes")
            members = part.members(r)
            for ts in iter_long_positions(size):
                seen[tuple(sorted(members[t] for t in ts))].append(part.center)
    return {k: sorted(v) for k, v in sorted(seen.items())}


@dataclass(frozen=True)
class SignClass:
    signs: tuple[int, ...]
    members: tuple[int, ...]
    convex: bool


@dataclass(frozen=True)
class CenterClassReport:
    hole: tuple[int, ...]
    centers: tuple[int, ...]
    classes: tuple[SignClass, ...]
    merged: int  # convex classes left after greedy merging

    @property
    def valid(self) -> bool:
        return all(c.convex for c in self.classes) and len(self.classes) <= 56


def lemma41_check(ps: PointSet, hole: Sequence[int], centers: Iterable[int]) -> CenterClassReport:
    """Group centers by side of each line through two hole vertices."""
    pts = ps.points
    verts = tuple(sorted(hole))
    centers = tuple(sorted(set(centers)))
    groups: dict[tuple[int, ...], list[int]] = defaultdict(list)
    for c in centers:
        signs = tuple(1 if cross(pts[u], pts[v], pts[c]) > 0 else -1 for u, v in combinations(verts, 2))
        groups[signs].append(c)
    classes = tuple(
        SignClass(signs, tuple(ms), is_convex_position(ps, ms)) for signs, ms in sorted(groups.items())
    )
    merged = [list(c.members) for c in classes if c.convex]
    changed = True
    while changed:
        changed = False
        for i in range(len(merged)):
            for j in range(i + 1, len(merged)):
                if is_convex_position(ps, merged[i] + merged[j]):
                    merged[i] += merged.pop(j)
                    changed = True
                    break
            if changed:
                break
    return CenterClassReport(verts, centers, classes, len(merged) + sum(1 for c in classes if not c.convex))


# -- End-to-end report --------------------------------------------------------

@dataclass
class CenterRow:
    center: int
    layer: int
    g: int
    m: int
    blocks: int
    distinct_holes: int
    runs: int
    verify_splits: int
    visible: int
    long_visible: int
    eq2: Optional[int]
    eq3: Optional[Fraction]


def eq2_value(m: int, g: int) -> Optional[int]:
    if g <= 0:
        return None
    r = 100 * g
    return r * comb(m // r, 5)


def eq3_term(n: int, g: int) -> Optional[Fraction]:
    return Fraction(n**5, g**4) if g > 0 else None


def _frac(x: Optional[Fraction]) -> str:
    if x is None:
        return "unbounded"
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class PipelineReport:
    n: int
    layer_sizes: list[int]
    k_mid: int
    catalog_5holes: int
    ledger_holes: int
    rows: list[CenterRow]
    class_counts: dict[str, int]
    max_good_per_hole: int
    long_visible_holes: int
    max_long_centers: int
    holes_over_threshold: int
    sign_classes_max: int
    sign_classes_merged_max: int
    runs_over_bound: list[int] = field(default_factory=list)
    verdicts: dict[str, bool] = field(default_factory=dict)

    @property
    def eq1(self) -> int:
        return sum(r.g for r in self.rows)

    def eq3_max(self) -> Optional[Fraction]:
        terms = [r.eq3 for r in self.rows if r.eq3 is not None]
        return max(terms) if terms else None

    def eq4_sum(self) -> Fraction:
        return sum((r.eq3 for r in self.rows if r.eq3 is not None), Fraction(0))

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "layers": {"sizes": self.layer_sizes, "k_mid": self.k_mid},
            "catalog_5holes": self.catalog_5holes,
            "ledger_holes": self.ledger_holes,
            "class_counts": dict(self.class_counts),
            "max_good_per_hole": self.max_good_per_hole,
            "eq1": self.eq1,
            "eq3_max": _frac(self.eq3_max()),
            "eq4_sum": _frac(self.eq4_sum()),
            "unbounded_centers": sum(1 for r in self.rows if r.g == 0),
            "long_visible_holes": self.long_visible_holes,
            "max_long_centers": self.max_long_centers,
            "holes_over_threshold": self.holes_over_threshold,
            "sign_classes_max": self.sign_classes_max,
            "sign_classes_merged_max": self.sign_classes_merged_max,
            "runs_over_bound": list(self.runs_over_bound),
            "centers": [
                {
                    "point": r.center, "layer": r.layer, "g": r.g, "m": r.m, "blocks": r.blocks,
                    "distinct_holes": r.distinct_holes, "runs": r.runs,
                    "verify_splits": r.verify_splits, "visible": r.visible,
                    "long_visible": r.long_visible,
                    "eq2": "unbounded" if r.eq2 is None else r.eq2,
                    "eq3": _frac(r.eq3),
                }
                for r in self.rows
            ],
            "verdicts": dict(sorted(self.verdicts.items())),
        }


def _binomial_convexity(sizes: Sequence[int]) -> bool:
    r, m = len(sizes), sum(sizes)
    return r == 0 or sum(comb(s, 5) for s in sizes) >= r * comb(m // r, 5)


def pipeline_report(ps: PointSet, catalog: HoleCatalog | None = None) -> PipelineReport:
    n = len(ps)
    if catalog is None:
        catalog = build_catalog(ps, [5])
    ledger: AssignmentLedger = run_assignment(ps, catalog)
    ctx = ledger.ctx
    dec = ctx.dec
    g = ledger.g_all()
    parts = {p: convex_runs(ctx, p) for p in ledger.centers}

    rows = []
    binom_ok = eq2_ok = verified_ok = True
    over = []
    for p in ledger.centers:
        part = parts[p]
        sizes = part.sizes()
        m = len(part.order)
        vis = count_visible(part)
        row = CenterRow(
            p, ctx.layer(p), g[p], m, len(ledger.blocks[p]), len(ledger.hole_multiplicity(p)),
            len(part.runs), part.verify_splits, vis, count_long_visible(part),
            eq2_value(m, g[p]), eq3_term(n, g[p]),
        )
        rows.append(row)
        if row.runs > 100 * row.g + 2:
            over.append(p)
        binom_ok &= _binomial_convexity(sizes)
        if row.eq2 is not None and m // (100 * row.g) >= 5:
            eq2_ok &= vis >= row.eq2
        for r in range(len(part.runs)):
            verified_ok &= all(_valid_run(ps, part.members(r)))

    long_holes = long_visible_centers(parts.values())
    threshold = [h for h, cs in long_holes.items() if len(cs) ** 11 >= n**10]
    l41 = [lemma41_check(ps, h, cs) for h, cs in long_holes.items()]

    k = dec.k_mid
    D = len(ledger.distinct_holes())
    need = sum(-(-len(b) // 4) for b in ledger.blocks.values())
    verdicts = {
        "runs_bound": not over,
        "runs_verified": verified_ok,
        "binomial_convexity": binom_ok,
        "visible_vs_eq2": eq2_ok,
        "multiplicity_le_4": all(max(ledger.hole_multiplicity(p).values(), default=0) <= 4
                                  for p in ledger.centers),
        "per_layer_nonvertex_le_40": all(v <= 40 for v in ledger.per_layer_nonvertex().values()),
        "distinct_per_center": all(len(ledger.hole_multiplicity(p)) >= -(-len(ledger.blocks[p]) // 4)
                                   for p in ledger.centers),
        "ledger_inequality": D * (40 * k + 5) >= need,
        "catalog_ge_ledger": catalog.count(5) >= D,
        "gap_convexity": all(not gap_convexity_violations(ctx, p, ledger.blocks[p])
                             for p in ledger.centers),
        "lemma31": all(lemma31_partition(ledger, h).valid for h in ledger.distinct_holes()),
        "lemma41": all(r.valid for r in l41),
    }
    if n % 80 == 0:
        verdicts["count_bound"] = 160 * D * (40 * k + 5) >= n * n
    good = ledger.good_per_hole()
    return PipelineReport(
        n=n,
        layer_sizes=dec.sizes(),
        k_mid=k,
        catalog_5holes=catalog.count(5),
        ledger_holes=D,
        rows=rows,
        class_counts=ledger.class_counts(),
        max_good_per_hole=max(good.values(), default=0),
        long_visible_holes=len(long_holes),
        max_long_centers=max((len(c) for c in long_holes.values()), default=0),
        holes_over_threshold=len(threshold),
        sign_classes_max=max((len(r.classes) for r in l41), default=0),
        sign_classes_merged_max=max((r.merged for r in l41), default=0),
        runs_over_bound=over,
        verdicts=verdicts,
    )
