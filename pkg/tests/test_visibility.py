from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

import kholes.visibility as vis
from kholes.assignment import AssignmentContext, run_assignment
from kholes.errors import BudgetExceeded
from kholes.generators import gen_convex, gen_random
from kholes.geometry import PointSet, convex_hull, cross, is_convex_position, polygon_empty
from kholes.holes import enumerate_brute
from kholes.verify import nested_convex
from kholes.visibility import (
    ConvexRunPartition,
    RunFlags,
    convex_runs,
    count_long_visible,
    count_visible,
    eq2_value,
    eq3_term,
    iter_long_positions,
    lemma41_check,
    long_count,
    long_visible_centers,
    pipeline_report,
)


def partition(sizes):
    runs, t = [], 0
    for s in sizes:
        runs.append((t, t + s - 1))
        t += s
    ok = RunFlags(True, True, False)
    return ConvexRunPartition(0, tuple(range(1, t + 1)), tuple(runs), tuple(ok for _ in runs))


def test_count_examples():
    assert count_visible(partition([10])) == 252
    assert count_visible(partition([4, 6])) == 6
    assert count_long_visible(partition([36])) == 0
    assert count_long_visible(partition([41])) == 1
    assert count_long_visible(partition([46])) == 252
    assert count_long_visible(partition([46, 41, 3])) == 253


@pytest.mark.parametrize("size", [0, 5, 36, 40, 41, 46, 50])
def test_long_count_matches_enumeration(size):
    direct = [c for c in combinations(range(size), 5) if all(b - a >= 10 for a, b in zip(c, c[1:]))] if size <= 46 else None
    listed = list(iter_long_positions(size))
    assert len(listed) == long_count(size)
    if direct is not None:
        assert listed == direct


def test_convex_set_single_run():
    ps = gen_convex(14, 2)
    ctx = AssignmentContext(ps)
    for p in range(14):
        part = convex_runs(ctx, p)
        assert part.runs == ((0, 12),) and part.verify_splits == 0
        assert count_visible(part) == comb(13, 5)


def test_one_turn_change_splits_in_two():
    # a chain bulging away from p, then bending back toward it
    ps = PointSet([(0, 0), (-50, 100), (-20, 130), (10, 140), (40, 135), (45, 160), (52, 200)])
    ctx = AssignmentContext(ps)
    part = convex_runs(ctx, 0)
    assert len(part.runs) == 2
    assert sum(part.sizes()) == 6


def run_checks(ps, part):
    for r in range(len(part.runs)):
        members = part.members(r)
        if len(members) >= 3:
            assert is_convex_position(ps, members)
            assert polygon_empty(ps, convex_hull(ps, members))
        pts = ps.points
        for t in range(1, len(members) - 2):
            a, b, c, d = (pts[members[t + i - 1]] for i in range(4))
            assert (cross(a, b, c) > 0) == (cross(b, c, d) > 0)


@pytest.mark.parametrize("seed", range(4))
def test_runs_partition_and_verify(seed):
    ps = gen_random(50, seed)
    ctx = AssignmentContext(ps)
    for p in ctx.dec.centers():
        part = convex_runs(ctx, p)
        covered = [t for a, b in part.runs for t in range(a, b + 1)]
        assert covered == list(range(len(part.order)))
        run_checks(ps, part)


def test_verify_split_fallback(monkeypatch):
    # with the turn split disabled the whole order is one candidate run
    monkeypatch.setattr(vis, "_turn_runs", lambda pts, order: [(0, len(order) - 1)])
    ps = gen_random(30, 5)
    ctx = AssignmentContext(ps)
    p = ctx.dec.centers()[0]
    part = convex_runs(ctx, p)
    assert part.verify_splits >= 1
    for r in range(len(part.runs)):
        members = part.members(r)
        assert is_convex_position(ps, members)
        assert polygon_empty(ps, convex_hull(ps, members))
        if part.flags[r].verify_split:
            # maximal: adding the next point breaks validity
            a, b = part.runs[r]
            ext = part.order[a : b + 2]
            assert not (is_convex_position(ps, ext) and polygon_empty(ps, convex_hull(ps, ext)))


@pytest.mark.parametrize("seed", range(3))
def test_visible_count_matches_brute(seed):
    ps = gen_random(16, seed, 200)
    ctx = AssignmentContext(ps)
    holes = [set(h.vertices) for h in enumerate_brute(ps, 5)]
    for p in ctx.dec.centers():
        part = convex_runs(ctx, p)
        runs = [set(part.members(r)) for r in range(len(part.runs))]
        brute = sum(1 for h in holes if any(h <= r for r in runs))
        assert count_visible(part) == brute


def test_eq_values():
    assert eq2_value(1000, 2) == 200 * comb(5, 5)
    assert eq2_value(120, 1) == 0
    assert eq2_value(50, 0) is None
    assert eq3_term(10, 2) == Fraction(100000, 16)
    assert eq3_term(10, 0) is None


def test_center_classes_small_and_signs():
    ps = gen_convex(12, 1)
    hole = (0, 2, 4, 6, 8)
    assert lemma41_check(ps, hole, []).valid
    assert lemma41_check(ps, hole, [1, 3]).valid
    rep = lemma41_check(ps, hole, [1, 3, 5, 7, 9, 10, 11])
    assert rep.valid and len(rep.classes) <= 56
    assert sum(len(c.members) for c in rep.classes) == 7
    assert rep.merged == 1


def test_center_classes_on_nested_layers():
    ps = nested_convex(3, 55)
    ctx = AssignmentContext(ps)
    seen = long_visible_centers([convex_runs(ctx, p) for p in ctx.dec.centers()])
    assert seen
    for hole, centers in seen.items():
        rep = lemma41_check(ps, hole, centers)
        assert rep.valid


def test_long_visible_budget():
    ps = nested_convex(3, 55)
    ctx = AssignmentContext(ps)
    parts = [convex_runs(ctx, p) for p in ctx.dec.centers()]
    with pytest.raises(BudgetExceeded):
        long_visible_centers(parts, cap=10)


def test_pipeline_random_80():
    rep = pipeline_report(gen_random(80, 1))
    assert rep.ok, rep.verdicts
    assert "count_bound" in rep.verdicts
    for r in rep.rows:
        assert r.runs <= 100 * r.g + 2
    d = rep.to_dict()
    assert d["eq1"] == sum(r.g for r in rep.rows)


def test_pipeline_convex_set():
    n = 16
    rep = pipeline_report(gen_convex(n, 4))
    assert rep.ok
    for r in rep.rows:
        assert r.runs == 1 and r.m == n - 1 and r.visible == comb(n - 1, 5)


def test_pipeline_unbounded_sentinel():
    # nine points: radial orders have 8 points, so no blocks and g = 0 everywhere
    d = pipeline_report(gen_random(9, 2)).to_dict()
    assert d["centers"] and all(c["g"] == 0 for c in d["centers"])
    assert all(c["eq3"] == "unbounded" and c["eq2"] == "unbounded" for c in d["centers"])
    assert d["eq3_max"] == "unbounded" and d["eq4_sum"] == "0"
    assert d["unbounded_centers"] == len(d["centers"])


def test_runs_bound_only_fails_without_good_blocks():
    # orders shorter than a block carry no good assignment, so nothing limits their runs
    for n in (9, 12, 20):
        rep = pipeline_report(gen_random(n, 0))
        g = {r.center: r.g for r in rep.rows}
        assert all(g[p] == 0 for p in rep.runs_over_bound)
        assert rep.verdicts["runs_bound"] == (not rep.runs_over_bound)


def test_pipeline_reuses_catalog():
    from kholes.holes import build_catalog

    ps = gen_random(40, 6)
    cat = build_catalog(ps, [5])
    assert pipeline_report(ps, cat).to_dict() == pipeline_report(ps).to_dict()


def test_ledger_feeds_runs():
    ps = gen_random(40, 2)
    ledger = run_assignment(ps)
    for p in ledger.centers:
        assert convex_runs(ledger.ctx, p).center == p
