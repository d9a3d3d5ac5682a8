"""Named property suites: generate inputs, check literal claims, collect failures.

Every trial draws its input from its own seed, derived from
``(suite, seed, trial)`` by BLAKE2b, so verdicts do not depend on how trials
are spread over workers.  A failing trial keeps its seed and serialized
input; :func:`replay` re-runs the check on that input.
"""
from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .assignment import (
    BLOCK,
    Assignment,
    AssignmentContext,
    assign_block,
    check_pentagon_outcome,
    find_good_block,
    gap_convexity_violations,
    gap_runs,
    good_candidate_starts,
    lemma31_partition,
    pentagon_selection,
    run_assignment,
    select_blocks,
)
from .errors import KHolesError, UnknownSuite
from .generators import gen_convex, gen_horton, gen_random
from .geometry import (
    PointSet,
    angle_lt_pi,
    convex_hull,
    cross,
    is_convex_position,
    polygon_empty,
    triangle_empty,
    validate_general_position,
)
from .holes import count_chain_dp, enumerate_brute
from .visibility import (
    convex_runs,
    iter_long_positions,
    lemma41_check,
    long_count,
    long_visible_centers,
    pipeline_report,
)
from .parallel import pmap


def trial_seed(suite: str, seed: int, trial: int) -> int:
    h = hashlib.blake2b(f"{suite}:{seed}:{trial}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


@dataclass
class Case:
    points: PointSet
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"points": [list(p) for p in self.points], "params": dict(self.params)}

    @classmethod
    def from_dict(cls, d: dict) -> "Case":
        return cls(PointSet(tuple(p) for p in d["points"]), dict(d.get("params", {})))


@dataclass
class Failure:
    trial: int
    seed: int
    problems: list[str]
    case: dict

    def to_dict(self) -> dict:
        return {"trial": self.trial, "seed": self.seed, "problems": self.problems, "case": self.case}


@dataclass
class SuiteResult:
    name: str
    trials: int
    n: int
    seed: int
    failures: list[Failure] = field(default_factory=list)
    metrics: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "trials": self.trials,
            "n": self.n,
            "seed": self.seed,
            "passed": self.passed,
            "failures": [f.to_dict() for f in self.failures],
            "metrics": self.metrics,
        }


def _merge(total: dict, part: dict) -> None:
    # keys starting with max_ keep the maximum, everything else is summed
    for k, v in part.items():
        if k.startswith("max_"):
            total[k] = max(total.get(k, v), v)
        else:
            total[k] = total.get(k, 0) + v


# -- Input builders -----------------------------------------------------------

def bowl_window(seed: int, size: int = 11) -> PointSet:
    """Point 0 below ``size`` points on a noisy upward parabola.

    Seen from point 0 the bowl is a chain whose angles are mostly below pi;
    noise and a raised middle point add reflex angles.  Such inputs reach the
    anchored, dubious and bad branches that random sets almost never do.
    """
    r = random.Random(seed)
    while True:
        amp = r.choice([0, 5, 20, 60, 150])
        pts = [(r.randint(-40, 40), 0)]
        for j in range(size):
            x = (j - size // 2) * 100 + r.randint(-30, 30)
            pts.append((x, 3000 + x * x // 400 + r.randint(-amp, amp)))
        mid = 1 + size // 2
        pts[mid] = (pts[mid][0], pts[mid][1] + r.randint(0, 150))
        ps = PointSet(pts)
        if validate_general_position(ps) is None:
            return ps


def bowl_fan(seed: int) -> PointSet:
    """A few points on a low arc under a noisy bowl, so several centers see the bowl."""
    r = random.Random(seed)
    while True:
        pts = []
        c = r.choice([2, 3, 4, 5])
        spread, flat = r.choice([60, 150, 400]), r.choice([300, 800, 3000])
        for i in range(c):
            x = int((i - (c - 1) / 2) * spread)
            pts.append((x + r.randint(-5, 5), x * x // flat - 2000 + r.randint(-5, 5)))
        for j in range(r.choice([11, 12, 14])):
            x = (j - 6) * 100 + r.randint(-30, 30)
            pts.append((x, 3000 + x * x // 400 + r.randint(-20, 20)))
        ps = PointSet(pts)
        if validate_general_position(ps) is None:
            return ps


def nested_convex(seed: int, n: int) -> PointSet:
    """A convex polygon with a smaller convex polygon inside (two layers)."""
    outer = max(3, n // 5)
    inner = n - outer
    a = gen_convex(outer, seed, 1 << 20)
    b = gen_convex(inner, seed + 1, 1 << 18)
    ps = PointSet(list(a) + list(b))
    if validate_general_position(ps) is not None:
        return nested_convex(seed + 2, n)
    return ps


def _reflex_window_random(seed: int) -> tuple[PointSet, int]:
    # 12 random points and a hull vertex whose 11-point radial window has a reflex middle
    attempt = 0
    while True:
        ps = gen_random(12, trial_seed("window", seed, attempt), 1000)
        for p in convex_hull(ps, range(12)):
            ctx = AssignmentContext(ps)
            w = ctx.radial(p).order
            if not angle_lt_pi(ps[w[4]], ps[w[5]], ps[w[6]]):
                return ps, p
        attempt += 1


# -- Independent rechecks -----------------------------------------------------

def assignment_problems(ctx: AssignmentContext, a: Assignment) -> list[str]:
    """Recheck one assignment from primitive predicates only."""
    ps, p = ctx.ps, a.center
    h = ctx.hole(a.hole_id)
    out = []
    hull = convex_hull(ps, h.vertices)
    if len(hull) != 5 or not polygon_empty(ps, hull):
        out.append(f"hole {a.hole_id} is not a 5-hole")
    ro = ctx.radial(p)
    if a.block.members != ro.order[a.block.start : a.block.start + BLOCK]:
        out.append("block members are not consecutive radial points")
    if a.kind == "vertex":
        if p not in h.vertices or not set(h.vertices) & set(a.block.members):
            out.append("vertex assignment without p and a block member")
        if a.cls.value != "good_trustworthy":
            out.append("vertex assignment not classed trustworthy")
        return out
    if not set(h.vertices) <= set(a.block.members):
        out.append("anchored hole leaves its block")
    u, v = a.anchors
    if u not in h.vertices or v not in h.vertices or not triangle_empty(ps, p, u, v):
        out.append("anchor triangle is not empty")
    pos = ctx.positions(p)
    ts = sorted(pos[v] for v in h.vertices)
    sector = ro.order[ts[0] : ts[-1] + 1]
    if len(sector) > BLOCK:
        out.append("sector larger than a block")
    bad = is_convex_position(ps, sector) and len(convex_hull(ps, (*sector, p))) == 3
    dubious = not bad and len(convex_hull(ps, (*h.vertices, p))) == 3
    expect = "bad" if bad else "good_dubious" if dubious else "good_trustworthy"
    if a.cls.value != expect:
        out.append(f"class {a.cls.value} but predicates give {expect}")
    return out


def _max_disjoint_dp(good: set[int], m: int) -> int:
    best = [0] * (m + BLOCK + 1)
    for s in range(m - 1, -1, -1):
        best[s] = best[s + 1]
        if s in good:
            best[s] = max(best[s], 1 + best[s + BLOCK])
    return best[0]


# -- Suites -------------------------------------------------------------------

Outcome = tuple[list[str], dict]


@dataclass(frozen=True)
class Suite:
    name: str
    default_n: int
    make: Callable[[int, int, int], Case]
    check: Callable[[Case], Outcome]
    max_trials: Optional[Callable[[int], int]] = None


def _make_random(min_n: int):
    def make(s: int, n: int, trial: int) -> Case:
        return Case(gen_random(max(n, min_n), s))
    return make


def _check_harborth(c: Case) -> Outcome:
    h5 = count_chain_dp(c.points, 5)
    return ([] if h5 >= 1 else ["no 5-hole"]), {"max_h5": h5}


def _check_fourhole(c: Case) -> Outcome:
    h4 = count_chain_dp(c.points, 4)
    return ([] if h4 >= 1 else ["no 4-hole"]), {"max_h4": h4}


def _make_dp_oracle(s: int, n: int, trial: int) -> Case:
    r = random.Random(s)
    size = r.randint(3, max(3, min(n, 14)))
    return Case(gen_random(size, s, r.choice([30, 100, 10_000])))


def _check_dp_oracle(c: Case) -> Outcome:
    probs = []
    for k in (3, 4, 5, 6):
        b, d = len(enumerate_brute(c.points, k)), count_chain_dp(c.points, k)
        if b != d:
            probs.append(f"k={k}: brute {b} dp {d}")
    return probs, {"sets": 1}


def _horton_levels(n: int) -> int:
    return max(1, min(6, int(math.log2(max(n, 2)))))


def _make_horton(s: int, n: int, trial: int) -> Case:
    m = 1 + trial % _horton_levels(n)
    return Case(gen_horton(m), {"m": m})


def _check_horton(c: Case) -> Outcome:
    ps, n = c.points, len(c.points)
    probs = []
    h = {k: count_chain_dp(ps, k) for k in (5, 6, 7)}
    if h[7]:
        probs.append(f"{h[7]} 7-holes")
    if h[5] > 2 * n * n:
        probs.append(f"h5 = {h[5]} > 2n^2")
    if 2 * h[6] > n * n:
        probs.append(f"h6 = {h[6]} > n^2/2")
    if any(x != i for i, (x, _) in enumerate(sorted(ps))):
        probs.append("x-coordinates are not 0..n-1")
    even = [q for q in ps if q[0] % 2 == 0]
    odd = [q for q in ps if q[0] % 2 == 1]
    for base, other, sign in ((even, odd, 1), (odd, even, -1)):
        for i in range(len(base)):
            for j in range(i + 1, len(base)):
                for q in other:
                    if cross(base[i], base[j], q) * sign <= 0:
                        probs.append("separation fails")
                        return probs, {}
    return probs, {"max_h5": h[5], "max_h6": h[6]}


def _make_lemma22(s: int, n: int, trial: int) -> Case:
    if trial % 2:
        return Case(bowl_window(s, 10), {"p": 0})
    ps = gen_random(11, s, 1000)
    hull = convex_hull(ps, range(11))
    return Case(ps, {"p": hull[random.Random(s).randrange(len(hull))]})


def _check_lemma22(c: Case) -> Outcome:
    out = pentagon_selection(c.points, c.params["p"])
    return check_pentagon_outcome(c.points, c.params["p"], out), {out.kind: 1}


def _ledger_problems(ps: PointSet) -> Outcome:
    ledger = run_assignment(ps)
    ctx = ledger.ctx
    probs = []
    for a in ledger.assignments:
        probs.extend(f"point {a.center} block {a.block.start}: {x}" for x in assignment_problems(ctx, a))
    for p in ledger.centers:
        mult = ledger.hole_multiplicity(p)
        if mult and max(mult.values()) > 4:
            probs.append(f"point {p}: a hole assigned {max(mult.values())} times")
        if len(mult) < -(-len(ledger.blocks[p]) // 4):
            probs.append(f"point {p}: too few distinct holes")
        if len(ctx.radial(p)) >= BLOCK and not ledger.blocks[p]:
            probs.append(f"point {p}: no blocks")
    for (hid, layer), cnt in ledger.per_layer_nonvertex().items():
        if cnt > 40:
            probs.append(f"hole {hid}: {cnt} non-vertex centers in layer {layer}")
    n, k = len(ps), ctx.dec.k_mid
    D = len(ledger.distinct_holes())
    if n % 80 == 0 and 160 * D * (40 * k + 5) < n * n:
        probs.append(f"{D} distinct holes below the counting bound")
    good = ledger.good_per_hole()
    metrics = {"max_good_per_hole": max(good.values(), default=0),
               "max_multiplicity": max((max(ledger.hole_multiplicity(p).values(), default=0)
                                        for p in ledger.centers), default=0),
               "anchored": sum(1 for a in ledger.assignments if a.kind == "anchored")}
    return probs, metrics


def _check_thm21(c: Case) -> Outcome:
    return _ledger_problems(c.points)


def _make_lemma31(s: int, n: int, trial: int) -> Case:
    if trial % 2:
        return Case(bowl_fan(s), {"kind": "bowl_fan"})
    return Case(gen_random(max(n, 20), s), {"kind": "random"})


def _check_lemma31(c: Case) -> Outcome:
    ledger = run_assignment(c.points)
    probs = []
    classes = 0
    for hid in sorted(ledger.distinct_holes()):
        rep = lemma31_partition(ledger, hid)
        classes = max(classes, len(rep.classes))
        if not rep.valid:
            probs.append(f"hole {hid}: partition not convex")
    return probs, {"max_classes": classes,
                   "multi_center_holes": sum(1 for h in ledger.distinct_holes()
                                             if len({a.center for a in ledger.nonvertex_centers(h)}) > 1),
                   "anchored": sum(1 for a in ledger.assignments if a.kind == "anchored")}


def _make_lemma35(s: int, n: int, trial: int) -> Case:
    if trial % 2:
        while True:
            ps = bowl_window(s, 11)
            w = AssignmentContext(ps).radial(0).order
            if not angle_lt_pi(ps[w[4]], ps[w[5]], ps[w[6]]):
                return Case(ps, {"p": 0, "kind": "bowl"})
            s = trial_seed("bowl", s, 0)
    ps, p = _reflex_window_random(s)
    return Case(ps, {"p": p, "kind": "random"})


def _check_lemma35(c: Case) -> Outcome:
    ctx = AssignmentContext(c.points)
    p = c.params["p"]
    try:
        _, a = find_good_block(ctx, p, 0)
    except KHolesError as e:
        return [f"{type(e).__name__}: {e}"], {}
    probs = assignment_problems(ctx, a)
    if not a.is_good:
        probs.append("bad assignment returned")
    return probs, {f"{a.kind}_{a.cls.value}": 1}


def _check_prop36(c: Case) -> Outcome:
    ctx = AssignmentContext(c.points)
    probs = []
    for p in ctx.dec.centers():
        m = len(ctx.radial(p))
        blocks = select_blocks(ctx, p)
        taken = [t for b in blocks for t in range(b.start, b.start + BLOCK)]
        if len(taken) != len(set(taken)) or any(not 0 <= t < m for t in taken):
            probs.append(f"point {p}: blocks overlap or overflow")
        good = set(good_candidate_starts(ctx, p))
        chosen = [b for b in blocks if assign_block(ctx, p, b).is_good]
        if len(chosen) != _max_disjoint_dp(good, m):
            probs.append(f"point {p}: {len(chosen)} good blocks, optimum {_max_disjoint_dp(good, m)}")
        gaps = len(gap_runs(m, chosen))
        if len(blocks) < m // BLOCK - gaps:
            probs.append(f"point {p}: only {len(blocks)} blocks")
        bad = gap_convexity_violations(ctx, p, blocks)
        if bad:
            probs.append(f"point {p}: reflex angles inside good-free gaps at {bad}")
    return probs, {"centers": len(ctx.dec.centers())}


def _make_lemma41(s: int, n: int, trial: int) -> Case:
    if trial % 2:
        return Case(nested_convex(s, max(n, 50)), {"kind": "nested"})
    return Case(gen_random(min(n, 60), s), {"kind": "random"})


def _check_lemma41(c: Case) -> Outcome:
    ctx = AssignmentContext(c.points)
    parts = [convex_runs(ctx, p) for p in ctx.dec.centers()]
    seen = long_visible_centers(parts)
    probs = []
    widest = classes = merged = 0
    for hole, centers in seen.items():
        rep = lemma41_check(c.points, hole, centers)
        widest = max(widest, len(centers))
        classes = max(classes, len(rep.classes))
        merged = max(merged, rep.merged)
        if not rep.valid:
            probs.append(f"hole {hole}: sign classes not convex")
    return probs, {"long_holes": len(seen), "max_centers": widest,
                   "max_classes": classes, "max_merged": merged}


def _make_pipeline(s: int, n: int, trial: int) -> Case:
    return Case(gen_random(n if n else (80, 120)[trial % 2], s))


def _check_pipeline(c: Case) -> Outcome:
    rep = pipeline_report(c.points)
    probs = [f"verdict {k} failed" for k, ok in sorted(rep.verdicts.items()) if not ok]
    ctx = AssignmentContext(c.points)
    for p in ctx.dec.centers():
        for size in convex_runs(ctx, p).sizes():
            if size <= 50 and sum(1 for _ in iter_long_positions(size)) != long_count(size):
                probs.append(f"point {p}: long count mismatch for run of {size}")
    return probs, {"max_runs": max((r.runs for r in rep.rows), default=0),
                   "max_good_per_hole": rep.max_good_per_hole}


SUITES: dict[str, Suite] = {
    s.name: s
    for s in (
        Suite("harborth", 10, _make_random(10), _check_harborth),
        Suite("fourhole", 5, _make_random(5), _check_fourhole),
        Suite("dp_oracle", 14, _make_dp_oracle, _check_dp_oracle),
        Suite("horton", 64, _make_horton, _check_horton, _horton_levels),
        Suite("lemma22", 11, _make_lemma22, _check_lemma22),
        Suite("thm21", 80, _make_random(20), _check_thm21),
        Suite("lemma31", 60, _make_lemma31, _check_lemma31),
        Suite("lemma35", 12, _make_lemma35, _check_lemma35),
        Suite("prop36", 80, _make_random(20), _check_prop36),
        Suite("lemma41", 60, _make_lemma41, _check_lemma41),
        Suite("pipeline", 0, _make_pipeline, _check_pipeline),
    )
}


def _run_trial(args: tuple[str, int, int, int]):
    name, seed, n, trial = args
    suite = SUITES[name]
    s = trial_seed(name, seed, trial)
    case = suite.make(s, n, trial)
    try:
        probs, metrics = suite.check(case)
    except KHolesError as e:
        probs, metrics = [f"{type(e).__name__}: {e}"], {}
    fail = Failure(trial, s, probs, case.to_dict()) if probs else None
    return fail, metrics


def run_suite(name: str, trials: int, n: Optional[int] = None, seed: int = 0,
              workers: int = 1) -> SuiteResult:
    """Run ``trials`` trials of a suite; ``all`` runs every suite in turn."""
    if name == "all":
        total = SuiteResult("all", 0, n or 0, seed)
        for sub in SUITES:
            res = run_suite(sub, trials, n, seed, workers)
            total.trials += res.trials
            total.failures.extend(res.failures)
            total.metrics[sub] = {"trials": res.trials, "failures": len(res.failures), **res.metrics}
        return total
    if name not in SUITES:
        raise UnknownSuite(name)
    suite = SUITES[name]
    n_eff = suite.default_n if n is None else n
    if suite.max_trials is not None:
        trials = min(trials, suite.max_trials(n_eff))
    results = pmap(_run_trial, [(name, seed, n_eff, t) for t in range(trials)], workers)
    out = SuiteResult(name, trials, n_eff, seed)
    for fail, metrics in results:
        if fail is not None:
            out.failures.append(fail)
        _merge(out.metrics, metrics)
    out.metrics = dict(sorted(out.metrics.items()))
    return out


def replay(name: str, failure: dict) -> list[str]:
    """Re-run a suite's check on the input stored in a failure artifact."""
    if name not in SUITES:
        raise UnknownSuite(name)
    case = Case.from_dict(failure["case"])
    try:
        probs, _ = SUITES[name].check(case)
    except KHolesError as e:
        probs = [f"{type(e).__name__}: {e}"]
    return probs
