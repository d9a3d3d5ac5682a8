"""Command-line front end.

Exit status: 0 on success or when every verification passes, 1 when a
verification fails, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .assignment import run_assignment
from .errors import KHolesError
from .generators import DEFAULT_CONVEX_RANGE, DEFAULT_RANGE, GenSpec, gen_random
from .geometry import ensure_general_position
from .holes import MAX_K, count_chain_dp, enumerate_brute
from .io import dumps, format_points, read_points, write_points
from .layers import decompose
from .verify import SUITES, replay, run_suite
from .visibility import pipeline_report

REPORT_VERSION = 1


def load_schema() -> dict:
    return json.loads(resources.files("kholes").joinpath("report.schema.json").read_text("utf-8"))


def _doc(kind: str, **sections) -> dict:
    return {"version": REPORT_VERSION, "kind": kind, **sections}


def _emit(doc: dict, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(dumps(doc), encoding="utf-8")


def _load(path: str):
    ps = read_points(path)
    ensure_general_position(ps)
    return ps


def _layers(ps) -> dict:
    dec = decompose(ps)
    return {"sizes": dec.sizes(), "k_mid": dec.k_mid}


def cmd_gen(args) -> int:
    bound = args.range
    if bound is None:
        bound = DEFAULT_CONVEX_RANGE if args.kind == "convex" else DEFAULT_RANGE
    spec = GenSpec(args.kind, args.n or 0, args.seed, bound, args.m or 0)
    ps = spec.build()
    ensure_general_position(ps)
    label = f"kind={args.kind} n={len(ps)} seed={args.seed} range={bound}"
    if args.kind == "horton":
        label = f"kind=horton m={args.m} n={len(ps)}"
    if args.out:
        write_points(args.out, ps, label)
        print(f"{args.out} {len(ps)}")
    else:
        sys.stdout.write(format_points(ps, label))
    return 0


def count_holes(ps, ks: Sequence[int], algorithm: str, workers: int = 1) -> dict[int, int]:
    if algorithm == "brute":
        return {k: len(enumerate_brute(ps, k)) for k in ks}
    return {k: count_chain_dp(ps, k, workers) for k in ks}


def cmd_count(args) -> int:
    ps = _load(args.file)
    counts = count_holes(ps, args.k, args.algorithm, args.threads)
    for k, c in counts.items():
        print(f"k={k} {c}")
    _emit(_doc("count", input={"path": args.file, "n": len(ps)}, layers=_layers(ps),
               counts={"algorithm": args.algorithm, "holes": {str(k): c for k, c in counts.items()}}),
          args.json)
    return 0


def ledger_summary(ledger) -> dict:
    ctx = ledger.ctx
    g = ledger.g_all()
    good = ledger.good_per_hole()
    return {
        "class_counts": ledger.class_counts(),
        "distinct_holes": len(ledger.distinct_holes()),
        "max_good_per_hole": max(good.values(), default=0),
        "centers": [
            {"point": p, "layer": ctx.layer(p), "m": len(ctx.radial(p)),
             "blocks": len(ledger.blocks[p]), "g": g[p],
             "distinct_holes": len(ledger.hole_multiplicity(p))}
            for p in ledger.centers
        ],
        "assignments": [
            {"center": a.center, "start": a.block.start, "hole": list(ctx.hole(a.hole_id).vertices),
             "kind": a.kind, "anchors": list(a.anchors) if a.anchors else None, "class": a.cls.value}
            for a in ledger.assignments
        ],
    }


def cmd_assign(args) -> int:
    ps = _load(args.file)
    ledger = run_assignment(ps)
    summary = ledger_summary(ledger)
    cc = summary["class_counts"]
    print(f"n={len(ps)} centers={len(ledger.centers)} assignments={len(ledger.assignments)} "
          f"distinct_holes={summary['distinct_holes']}")
    print("classes " + " ".join(f"{k}={v}" for k, v in cc.items()))
    print(f"sum_g={sum(ledger.g_all().values())} max_good_per_hole={summary['max_good_per_hole']}")
    _emit(_doc("assign", input={"path": args.file, "n": len(ps)}, layers=_layers(ps), ledger=summary),
          args.json)
    return 0


def cmd_pipeline(args) -> int:
    ps = _load(args.file)
    rep = pipeline_report(ps).to_dict()
    print(f"n={rep['n']} k_mid={rep['layers']['k_mid']} catalog_5holes={rep['catalog_5holes']} "
          f"ledger_holes={rep['ledger_holes']}")
    print(f"eq1={rep['eq1']} eq3_max={rep['eq3_max']} eq4_sum={rep['eq4_sum']}")
    for k, ok in rep["verdicts"].items():
        print(f"{'PASS' if ok else 'FAIL'} {k}")
    _emit(_doc("pipeline", input={"path": args.file, "n": len(ps)}, layers=rep["layers"], pipeline=rep),
          args.json)
    return 0 if all(rep["verdicts"].values()) else 1


def cmd_verify(args) -> int:
    if args.replay:
        data = json.loads(Path(args.replay).read_text(encoding="utf-8"))
        if "case" in data:
            failures = [data]
        else:
            failures = data.get("verify", data).get("failures", [])
        bad = 0
        for f in failures:
            probs = replay(args.suite, f)
            bad += bool(probs)
            print(f"trial {f.get('trial', '?')}: {'FAIL ' + '; '.join(probs) if probs else 'PASS'}")
        return 1 if bad else 0
    res = run_suite(args.suite, args.trials, args.n, args.seed, args.threads)
    if args.suite == "all":
        for name, m in res.metrics.items():
            print(f"{'PASS' if not m['failures'] else 'FAIL'} {name} trials={m['trials']} failures={m['failures']}")
    else:
        print(f"{'PASS' if res.passed else 'FAIL'} {res.name} trials={res.trials} failures={len(res.failures)}")
    for f in res.failures[:10]:
        print(f"  trial {f.trial} seed {f.seed}: {'; '.join(f.problems[:3])}")
    _emit(_doc("verify", verify=res.to_dict()), args.json)
    return 0 if res.passed else 1


def cmd_bench(args) -> int:
    rows = []
    print(f"{'n':>5} {'count':>10} {'brute_s':>10} {'dp_s':>10}")
    for n in args.sizes:
        ps = gen_random(n, args.seed)
        t0 = time.perf_counter()
        dp = count_chain_dp(ps, args.k, args.threads)
        t_dp = time.perf_counter() - t0
        t_brute = None
        if n <= args.brute_max:
            t0 = time.perf_counter()
            brute = len(enumerate_brute(ps, args.k))
            t_brute = time.perf_counter() - t0
            if brute != dp:
                print(f"count mismatch at n={n}: brute {brute} dp {dp}", file=sys.stderr)
                return 1
        rows.append({"n": n, "count": dp, "brute_seconds": t_brute, "dp_seconds": t_dp})
        bs = f"{t_brute:10.4f}" if t_brute is not None else f"{'-':>10}"
        print(f"{n:5d} {dp:10d} {bs} {t_dp:10.4f}")
    _emit(_doc("bench", bench={"k": args.k, "rows": rows}), args.json)
    return 0


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _k_list(text: str) -> list[int]:
    ks = _ints(text)
    if not ks or any(not 3 <= k <= MAX_K for k in ks):
        raise argparse.ArgumentTypeError(f"k values must lie in 3..{MAX_K}")
    return ks


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kholes", description="Count, assign and verify empty convex polygons.")
    ap.add_argument("--threads", type=int, default=1, help="worker processes (results do not depend on it)")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a point set", parents=[common])
    g.add_argument("--kind", choices=["random", "convex", "horton"], required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int, help="Horton order, n = 2**m")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--range", type=int, help="coordinate bound")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("count", help="count k-holes of a point file", parents=[common])
    c.add_argument("file")
    c.add_argument("--k", type=_k_list, default=[3, 4, 5, 6], help="comma-separated sizes")
    c.add_argument("--algorithm", choices=["brute", "dp"], default="dp")
    c.add_argument("--json")
    c.set_defaults(func=cmd_count)

    a = sub.add_parser("assign", help="assign 5-holes to points and summarise", parents=[common])
    a.add_argument("file")
    a.add_argument("--json")
    a.set_defaults(func=cmd_assign)

    p = sub.add_parser("pipeline", help="full report: runs, visible holes, inequalities", parents=[common])
    p.add_argument("file")
    p.add_argument("--json")
    p.set_defaults(func=cmd_pipeline)

    v = sub.add_parser("verify", help="run property suites", parents=[common])
    v.add_argument("--suite", required=True, help="one of: all, " + ", ".join(SUITES))
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--n", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--replay", help="re-run failures stored in a JSON report")
    v.add_argument("--json")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time brute force against the chain DP", parents=[common])
    b.add_argument("--sizes", type=_ints, default=[10, 15, 20, 30, 40])
    b.add_argument("--k", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--brute-max", type=int, default=30)
    b.add_argument("--json")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return 2
    if args.command == "gen":
        if args.kind == "horton" and args.m is None:
            print("error: --kind horton needs --m", file=sys.stderr)
            return 2
        if args.kind != "horton" and args.n is None:
            print(f"error: --kind {args.kind} needs --n", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (KHolesError, OSError, ValueError) as e:
        name = type(e).__name__
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {name}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
