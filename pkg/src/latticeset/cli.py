"""Command-line front end: generate, verify, analyze, benchmark.

Exit codes: 0 success, 1 requested property does not hold, 2 usage or input
error, 3 internal invariant failure (a bug, not a user error).  Identical
command lines produce byte-identical point-set files; benchmark CSV rows
differ only in the runtime_ms column across repeats.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import Sequence

from ._rng import sample_indices, substream
from .analysis import (count_cohyperplanar_tuples, count_traces,
                       find_violations, rich_surface_histogram,
                       sauer_shelah_bound)
from .constructions import greedy_construct, moment_curve, theorem1_pipeline
from .geometry import PointSet, pointset_from_json, pointset_to_json
from .vc import vc_refute

_METHOD_NAMES = ("moment", "pipeline", "greedy")


def _fail(msg: str, code: int) -> int:
    print("error: %s" % msg, file=sys.stderr)
    return code


def _load_pointset(path: str) -> PointSet:
    with open(path, "r", encoding="utf-8") as fh:
        return pointset_from_json(fh.read())


def _run_method(method: str, n: int, d: int, seed: int, args) -> tuple:
    if method == "moment":
        return moment_curve(n, d)
    if method == "pipeline":
        return theorem1_pipeline(n, d, seed, c=args.c_const, retries=args.retries)
    if method == "greedy":
        return greedy_construct(n, d, seed, candidate_order=args.order)
    raise ValueError("unknown method %r" % method)


def _witness_doc(w) -> dict:
    return {
        "kind": w.kind,
        "a_lift": w.surface.a_lift,
        "a": list(w.surface.a),
        "a0": w.surface.a0,
        "members": [list(p) for p in w.members],
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    try:
        ps, report = _run_method(args.method, args.n, args.d, args.seed, args)
    except (ValueError, RuntimeError) as exc:
        return _fail(str(exc), 2)
    if not report.verified:
        return _fail("construction failed its own verification", 3)
    text = pointset_to_json(ps)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def cmd_verify(args) -> int:
    try:
        ps = _load_pointset(args.file)
    except (OSError, ValueError, KeyError) as exc:
        return _fail("cannot read point set: %s" % exc, 2)
    try:
        witnesses = find_violations(ps, args.threshold)
    except ValueError as exc:
        return _fail(str(exc), 2)
    if not witnesses:
        print("OK")
        return 0
    print(json.dumps([_witness_doc(w) for w in witnesses], indent=2))
    return 1


def cmd_stats(args) -> int:
    try:
        ps = _load_pointset(args.file)
    except (OSError, ValueError, KeyError) as exc:
        return _fail("cannot read point set: %s" % exc, 2)
    if args.which == "rich":
        hist = rich_surface_histogram(ps)
        doc = {
            "d": hist.d,
            "records": [
                {"a_lift": s.a_lift, "a": list(s.a), "a0": s.a0, "k": k}
                for s, k in hist.records],
            "dyadic": [list(t) for t in hist.dyadic],
            "spheres": hist.spheres,
            "hyperplanes": hist.hyperplanes,
            "cumulative": [list(t) for t in hist.cumulative],
            "line_flats": [[list(p) for p in flat] for flat in hist.line_flats],
        }
    elif args.which == "lines":
        arity = ps.d + 1
        doc = {
            "arity": arity,
            "cohyperplanar_tuples": count_cohyperplanar_tuples(ps, arity),
        }
    elif args.which == "traces":
        if args.z is None:
            return _fail("--which traces requires --z", 2)
        try:
            observed = count_traces(ps, args.z, trials=args.trials)
        except ValueError as exc:
            return _fail(str(exc), 2)
        bound = sauer_shelah_bound(args.z, ps.d)
        doc = {
            "z": args.z,
            "max_traces": observed,
            "sauer_shelah_bound": bound,
            "within_bound": observed <= bound,
        }
    else:
        return _fail("unknown stats section %r" % args.which, 2)
    print(json.dumps(doc, indent=2))
    return 0


def _parse_int_list(text: str) -> list[int]:
    parts = [p for p in text.split(",") if p.strip()]
    return [int(p) for p in parts]


def cmd_bench(args) -> int:
    try:
        n_list = _parse_int_list(args.n_list)
        seeds = _parse_int_list(args.seeds)
    except ValueError as exc:
        return _fail("bad integer list: %s" % exc, 2)
    methods = [m for m in args.methods.split(",") if m]
    if not n_list or not seeds or not methods:
        return _fail("need nonempty --n-list, --seeds and --methods", 2)
    if any(n < 2 for n in n_list):
        return _fail("bench requires n >= 2", 2)
    if any(m not in _METHOD_NAMES for m in methods):
        return _fail("methods must be among %s" % (_METHOD_NAMES,), 2)

    rows = []
    for method in methods:
        for n in n_list:
            for seed in seeds:
                t0 = time.perf_counter()
                try:
                    ps, report = _run_method(method, n, args.d, seed, args)
                except (ValueError, RuntimeError) as exc:
                    return _fail("%s n=%d seed=%d: %s" % (method, n, seed, exc), 2)
                ms = (time.perf_counter() - t0) * 1000.0
                if not report.verified:
                    return _fail(
                        "%s n=%d seed=%d produced an unverified set" % (method, n, seed), 3)
                size = report.final_size
                expo = ("%.6f" % (math.log(size) / math.log(n))) if size >= 1 and n >= 2 else ""
                rows.append((method, args.d, report.n, seed, size, ms, expo))
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))

    lines = ["method,d,n,seed,final_size,runtime_ms,exponent_estimate"]
    for method, d, n, seed, size, ms, expo in rows:
        lines.append("%s,%d,%d,%d,%d,%.3f,%s" % (method, d, n, seed, size, ms, expo))
    csv_text = "\n".join(lines) + "\n"
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)

    d = args.d
    print("reference exponents: pipeline 3/(d+1)=%.4f, baseline 1/(d-1)=%s, moment 1"
          % (3 / (d + 1), ("%.4f" % (1 / (d - 1))) if d > 1 else "inf"))
    for method in sorted(set(r[0] for r in rows)):
        pts = [(math.log(r[2]), math.log(r[4]))
               for r in rows if r[0] == method and r[4] >= 1]
        if len(pts) >= 2 and len(set(x for x, _ in pts)) >= 2:
            mx = sum(x for x, _ in pts) / len(pts)
            my = sum(y for _, y in pts) / len(pts)
            slope = (sum((x - mx) * (y - my) for x, y in pts)
                     / sum((x - mx) ** 2 for x, y in pts))
            print("%s: fitted growth exponent %.4f over %d rows" % (method, slope, len(pts)))
    return 0


def cmd_vc_check(args) -> int:
    if args.samples < 1:
        return _fail("need --samples >= 1", 2)
    if args.n < 1 or args.d < 1:
        return _fail("need n >= 1 and d >= 1", 2)
    total = args.n ** args.d
    if total < args.d + 2:
        return _fail("grid too small for d+2 distinct points", 2)
    grid = PointSet.full_grid(args.n, args.d).points
    reasons: dict[str, int] = {}
    for t in range(args.samples):
        idx = sample_indices(substream(args.seed, "vc.%d" % t), args.d + 2, total)
        q = [grid[i] for i in idx]
        try:
            cert = vc_refute(q)
        except AssertionError as exc:
            return _fail("certificate validation failed on sample %d: %s" % (t, exc), 3)
        reasons[cert.reason] = reasons.get(cert.reason, 0) + 1
    print(json.dumps({
        "samples": args.samples,
        "valid": args.samples,
        "reasons": dict(sorted(reasons.items())),
    }, indent=2))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="latticeset",
        description="lattice point sets with no d+2 points on a sphere or hyperplane")
    sub = top.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="construct a point set")
    gen.add_argument("--method", required=True, choices=_METHOD_NAMES)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--order", default="lex", choices=("lex", "random"))
    gen.add_argument("--c-const", dest="c_const", type=float, default=0.0)
    gen.add_argument("--retries", type=int, default=3)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_gen)

    ver = sub.add_parser("verify", help="check a point-set file for violations")
    ver.add_argument("file")
    ver.add_argument("--threshold", type=int, default=None)
    ver.set_defaults(func=cmd_verify)

    st = sub.add_parser("stats", help="incidence statistics of a point-set file")
    st.add_argument("file")
    st.add_argument("--which", required=True)
    st.add_argument("--z", type=int, default=None)
    st.add_argument("--trials", type=int, default=200)
    st.set_defaults(func=cmd_stats)

    be = sub.add_parser("bench", help="size/exponent sweep over n")
    be.add_argument("--d", type=int, required=True)
    be.add_argument("--n-list", dest="n_list", required=True)
    be.add_argument("--methods", default="moment")
    be.add_argument("--seeds", default="0")
    be.add_argument("--csv")
    be.add_argument("--order", default="lex", choices=("lex", "random"))
    be.add_argument("--c-const", dest="c_const", type=float, default=0.0)
    be.add_argument("--retries", type=int, default=3)
    be.set_defaults(func=cmd_bench)

    vc = sub.add_parser("vc-check", help="refute shattering on random subsets")
    vc.add_argument("--n", type=int, required=True)
    vc.add_argument("--d", type=int, required=True)
    vc.add_argument("--samples", type=int, required=True)
    vc.add_argument("--seed", type=int, default=0)
    vc.set_defaults(func=cmd_vc_check)
    return top


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
