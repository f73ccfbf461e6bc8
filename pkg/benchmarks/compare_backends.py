"""Time the compiled kernels against their pure-Python twins.

Every kernel entry point shared by the two backends runs on the same
deterministic workload under both, checksums are compared (a mismatch is a
bug, not a slowdown), and one line per workload reports the speedup.
Build the extension first (`pip install -e .`); without it this script
only tells you the fallback works.

Usage: python benchmarks/compare_backends.py [--repeats N] [--csv FILE]
"""

from __future__ import annotations

import argparse
import sys
import time

from latticeset import _pykernels
from latticeset._rng import draw, sample_indices, substream
from latticeset.geometry import PointSet

try:
    from latticeset import _speedups
except ImportError:
    _speedups = None


def _mat(seed_label: str, r: int, c: int, span: int) -> list[tuple[int, ...]]:
    s = substream(2024, seed_label)
    return [tuple(draw(s, i * c + j) % (2 * span + 1) - span for j in range(c))
            for i in range(r)]


def _setup_dets():
    return [_mat("det.%d" % t, 6, 6, 9) for t in range(200)]


def _run_dets(k, mats):
    return sum(k.det_int(m) % 65537 for m in mats)


def _setup_ranks():
    return [_mat("rank.%d" % t, 8, 5, 6) for t in range(200)]


def _run_ranks(k, mats):
    return sum(k.rank_int(m) for m in mats)


def _setup_scan2():
    return list(PointSet.full_grid(5, 2).points)


def _run_scan2(k, pts):
    members, flats = k.surface_scan(pts, 1)
    return len(members) * 1000 + len(flats)


def _setup_scan3():
    return list(PointSet.full_grid(3, 3).points)


def _run_scan3(k, pts):
    members, flats = k.surface_scan(pts, 5)
    return len(members) * 1000 + len(flats)


def _setup_anchor():
    grid = list(PointSet.full_grid(4, 2).points)
    kept = grid[::3]
    return kept, grid


def _run_anchor(k, data):
    kept, grid = data
    return sum(k.anchor_scan(kept, q) for q in grid)


def _setup_lowrank():
    pts = PointSet.full_grid(3, 3).points
    return [_pykernels.lift_row(p) for p in pts]


def _run_lowrank(k, rows):
    return k.count_low_rank_subsets(rows, 4, 3)


def _setup_traces():
    pts = PointSet.full_grid(3, 3).points
    rows = [_pykernels.lift_row(p) for p in pts]
    subs = []
    for t in range(30):
        idx = sample_indices(substream(2024, "traces.%d" % t), 9, len(rows))
        subs.append([rows[i] for i in idx])
    return subs


def _run_traces(k, subs):
    return sum(k.trace_closure_count(sub) for sub in subs)


WORKLOADS = [
    ("det_int          6x6, 200 matrices", _setup_dets, _run_dets),
    ("rank_int         8x5, 200 matrices", _setup_ranks, _run_ranks),
    ("surface_scan     [5]^2 grid", _setup_scan2, _run_scan2),
    ("surface_scan     [3]^3 grid", _setup_scan3, _run_scan3),
    ("anchor_scan      16 queries vs 6 kept", _setup_anchor, _run_anchor),
    ("count_low_rank   C(27,4) lifted rows", _setup_lowrank, _run_lowrank),
    ("trace_closure    30 x 9-subsets of [3]^3", _setup_traces, _run_traces),
]


def _best_ms(fn, k, data, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(k, data)
        best = min(best, time.perf_counter() - t0)
    return best * 1000.0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3,
                    help="timing repeats per workload, best-of (default 3)")
    ap.add_argument("--csv", help="also write results as CSV")
    args = ap.parse_args(argv)

    if _speedups is None:
        print("compiled extension not importable; nothing to compare", file=sys.stderr)
        return 1

    print("pure backend:     %s" % _pykernels.BACKEND_NAME)
    print("compiled backend: %s" % _speedups.BACKEND_NAME)
    print()
    header = "%-42s %10s %10s %8s" % ("workload", "pure ms", "compiled", "speedup")
    print(header)
    print("-" * len(header))
    rows = []
    for name, setup, run in WORKLOADS:
        data = setup()
        ref = run(_pykernels, data)
        got = run(_speedups, data)
        if ref != got:
            print("%s: CHECKSUM MISMATCH pure=%r compiled=%r" % (name, ref, got),
                  file=sys.stderr)
            return 1
        pure = _best_ms(run, _pykernels, data, args.repeats)
        comp = _best_ms(run, _speedups, data, args.repeats)
        print("%-42s %10.2f %10.2f %7.1fx" % (name, pure, comp, pure / comp))
        rows.append((name.split()[0], pure, comp))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("kernel,pure_ms,compiled_ms,speedup\n")
            for kernel, pure, comp in rows:
                fh.write("%s,%.3f,%.3f,%.2f\n" % (kernel, pure, comp, pure / comp))
        print("\nwrote %s" % args.csv)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
