"""Constructions of lattice sets with no d+2 points on a common surface.

Three generators, in increasing order of machinery:

* moment_curve: deterministic points (x, x^2 mod p, ..., x^d mod p) for a
  prime p; polynomial root counting mod p keeps both hyperplanes and spheres
  poor, giving ~n/(4d) points.
* theorem1_pipeline: two-stage random sampling (dense sample, then a sparse
  resample tuned to the surface budget) followed by deletion of one point
  per surviving bad tuple.
* greedy_construct: scan candidates and keep any point that closes no
  (d+2)-point surface, checked incrementally.

Every generator returns (PointSet, ConstructionReport) with the result
re-verified exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Any

from . import backend
from ._pykernels import lift_row, rref_canonical
from ._rng import GENERATOR_ID, accept, draw, sample_indices, substream, threshold_for
from .analysis import (count_cohyperplanar_tuples, find_violations,
                       violating_tuples)
from .geometry import GridPartition, Point, PointSet, largest_prime_leq

METHODS = ("moment_curve", "theorem1_pipeline", "greedy")


@dataclass(frozen=True)
class ConstructionReport:
    method: str
    d: int
    n: int
    seed: int
    prime_used: int | None
    D_used: int | None
    sample_size: int | None
    violations_found: int
    deleted: int
    final_size: int
    verified: bool
    generator: str = GENERATOR_ID
    diagnostics: dict[str, Any] | None = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError("unknown method %r" % self.method)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "method": self.method,
            "d": self.d,
            "n": self.n,
            "seed": self.seed,
            "prime_used": self.prime_used,
            "D_used": self.D_used,
            "sample_size": self.sample_size,
            "violations_found": self.violations_found,
            "deleted": self.deleted,
            "final_size": self.final_size,
            "verified": self.verified,
            "generator": self.generator,
        }
        if self.diagnostics is not None:
            out["diagnostics"] = self.diagnostics
        return out


# ---------------------------------------------------------------------------
# moment curve


def moment_curve(n: int, d: int) -> tuple[PointSet, ConstructionReport]:
    """Points (x, x^2 mod p, ..., x^d mod p) for 1 <= x <= floor(p/(4d)).

    p is the largest prime <= n; residue 0 maps to p to stay inside [1, n].
    A hyperplane meets the curve in at most d points (degree-d polynomial
    mod p) and a sphere in at most 2d, while x stays below p/(4d), so no
    d+2 of these points share a surface.
    """
    if d < 1 or n < 2:
        raise ValueError("need d >= 1 and n >= 2")
    p = largest_prime_leq(n)
    size = p // (4 * d)
    if size == 0:
        warnings.warn("p=%d gives no moment-curve points for d=%d" % (p, d))
    pts = []
    for x in range(1, size + 1):
        coord = []
        v = 1
        for _ in range(d):
            v = v * x % p
            coord.append(v if v else p)
        pts.append(tuple(coord))
    ps = PointSet.build(n, d, pts)
    verified = not find_violations(ps)
    report = ConstructionReport(
        method="moment_curve", d=d, n=n, seed=0, prime_used=p,
        D_used=None, sample_size=None, violations_found=0, deleted=0,
        final_size=len(ps), verified=verified)
    return ps, report


# ---------------------------------------------------------------------------
# random sampling


def random_sample(n: int, d: int, prob: float | Fraction, seed: int) -> PointSet:
    """Keep each point of [n]^d independently with probability `prob`.

    Decisions are a pure function of (seed, lex index of the point), so the
    sample is reproducible and independent of iteration details.
    """
    threshold = threshold_for(Fraction(prob))
    pts = [p for i, p in enumerate(product(range(1, n + 1), repeat=d))
           if accept(seed, i, threshold)]
    return PointSet.build(n, d, pts)


def _iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for nonnegative integer x."""
    if x < 0 or k < 1:
        raise ValueError("need x >= 0 and k >= 1")
    if x == 0:
        return 0
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > x:
        r -= 1
    return r


def _stage2_threshold(n: int, d: int, c: float) -> int:
    """Acceptance threshold for probability n^(-3d/(d+1) - c/log2 log2 n).

    The default c = 0 path is exact integer arithmetic: the threshold is
    floor(2^64 / n^(3d/(d+1))), computed via an integer (d+1)-th root.
    """
    if c == 0:
        s = d + 1
        big = 1 << (64 * s)
        t = _iroot(big // n ** (3 * d), s)
        while (t + 1) ** s * n ** (3 * d) <= big:
            t += 1
        return t
    expo = -3 * d / (d + 1) - c / math.log2(math.log2(n))
    return threshold_for(Fraction(n ** expo))


def choose_D(n: int, d: int, est: float | int | Fraction) -> tuple[int, bool]:
    """Grid halving count from the surface-count estimate.

    Smallest power of two D with D^(d^2+d-1) * est >= n^(3(d+1)), exactly
    compared, then clamped to the power-of-two divisors of n strictly
    between 1 and n.  Returns (D, clamped).
    """
    est = Fraction(est)
    if est <= 0:
        raise ValueError("estimate must be positive")
    domain = [1 << k for k in range(1, n.bit_length())
              if n % (1 << k) == 0 and 1 << k < n]
    if not domain:
        raise ValueError("n has no power-of-two divisor strictly inside (1, n)")
    expo = d * d + d - 1
    target = Fraction(n) ** (3 * (d + 1))
    raw = 1
    while Fraction(raw) ** expo * est < target:
        raw *= 2
    clamped_value = min(max(raw, domain[0]), domain[-1])
    return clamped_value, clamped_value != raw


# ---------------------------------------------------------------------------
# deletion


def deletion_refine(ps: PointSet) -> tuple[PointSet, int]:
    """Delete points until no d+2 of the survivors share a surface.

    Greedy hitting set over the materialized bad tuples (highest degree
    first, lexicographically smallest point on ties), then re-verify and
    repeat; at most one point is spent per bad tuple.
    """
    pts = list(ps.points)
    deleted = 0
    while True:
        current = PointSet.build(ps.n, ps.d, pts)
        tuples = violating_tuples(current)
        if not tuples:
            return current, deleted
        live = {t: set(t) for t in tuples}
        while live:
            degree: dict[Point, int] = {}
            for members in live.values():
                for p in members:
                    degree[p] = degree.get(p, 0) + 1
            top = max(degree.values())
            victim = min(p for p, deg in degree.items() if deg == top)
            pts.remove(victim)
            deleted += 1
            live = {t: m for t, m in live.items() if victim not in m}


# ---------------------------------------------------------------------------
# two-stage pipeline


def _pow2_floor(n: int) -> int:
    return 1 << (n.bit_length() - 1)


def _box_counts(ps: PointSet, gp: GridPartition) -> dict[tuple[int, ...], int]:
    counts = {cell: 0 for cell in gp.cells()}
    for p in ps.points:
        counts[gp.cell_of(p)] += 1
    return counts


_DIAG_CAP = 28


def _diag_subsample(ps: PointSet, seed: int) -> tuple[PointSet, bool]:
    if len(ps) <= _DIAG_CAP:
        return ps, False
    idx = sample_indices(seed, _DIAG_CAP, len(ps))
    return PointSet.build(ps.n, ps.d, [ps.points[i] for i in idx]), True


def _max_codim2_sphere_points(ps: PointSet) -> int:
    """Most points of ps on one (d-2)-sphere (a circle when d = 3).

    d affinely independent points span a unique (d-2)-sphere, the locus of x
    whose lifted row (1, x, |x|^2) lies in the span of theirs; bucketing
    d-subsets by that row space and uniting the members counts its points.
    Affinely dependent d-subsets lie on no unique one and are skipped.
    """
    d = ps.d
    lifted = [lift_row(p) for p in ps.points]
    buckets: dict[tuple, set[int]] = {}
    for idx in combinations(range(len(ps)), d):
        rows = [lifted[i] for i in idx]
        if backend.rank_int(rows) < d:
            continue
        buckets.setdefault(rref_canonical(rows), set()).update(idx)
    return max((len(v) for v in buckets.values()), default=0)


def theorem1_pipeline(
    n: int,
    d: int,
    seed: int,
    c: float = 0.0,
    retries: int = 3,
) -> tuple[PointSet, ConstructionReport]:
    """Sample dense, resample sparse, delete the few surviving bad tuples.

    Stage 1 keeps each grid point with probability min(1, n^(3-d)); stage 2
    thins the survivors with probability n^(-3d/(d+1) - c/log2 log2 n).  The
    box-count and size checks are re-tried on fresh substreams when a sample
    falls outside the expected windows; the sphere-overlap and cohyperplanar
    statistics are recorded as diagnostics only.
    """
    if d < 3:
        raise ValueError("pipeline needs d >= 3")
    if n < 4:
        raise ValueError("pipeline needs n >= 4")
    n_used = _pow2_floor(n)
    if n_used < 4:
        raise ValueError("pipeline needs n >= 4")

    last_error = "no attempt"
    for attempt in range(retries + 1):
        prob1 = min(Fraction(1), Fraction(n_used) ** (3 - d))
        stage1 = random_sample(n_used, d, prob1, substream(seed, "stage1.%d" % attempt))
        size_lo = 2 * len(stage1) >= n_used ** 3
        size_hi = len(stage1) <= 2 * n_used ** 3
        if not (size_lo and size_hi):
            last_error = "stage-1 size %d outside [n^3/2, 2n^3]" % len(stage1)
            continue

        est = math.comb(len(stage1), d + 1)  # every d+1 points span <= 1 sphere
        D, clamped = choose_D(n_used, d, est)
        gp = GridPartition(n=n_used, d=d, D=D)
        counts = _box_counts(stage1, gp)
        box_lo = min(counts.values())
        box_hi = max(counts.values())
        if not (2 * box_lo * D ** d >= n_used ** 3 and box_hi * D ** d <= 2 * n_used ** 3):
            last_error = "box counts [%d, %d] outside window for D=%d" % (box_lo, box_hi, D)
            continue

        threshold = _stage2_threshold(n_used, d, c)
        s2 = substream(seed, "stage2.%d" % attempt)
        stage2_pts = [p for i, p in enumerate(stage1.points) if draw(s2, i) < threshold]
        stage2 = PointSet.build(n_used, d, stage2_pts)

        bad = violating_tuples(stage2)
        refined, deleted = deletion_refine(stage2)
        verified = not find_violations(refined)

        diag_ps, estimated = _diag_subsample(stage1, substream(seed, "diag.%d" % attempt))
        overlap = _max_codim2_sphere_points(diag_ps)
        cohyp = count_cohyperplanar_tuples(diag_ps)
        loglog = math.log2(math.log2(n_used)) if n_used > 2 else 1.0
        diagnostics = {
            "attempt": attempt,
            "requested_n": n,
            "stage1_size": len(stage1),
            "size_window": [n_used ** 3 // 2, 2 * n_used ** 3],
            "surface_estimate": est,
            "D_clamped": clamped,
            "box_count_min": box_lo,
            "box_count_max": box_hi,
            "box_window_center": n_used ** 3 / D ** d,
            "stage2_threshold": threshold,
            "stage2_size": len(stage2),
            "diagnostics_estimated": estimated,
            "diagnostic_sample_size": len(diag_ps),
            "max_codim2_sphere_points": overlap,
            "sphere_overlap_threshold_t": 2 * n_used ** (c / loglog) if c else 2,
            "cohyperplanar_tuples": cohyp,
            "cohyperplanar_bound": n_used ** (2 * d + 5),
        }
        report = ConstructionReport(
            method="theorem1_pipeline", d=d, n=n_used, seed=seed,
            prime_used=None, D_used=D, sample_size=len(stage1),
            violations_found=len(bad), deleted=deleted,
            final_size=len(refined), verified=verified,
            diagnostics=diagnostics)
        return refined, report
    raise RuntimeError("sampling windows failed after %d attempts: %s"
                       % (retries + 1, last_error))


# ---------------------------------------------------------------------------
# greedy


def greedy_construct(
    n: int,
    d: int,
    seed: int,
    candidate_order: str = "lex",
) -> tuple[PointSet, ConstructionReport]:
    """Keep every candidate that completes no d+2 points on a surface.

    The incremental check buckets the surfaces spanned by the candidate
    with each d-subset of the kept points; a conflict is d+1 kept points in
    one bucket, or a candidate making any d+1 of them affinely degenerate
    (any further point then closes a flat (d+2)-tuple).
    """
    if candidate_order not in ("lex", "random"):
        raise ValueError("candidate_order must be 'lex' or 'random'")
    candidates = list(product(range(1, n + 1), repeat=d))
    if candidate_order == "random":
        s = substream(seed, "order")
        candidates = [p for _, p in sorted(
            (draw(s, i), p) for i, p in enumerate(candidates))]
    kept: list[Point] = []
    for q in candidates:
        if not backend.anchor_scan(kept, q):
            kept.append(q)
    ps = PointSet.build(n, d, kept)
    verified = not find_violations(ps)
    report = ConstructionReport(
        method="greedy", d=d, n=n, seed=seed, prime_used=None,
        D_used=None, sample_size=len(candidates), violations_found=0,
        deleted=0, final_size=len(ps), verified=verified)
    return ps, report
