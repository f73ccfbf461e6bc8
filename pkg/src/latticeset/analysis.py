"""Verification, counting and incidence statistics for lattice point sets.

The workhorse is a single bucketed scan over (d+1)-subsets: each full-rank
subset spans exactly one sphere or hyperplane, identified by its canonical
coefficient key.  A basis-exchange argument shows the union of subsets per
key is already the full intersection of that surface with the point set, so
member lists come out maximal without a rescan.  Rank-deficient subsets
("flats": d+1 cocircular or collinear points) get grouped by their lifted
row space and attributed to a hyperplane separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from . import backend
from ._pykernels import (canonical_coefficients, lift_row, null_space_basis,
                         rref_canonical, unpack_key)
from ._rng import sample_indices, substream
from .geometry import GeneralizedSphere, GridPartition, Point, PointSet, sphere_from_key

_TRACE_BUDGET = 10 ** 6


# ---------------------------------------------------------------------------
# incidence core


@dataclass(frozen=True)
class _Incidence:
    """Surface membership of a point set, by point index.

    buckets: canonical coefficients -> members, for surfaces spanned by at
      least one full-rank (d+1)-subset; member lists are exact intersections.
    promoted: hull hyperplanes of rank-d flats that never appear in buckets
      (every subset of their intersection is degenerate); membership
      rescanned against the whole set.
    line_flats: (hyperplane coefficients, flat members, hyperplane members)
      for flat groups of affine rank < d, which lie on infinitely many
      hyperplanes; the recorded one is canonical (first null-space basis
      vector) and its membership is rescanned.
    """

    buckets: dict[tuple[int, ...], list[int]]
    promoted: dict[tuple[int, ...], list[int]]
    line_flats: list[tuple[tuple[int, ...], list[int], list[int]]]


def _hyperplane_coeffs(null_vec: Sequence[int]) -> tuple[int, ...]:
    # null vector of rows (1, p) is (c0, c1..cd); surface order wants
    # (a_lift=0, c1..cd, c0), then canonical scaling
    vec = (0,) + tuple(null_vec[1:]) + (null_vec[0],)
    canon = canonical_coefficients(vec)
    assert canon is not None
    return canon


def _surface_incidence(ps: PointSet, min_bucket: int) -> _Incidence:
    pts = ps.points
    raw, flat_subsets = backend.surface_scan(pts, min_bucket)
    buckets = {unpack_key(k): v for k, v in raw.items()}

    flat_groups: dict[tuple, set[int]] = {}
    for idx in flat_subsets:
        key = rref_canonical([lift_row(pts[i]) for i in idx])
        flat_groups.setdefault(key, set()).update(idx)

    promoted: dict[tuple[int, ...], list[int]] = {}
    line_flats: list[tuple[tuple[int, ...], list[int], list[int]]] = []
    for _, group in sorted(flat_groups.items()):
        members = sorted(group)
        unlifted = [(1,) + pts[i] for i in members]
        r = backend.rank_int(unlifted)
        basis = null_space_basis(unlifted)
        coeffs = _hyperplane_coeffs(basis[0])
        if r == ps.d:
            # unique hull hyperplane; if it already has a full-rank bucket,
            # that bucket provably holds every point on it
            if coeffs in buckets or coeffs in promoted:
                continue
            surface = sphere_from_key(coeffs)
            promoted[coeffs] = [
                i for i, p in enumerate(pts) if surface.evaluate(p) == 0]
        else:
            # always recorded, even when the chosen hyperplane is already
            # bucketed: counting needs to see every collinear-type family
            surface = sphere_from_key(coeffs)
            on_it = [i for i, p in enumerate(pts) if surface.evaluate(p) == 0]
            line_flats.append((coeffs, members, on_it))
    return _Incidence(buckets=buckets, promoted=promoted, line_flats=line_flats)


# ---------------------------------------------------------------------------
# violations


@dataclass(frozen=True)
class ViolationWitness:
    """A surface together with every point of the set lying on it."""

    surface: GeneralizedSphere
    members: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(set(self.members)) != len(self.members) or list(self.members) != sorted(self.members):
            raise ValueError("members must be sorted and distinct")
        for p in self.members:
            if self.surface.evaluate(p) != 0:
                raise ValueError("member %r is not on the surface" % (p,))

    @property
    def kind(self) -> str:
        return "sphere" if self.surface.is_sphere else "hyperplane"


def _witness_sort_key(w: ViolationWitness):
    return (0 if w.surface.is_sphere else 1, w.surface.coefficients())


def find_violations(ps: PointSet, threshold: int | None = None) -> list[ViolationWitness]:
    """All surfaces containing at least `threshold` points of ps.

    threshold defaults to d+2, the smallest interesting value; surfaces with
    d+1 points are unavoidable.  Flat point groups (collinear families) are
    reported through a canonical hyperplane containing them.
    """
    d = ps.d
    thr = d + 2 if threshold is None else threshold
    if thr < d + 1:
        raise ValueError("surfaces through fewer than d+1 points are not unique")
    if len(ps) < thr:
        return []
    # any surface with >= d+2 members is spanned by >= 2 subsets, so the
    # count >= 2 prefilter loses nothing and keeps peak memory small; at
    # threshold d+1 a surface may be spanned exactly once, so keep everything
    inc = _surface_incidence(ps, 2 if thr >= d + 2 else 1)
    out: list[ViolationWitness] = []
    seen: set[tuple[int, ...]] = set()
    for coeffs, mem in inc.buckets.items():
        if len(mem) >= thr:
            out.append(ViolationWitness(
                surface=sphere_from_key(coeffs),
                members=tuple(ps.points[i] for i in mem)))
            seen.add(coeffs)
    for coeffs, mem in inc.promoted.items():
        if len(mem) >= thr and coeffs not in seen:
            out.append(ViolationWitness(
                surface=sphere_from_key(coeffs),
                members=tuple(ps.points[i] for i in mem)))
            seen.add(coeffs)
    for coeffs, _, on_it in inc.line_flats:
        if len(on_it) >= thr and coeffs not in seen:
            out.append(ViolationWitness(
                surface=sphere_from_key(coeffs),
                members=tuple(ps.points[i] for i in on_it)))
            seen.add(coeffs)
    out.sort(key=_witness_sort_key)
    return out


def violating_tuples(ps: PointSet, arity: int | None = None) -> set[tuple[Point, ...]]:
    """Every arity-subset lying on a common sphere or hyperplane.

    Materialized from witnesses, so it is exact; intended for deletion and
    for cross-checking against brute force on small inputs.
    """
    d = ps.d
    ar = d + 2 if arity is None else arity
    tuples: set[tuple[Point, ...]] = set()
    for w in find_violations(ps, ar):
        for combo in combinations(w.members, ar):
            tuples.add(combo)
    return tuples


# ---------------------------------------------------------------------------
# histograms and counts


@dataclass(frozen=True)
class RichSurfaceHistogram:
    """Surfaces holding at least d+1 points, with dyadic size classes.

    records: (surface, member count k) sorted by decreasing k;
    dyadic: (i, number of records with 2^i <= k < 2^{i+1});
    cumulative: (r, number of records with k >= r) for r = d+1 .. max k;
    line_flats: member tuples of affine-rank < d flat groups, which lie on
      infinitely many hyperplanes and are therefore tallied separately.
    """

    d: int
    records: tuple[tuple[GeneralizedSphere, int], ...]
    dyadic: tuple[tuple[int, int], ...]
    spheres: int
    hyperplanes: int
    cumulative: tuple[tuple[int, int], ...]
    line_flats: tuple[tuple[Point, ...], ...]

    def tuple_total(self, arity: int) -> int:
        """Sum of C(k, arity) over records; on inputs without line flats this
        equals the number of arity-subsets on a common surface."""
        return sum(math.comb(k, arity) for _, k in self.records)


def rich_surface_histogram(ps: PointSet) -> RichSurfaceHistogram:
    d = ps.d
    inc = _surface_incidence(ps, 1)
    entries: list[tuple[tuple[int, ...], int]] = []
    for coeffs, mem in inc.buckets.items():
        if len(mem) >= d + 1:
            entries.append((coeffs, len(mem)))
    for coeffs, mem in inc.promoted.items():
        if len(mem) >= d + 1:
            entries.append((coeffs, len(mem)))
    entries.sort(key=lambda e: (-e[1], e[0]))
    records = tuple((sphere_from_key(c), k) for c, k in entries)
    spheres = sum(1 for s, _ in records if s.is_sphere)
    dyadic_counts: dict[int, int] = {}
    for _, k in records:
        i = k.bit_length() - 1
        dyadic_counts[i] = dyadic_counts.get(i, 0) + 1
    kmax = max((k for _, k in records), default=d)
    cumulative = tuple(
        (r, sum(1 for _, k in records if k >= r)) for r in range(d + 1, kmax + 1))
    line_flats = tuple(
        tuple(ps.points[i] for i in mem) for _, mem, _ in inc.line_flats)
    return RichSurfaceHistogram(
        d=d,
        records=records,
        dyadic=tuple(sorted(dyadic_counts.items())),
        spheres=spheres,
        hyperplanes=len(records) - spheres,
        cumulative=cumulative,
        line_flats=line_flats,
    )


def count_cohyperplanar_tuples(ps: PointSet, arity: int | None = None) -> int:
    """Exact number of arity-subsets of ps on a common hyperplane."""
    d = ps.d
    ar = d + 2 if arity is None else arity
    m = len(ps)
    if ar < 1 or m < ar:
        return 0
    if ar <= d:
        return math.comb(m, ar)  # d points always share a hyperplane
    inc = _surface_incidence(ps, 1)
    # collinear-type families of >= arity points lie on infinitely many
    # hyperplanes, so per-hyperplane accounting would miscount; fall back
    # to direct rank counting in that case
    dirty = any(len(mem) >= ar for _, mem, _ in inc.line_flats)
    if dirty:
        return backend.count_low_rank_subsets([(1,) + p for p in ps.points], ar, d)
    total = 0
    for coeffs, mem in inc.buckets.items():
        if coeffs[0] == 0:
            total += math.comb(len(mem), ar)
    for _, mem in inc.promoted.items():
        total += math.comb(len(mem), ar)
    return total


# ---------------------------------------------------------------------------
# lattice point enumeration on a single surface


@dataclass(frozen=True)
class HyperplanePoints:
    """Solutions of a . x + a0 = 0 inside [n]^d, with span diagnostics.

    The count bound 3^d n^{d-1} / max|a_i| is meaningful exactly when the
    solution points span a (d-1)-dimensional linear subspace; that is
    `precondition_met`, and `bound_satisfied` reports the exact integer
    comparison count * max|a_i| <= 3^d * n^{d-1} either way.
    """

    a: tuple[int, ...]
    a0: int
    n: int
    points: tuple[Point, ...]
    precondition_met: bool
    bound_satisfied: bool


def lattice_points_on_hyperplane(a: Sequence[int], a0: int, n: int) -> HyperplanePoints:
    avec = tuple(int(x) for x in a)
    if not avec or not any(avec):
        raise ValueError("hyperplane needs a nonzero normal")
    if n < 1:
        raise ValueError("need n >= 1")
    d = len(avec)
    piv = next(i for i, x in enumerate(avec) if x)
    rest = [i for i in range(d) if i != piv]
    pts: list[Point] = []
    for combo in product(range(1, n + 1), repeat=d - 1):
        rhs = -a0 - sum(avec[j] * x for j, x in zip(rest, combo))
        if rhs % avec[piv]:
            continue
        xp = rhs // avec[piv]
        if 1 <= xp <= n:
            p = list(combo)
            p.insert(piv, xp)
            pts.append(tuple(p))
    pts.sort()
    met = backend.rank_int(pts) == d - 1 if pts else (d == 1)
    s = max(abs(x) for x in avec)
    bound_ok = len(pts) * s <= 3 ** d * n ** (d - 1)
    return HyperplanePoints(a=avec, a0=int(a0), n=n, points=tuple(pts),
                            precondition_met=met, bound_satisfied=bound_ok)


def lattice_points_on_sphere(s: GeneralizedSphere, n: int) -> tuple[Point, ...]:
    """All points of [n]^d on a genuine sphere, by coordinate slicing."""
    if not s.is_sphere:
        raise ValueError("not a sphere")
    if s.radius_squared() < 0:
        raise ValueError("empty sphere: negative squared radius")
    if n < 1:
        raise ValueError("need n >= 1")
    d = s.d
    al = s.a_lift
    ad = s.a[-1]
    pts: set[Point] = set()
    for combo in product(range(1, n + 1), repeat=d - 1):
        rest = (al * sum(x * x for x in combo)
                + sum(ai * x for ai, x in zip(s.a, combo))
                + s.a0)
        disc = ad * ad - 4 * al * rest
        if disc < 0:
            continue
        r = math.isqrt(disc)
        if r * r != disc:
            continue
        for num in (-ad + r, -ad - r):
            if num % (2 * al) == 0:
                x = num // (2 * al)
                if 1 <= x <= n:
                    pts.add(combo + (x,))
    return tuple(sorted(pts))


def crossing_count(s: GeneralizedSphere, gp: GridPartition) -> int:
    """How many boxes of the partition the sphere surface passes through.

    A box is crossed iff its nearest point is inside-or-on and its farthest
    point outside-or-on the sphere; both distances compare exactly against
    the squared radius after scaling by (2 a_lift)^2.
    """
    if not s.is_sphere:
        raise ValueError("crossing is defined for spheres")
    if s.d != gp.d:
        raise ValueError("dimension mismatch")
    r2s = sum(ai * ai for ai in s.a) - 4 * s.a_lift * s.a0
    if r2s < 0:
        return 0
    two_al = 2 * s.a_lift
    count = 0
    for cell in gp.cells():
        dmin = 0
        dmax = 0
        for j, (lo, hi) in enumerate(gp.cell_bounds(cell)):
            c = -s.a[j]
            lo_s, hi_s = two_al * lo, two_al * hi
            lo_gap, hi_gap = abs(c - lo_s), abs(c - hi_s)
            if c < lo_s:
                dmin += lo_gap * lo_gap
            elif c > hi_s:
                dmin += hi_gap * hi_gap
            far = max(lo_gap, hi_gap)
            dmax += far * far
        if dmin <= r2s <= dmax:
            count += 1
    return count


# ---------------------------------------------------------------------------
# trace counting


def trace_sets(lifted_rows: Sequence[Sequence[int]]) -> set[frozenset[int]]:
    """Distinct traces of size >= 2 cut by surfaces on the given points.

    Works on prebuilt lifted rows so callers can carry a non-Euclidean
    quadratic form.  A subset T is a trace iff some surface meets the point
    list exactly in T; equivalently T's row span admits a surface (rank <=
    width-1) and no outside point's row lies in that span.  Every such T is
    the closure of one of its spanning subsets, so scanning independent
    subsets of size 2 .. width-1 finds them all.
    """
    rows = [tuple(r) for r in lifted_rows]
    m = len(rows)
    if m == 0:
        return set()
    cap = len(rows[0]) - 1
    closed: set[frozenset[int]] = set()
    for size in range(2, min(m, cap) + 1):
        for b in combinations(range(m), size):
            sub = [rows[i] for i in b]
            if backend.rank_int(sub) < size:
                continue  # closure already found via a smaller spanning set
            closure = frozenset(
                j for j in range(m)
                if backend.rank_int(sub + [rows[j]]) == size)
            closed.add(closure)
    return closed


def _trace_count(points: Sequence[Point]) -> int:
    # empty trace and singletons are always achievable, larger traces come
    # from the closure scan
    return 1 + len(points) + backend.trace_closure_count(
        [lift_row(p) for p in points])


def count_traces(ps: PointSet, z: int, trials: int = 200) -> int:
    """Max number of distinct surface traces over z-subsets of ps.

    Exhaustive when C(|ps|, z) is within budget, otherwise the max over
    `trials` deterministically sampled subsets (a lower bound on the true
    max, which is what a bound check needs).
    """
    m = len(ps)
    if z < 0 or z > m:
        raise ValueError("need 0 <= z <= |ps|")
    if z == 0:
        return 1
    lifted = [lift_row(p) for p in ps.points]
    if math.comb(m, z) <= _TRACE_BUDGET:
        return max(
            1 + z + backend.trace_closure_count([lifted[i] for i in idx])
            for idx in combinations(range(m), z))
    seed = substream(0, "traces")
    best = 0
    for t in range(trials):
        idx = sample_indices(substream(seed, str(t)), z, m)
        best = max(best, 1 + z + backend.trace_closure_count(
            [lifted[i] for i in idx]))
    return best


def sauer_shelah_bound(z: int, d: int) -> int:
    """Largest trace count compatible with VC dimension d+1."""
    return sum(math.comb(z, i) for i in range(0, d + 2))
