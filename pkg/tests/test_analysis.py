"""Violation search, histograms, per-surface counts, and traces.

Everything here is cross-checked against the Fraction-arithmetic brute
force in oracles.py, plus a handful of hand-derived fixtures (the [2]^3
circumsphere, the 10 concyclic quadruples of [3]^2, a 12-point circle).
"""

import math
import random
from fractions import Fraction
from itertools import combinations

import pytest

import oracles
from latticeset import (
    GeneralizedSphere,
    GridPartition,
    PointSet,
    canonicalize,
    count_cohyperplanar_tuples,
    count_traces,
    crossing_count,
    find_violations,
    lattice_points_on_hyperplane,
    lattice_points_on_sphere,
    rich_surface_histogram,
    sauer_shelah_bound,
    sphere_through,
    violating_tuples,
)
from latticeset.analysis import ViolationWitness

from conftest import random_pointset

# 12 lattice points on the circle centered (6,6) with squared radius 25
CIRCLE12 = sorted(
    (6 + dx, 6 + dy)
    for dx, dy in [(5, 0), (-5, 0), (0, 5), (0, -5),
                   (3, 4), (3, -4), (-3, 4), (-3, -4),
                   (4, 3), (4, -3), (-4, 3), (-4, -3)])


# ---------------------------------------------------------------------------
# find_violations


def test_cube_circumsphere_witness(cube2):
    out = find_violations(cube2)
    assert len(out) == 1
    w = out[0]
    assert w.kind == "sphere"
    assert w.surface.coefficients() == (1, -3, -3, -3, 6)
    assert w.members == cube2.points
    assert len(w.members) == 8


def test_three_points_below_threshold():
    ps = PointSet.build(2, 2, [(1, 1), (1, 2), (2, 1)])
    assert find_violations(ps, 4) == []


def test_threshold_below_d_plus_1_rejected(grid3):
    with pytest.raises(ValueError):
        find_violations(grid3, 2)


def test_grid3_concyclic_quadruples(grid3):
    # [3]^2 holds exactly 14 concyclic 4-sets: 9 axis-aligned rectangles,
    # the tilted midpoint square, and 4 isosceles trapezoids such as
    # (1,2),(1,3),(2,1),(3,1); no line has 4 points
    out = find_violations(grid3, 4)
    assert len(out) == 14
    assert all(w.kind == "sphere" for w in out)
    assert all(len(w.members) == 4 for w in out)
    by_coeffs = {w.surface.coefficients(): w.members for w in out}
    assert by_coeffs[(1, -4, -4, 6)] == ((1, 1), (1, 3), (3, 1), (3, 3))
    assert by_coeffs[(1, -4, -4, 7)] == ((1, 2), (2, 1), (2, 3), (3, 2))
    assert violating_tuples(grid3, 4) == oracles.violating_tuples(grid3.points, 4)


def test_grid3_lines_at_threshold_3(grid3):
    out = find_violations(grid3, 3)
    lines = {w.surface.coefficients() for w in out if w.kind == "hyperplane"}
    assert lines == {
        (0, 0, 1, -1), (0, 0, 1, -2), (0, 0, 1, -3),
        (0, 1, 0, -1), (0, 1, 0, -2), (0, 1, 0, -3),
        (0, 1, -1, 0), (0, 1, 1, -4),
    }
    assert all(len(w.members) == 3 for w in out if w.kind == "hyperplane")
    for w in out:
        want = oracles.surface_members(w.surface.coefficients(), grid3.points)
        assert list(w.members) == want


def test_witnesses_sorted_spheres_first(grid3):
    out = find_violations(grid3, 3)
    kinds = [w.kind for w in out]
    assert kinds == sorted(kinds, key=lambda k: k != "sphere")


def test_matches_bruteforce_random():
    rng = random.Random(11)
    for trial in range(12):
        d = rng.choice([2, 3])
        ps = random_pointset(rng.randrange(10 ** 6), 4 if d == 3 else 5,
                             d, rng.randint(d + 2, 11))
        assert violating_tuples(ps) == oracles.violating_tuples(ps.points)


def test_cocircular_stress():
    ps = PointSet.build(11, 2, CIRCLE12)
    out = find_violations(ps)
    assert len(out) == 1
    w = out[0]
    assert w.surface.coefficients() == (1, -12, -12, 47)
    assert w.surface.center() == (6, 6)
    assert w.surface.radius_squared() == 25
    assert list(w.members) == CIRCLE12
    assert len(violating_tuples(ps, 5)) == math.comb(12, 5)


def test_coplanar_circle_promoted_to_hyperplane():
    # a circle in 3-space: every 4-subset is affinely degenerate, so no
    # sphere bucket ever forms; the group must surface as its hull plane
    pts = [(x, y, 1) for x, y in CIRCLE12]
    ps = PointSet.build(11, 3, pts)
    out = find_violations(ps, 5)
    assert len(out) == 1
    w = out[0]
    assert w.kind == "hyperplane"
    assert w.surface.coefficients() == (0, 0, 0, 1, -1)
    assert len(w.members) == 12

    # an extra in-plane point makes some 4-subsets span the plane properly;
    # membership must then cover all 13 points
    ps2 = PointSet.build(11, 3, pts + [(6, 6, 1)])
    out2 = find_violations(ps2, 5)
    assert len(out2) == 1
    assert out2[0].surface.coefficients() == (0, 0, 0, 1, -1)
    assert len(out2[0].members) == 13


def test_collinear_points_reported():
    line = [(i, 1, 1) for i in range(1, 5)]
    ps = PointSet.build(4, 3, line + [(2, 3, 4), (4, 4, 2)])
    out = find_violations(ps, 4)
    assert any(w.kind == "hyperplane" and set(line) <= set(w.members)
               for w in out)
    assert violating_tuples(ps) == oracles.violating_tuples(ps.points)


def test_witness_validation():
    s = canonicalize((1, -3, -3, -3, 6))
    on = [p for p in PointSet.full_grid(2, 3).points]
    with pytest.raises(ValueError):
        ViolationWitness(surface=s, members=tuple(reversed(on)))
    with pytest.raises(ValueError):
        ViolationWitness(surface=s, members=((9, 9, 9),))


# ---------------------------------------------------------------------------
# rich surface histogram


def test_histogram_cube(cube2):
    h = rich_surface_histogram(cube2)
    top_surface, top_k = h.records[0]
    assert top_k == 8
    assert top_surface.coefficients() == (1, -3, -3, -3, 6)
    assert h.line_flats == ()
    assert dict(h.cumulative)[8] >= 1


def test_histogram_three_generic_points():
    ps = PointSet.build(2, 2, [(1, 1), (2, 1), (1, 2)])
    h = rich_surface_histogram(ps)
    assert [(s.is_sphere, k) for s, k in h.records] == [(True, 3)]
    assert h.spheres == 1 and h.hyperplanes == 0
    assert dict(h.cumulative).get(4, 0) == 0


def test_histogram_grid3_lines(grid3):
    h = rich_surface_histogram(grid3)
    line_records = [(s, k) for s, k in h.records if not s.is_sphere]
    assert len(line_records) == 8
    assert all(k == 3 for _, k in line_records)
    assert h.hyperplanes == 8


def test_histogram_tuple_total_matches_bruteforce():
    rng = random.Random(12)
    cases = [PointSet.full_grid(3, 2), PointSet.full_grid(2, 3)]
    cases += [random_pointset(rng.randrange(10 ** 6), 4, 2, 9) for _ in range(4)]
    cases += [random_pointset(rng.randrange(10 ** 6), 3, 3, 9) for _ in range(4)]
    for ps in cases:
        h = rich_surface_histogram(ps)
        if h.line_flats:
            continue  # per-surface accounting does not apply
        want = len(oracles.violating_tuples(ps.points))
        assert h.tuple_total(ps.d + 2) == want


def test_histogram_dyadic_partition(grid3):
    h = rich_surface_histogram(grid3)
    assert sum(c for _, c in h.dyadic) == len(h.records)
    assert h.spheres + h.hyperplanes == len(h.records)
    for i, c in h.dyadic:
        assert c == sum(1 for _, k in h.records if 2 ** i <= k < 2 ** (i + 1))


# ---------------------------------------------------------------------------
# cohyperplanar tuple counts


def test_cohyperplanar_examples(grid3, cube2):
    assert count_cohyperplanar_tuples(grid3, 3) == 8
    assert count_cohyperplanar_tuples(PointSet.full_grid(2, 2), 3) == 0
    assert count_cohyperplanar_tuples(cube2, 5) == 0
    assert count_cohyperplanar_tuples(cube2, 4) == oracles.cohyperplanar_count(
        cube2.points, 4)


def test_cohyperplanar_small_arities(grid3):
    # fewer than d+1 points always share a hyperplane
    assert count_cohyperplanar_tuples(grid3, 2) == math.comb(9, 2)
    assert count_cohyperplanar_tuples(grid3, 1) == 9
    assert count_cohyperplanar_tuples(grid3, 10) == 0


def test_cohyperplanar_dirty_path_with_long_line():
    line = [(i, 1, 1) for i in range(1, 6)]
    extras = [(1, 2, 3), (4, 5, 2), (2, 3, 6), (6, 6, 1)]
    ps = PointSet.build(6, 3, line + extras)
    for arity in (4, 5):
        want = oracles.cohyperplanar_count(ps.points, arity)
        assert count_cohyperplanar_tuples(ps, arity) == want


def test_cohyperplanar_random():
    rng = random.Random(13)
    for _ in range(6):
        ps = random_pointset(rng.randrange(10 ** 6), 4, 3, 8)
        for arity in (4, 5):
            want = oracles.cohyperplanar_count(ps.points, arity)
            assert count_cohyperplanar_tuples(ps, arity) == want


# ---------------------------------------------------------------------------
# lattice points on a single surface


def test_hyperplane_diagonal():
    r = lattice_points_on_hyperplane((1, -1), 0, 5)
    assert r.points == tuple((i, i) for i in range(1, 6))
    assert r.precondition_met
    assert r.bound_satisfied
    assert len(r.points) * 1 <= 9 * 5


def test_hyperplane_vertical_line_misses_precondition():
    r = lattice_points_on_hyperplane((1, 0), -2, 5)
    assert r.points == tuple((2, j) for j in range(1, 6))
    assert not r.precondition_met
    assert r.bound_satisfied


def test_hyperplane_simplex_slice():
    r = lattice_points_on_hyperplane((1, 1, 1), -6, 4)
    assert len(r.points) == 10
    assert len(r.points) == oracles.hyperplane_count((1, 1, 1), -6, 4)
    assert r.bound_satisfied
    assert all(sum(p) == 6 for p in r.points)


def test_hyperplane_errors():
    with pytest.raises(ValueError):
        lattice_points_on_hyperplane((0, 0), 1, 5)
    with pytest.raises(ValueError):
        lattice_points_on_hyperplane((1, 1), 0, 0)


def test_hyperplane_random_matches_oracle():
    rng = random.Random(14)
    for _ in range(25):
        d = rng.choice([2, 3])
        a = tuple(rng.randint(-3, 3) for _ in range(d))
        if not any(a):
            continue
        a0 = rng.randint(-8, 8)
        r = lattice_points_on_hyperplane(a, a0, 6)
        assert len(r.points) == oracles.hyperplane_count(a, a0, 6)
        assert all(sum(ai * x for ai, x in zip(a, p)) + a0 == 0
                   for p in r.points)


def test_sphere_cube_circumsphere():
    s = canonicalize((1, -3, -3, -3, 6))
    pts = lattice_points_on_sphere(s, 2)
    assert pts == PointSet.full_grid(2, 3).points
    assert len(pts) == 8


def test_sphere_corners():
    s = canonicalize((1, -4, -4, 6))
    assert lattice_points_on_sphere(s, 3) == ((1, 1), (1, 3), (3, 1), (3, 3))


def test_sphere_no_lattice_solutions():
    # squared radius 3/4, half-integer center: misses every lattice point
    s = canonicalize((4, -12, -12, 15))
    assert s.radius_squared() == Fraction(3, 4)
    assert lattice_points_on_sphere(s, 1) == ()


def test_sphere_errors():
    plane = canonicalize((0, 1, -1, 0))
    with pytest.raises(ValueError):
        lattice_points_on_sphere(plane, 3)
    empty = canonicalize((1, -2, -2, 3))  # center (1,1), r^2 = -1
    assert empty.radius_squared() == -1
    with pytest.raises(ValueError):
        lattice_points_on_sphere(empty, 3)


def test_sphere_random_matches_oracle():
    rng = random.Random(15)
    seen = 0
    while seen < 20:
        tri = random_pointset(rng.randrange(10 ** 6), 6, 2, 3)
        try:
            s = sphere_through(tri.points)
        except ValueError:
            continue
        seen += 1
        got = lattice_points_on_sphere(s, 6)
        assert len(got) == oracles.sphere_count(s.coefficients(), 6)
        assert set(tri.points) <= set(got)
        assert all(s.evaluate(p) == 0 for p in got)


# ---------------------------------------------------------------------------
# crossing counts


def test_crossing_matches_oracle_unit_cells():
    s = canonicalize((2, -18, -18, 73))  # center (9/2,9/2), r^2 = 4
    gp = GridPartition(n=8, d=2, D=8)
    got = crossing_count(s, gp)
    assert got == oracles.crossing_count(s.coefficients(), 8, 2, 8)


def test_crossing_random_matches_oracle():
    rng = random.Random(16)
    for _ in range(20):
        d = rng.choice([2, 3])
        cx = [rng.randint(1, 8) for _ in range(d)]
        r2 = rng.randint(1, 30)
        coeffs = (1,) + tuple(-2 * c for c in cx) + (
            sum(c * c for c in cx) - r2,)
        s = canonicalize(coeffs)
        for D in (2, 4, 8):
            got = crossing_count(s, GridPartition(n=8, d=d, D=D))
            assert got == oracles.crossing_count(s.coefficients(), 8, d, D)


def test_crossing_sphere_inside_one_cell():
    # center (3/2,3/2), r^2 = 1/4: strictly inside the cell [1,4]^2
    s = canonicalize((4, -12, -12, 17))
    assert crossing_count(s, GridPartition(n=8, d=2, D=2)) == 1


def test_crossing_far_sphere_misses_grid():
    s = canonicalize((1, -200, -200, 19999))  # center (100,100), r^2 = 1
    assert crossing_count(s, GridPartition(n=8, d=2, D=4)) == 0


def test_crossing_rejects_hyperplane():
    with pytest.raises(ValueError):
        crossing_count(canonicalize((0, 1, 1, -4)), GridPartition(8, 2, 4))


# ---------------------------------------------------------------------------
# traces


def test_trace_tiny_cases(grid3):
    assert count_traces(grid3, 0) == 1
    assert count_traces(grid3, 1) == 2
    empty = PointSet.build(3, 2, [])
    assert count_traces(empty, 0) == 1


def test_trace_general_position_quadruple(grid3):
    # any 4-subset free of collinear triples and concyclic quadruples
    # realizes every subset of size <= 3, and nothing more: 15 = bound < 16
    got = count_traces(grid3, 4)
    assert got == 15
    assert got == sauer_shelah_bound(4, 2)
    assert got < 2 ** 4


def test_trace_counts_match_bruteforce():
    rng = random.Random(17)
    for _ in range(10):
        d = rng.choice([2, 3])
        k = rng.randint(3, 6)
        ps = random_pointset(rng.randrange(10 ** 6), 4, d, k)
        assert count_traces(ps, k) == oracles.trace_count(ps.points)


def test_trace_z_bounds(grid3):
    with pytest.raises(ValueError):
        count_traces(grid3, 10)
    with pytest.raises(ValueError):
        count_traces(grid3, -1)


def test_sauer_shelah_values():
    assert sauer_shelah_bound(4, 2) == 15
    assert sauer_shelah_bound(5, 2) == 26
    assert sauer_shelah_bound(8, 3) == 163
    assert sauer_shelah_bound(0, 3) == 1
    zs = [sauer_shelah_bound(z, 2) for z in range(10)]
    assert zs == sorted(zs)
