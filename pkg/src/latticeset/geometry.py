"""Exact geometry of lattice point sets, spheres and hyperplanes.

All predicates reduce to integer determinants of lifted coordinates: a point
p maps to the row (1, p_1, ..., p_d, |p|^2), and d+2 points lie on a common
sphere or hyperplane exactly when their lifted rows are singular.  Nothing
here ever touches floating point, so answers are exact at any coordinate
size.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

from . import backend
from ._pykernels import canonical_coefficients, lift_row, pack_key, subset_coefficients

Point = tuple[int, ...]

POINTSET_FORMAT = "latticeset/1"


def _as_point(p: Sequence[int]) -> Point:
    q = tuple(p)
    if not q or not all(isinstance(x, int) and not isinstance(x, bool) for x in q):
        raise ValueError("points must be nonempty tuples of ints")
    return q


def _as_points(points: Iterable[Sequence[int]]) -> list[Point]:
    pts = [_as_point(p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ValueError("points have mixed dimensions")
    if len(set(pts)) != len(pts):
        raise ValueError("points must be distinct")
    return pts


def lift(p: Sequence[int]) -> tuple[int, ...]:
    """Append the squared norm: (p_1, ..., p_d) -> (p_1, ..., p_d, |p|^2)."""
    q = _as_point(p)
    return q + (sum(x * x for x in q),)


def det_exact(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix."""
    return backend.det_int([tuple(r) for r in rows])


def is_cohyperplanar(points: Iterable[Sequence[int]]) -> bool:
    """Do these d+1 distinct points lie on a common hyperplane?"""
    pts = _as_points(points)
    d = len(pts[0])
    if len(pts) != d + 1:
        raise ValueError("expected exactly d+1 points")
    return backend.det_int([(1,) + p for p in pts]) == 0


def is_cospherical_or_cohyperplanar(points: Iterable[Sequence[int]]) -> bool:
    """Do these d+2 distinct points lie on a common sphere or hyperplane?"""
    pts = _as_points(points)
    d = len(pts[0])
    if len(pts) != d + 2:
        raise ValueError("expected exactly d+2 points")
    return backend.det_int([lift_row(p) for p in pts]) == 0


# ---------------------------------------------------------------------------
# point sets


@dataclass(frozen=True)
class PointSet:
    """A set of distinct points of the lattice cube [n]^d, kept lex-sorted."""

    d: int
    n: int
    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        if self.d < 1 or self.n < 1:
            raise ValueError("need d >= 1 and n >= 1")
        prev = None
        for p in self.points:
            if len(p) != self.d:
                raise ValueError("point dimension mismatch")
            if not all(isinstance(x, int) and 1 <= x <= self.n for x in p):
                raise ValueError("coordinates must be ints in [1, n]")
            if prev is not None and p <= prev:
                raise ValueError("points must be strictly lex-sorted")
            prev = p

    @classmethod
    def build(cls, n: int, d: int, points: Iterable[Sequence[int]]) -> "PointSet":
        pts = sorted({tuple(p) for p in points})
        return cls(d=d, n=n, points=tuple(pts))

    @classmethod
    def full_grid(cls, n: int, d: int) -> "PointSet":
        pts = tuple(product(range(1, n + 1), repeat=d))
        return cls(d=d, n=n, points=pts)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, p: object) -> bool:
        return p in set(self.points)


def pointset_to_json(ps: PointSet) -> str:
    doc = {
        "format": POINTSET_FORMAT,
        "d": ps.d,
        "n": ps.n,
        "points": [list(p) for p in ps.points],
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def pointset_from_json(text: str) -> PointSet:
    doc = json.loads(text)
    if not isinstance(doc, dict) or doc.get("format") != POINTSET_FORMAT:
        raise ValueError("not a %s file" % POINTSET_FORMAT)
    return PointSet.build(int(doc["n"]), int(doc["d"]),
                          [tuple(int(x) for x in p) for p in doc["points"]])


# ---------------------------------------------------------------------------
# generalized spheres


@dataclass(frozen=True)
class GeneralizedSphere:
    """A sphere or hyperplane with integer coefficients in canonical form.

    The locus is {x : a_lift*|x|^2 + a . x + a0 = 0}; a_lift > 0 means a
    genuine sphere, a_lift == 0 a hyperplane.  Canonical: entries coprime and
    the first nonzero of (a_lift, a_1, ..., a_d, a0) positive, so each locus
    has exactly one representation and they compare/hash cheaply.
    """

    a_lift: int
    a: tuple[int, ...]
    a0: int

    def __post_init__(self) -> None:
        coeffs = self.coefficients()
        canon = canonical_coefficients(coeffs)
        if canon is None:
            raise ValueError("zero coefficient vector")
        if canon != coeffs:
            raise ValueError("coefficients not in canonical form")
        if self.a_lift == 0 and not any(self.a):
            raise ValueError("a hyperplane needs a nonzero normal")

    def coefficients(self) -> tuple[int, ...]:
        return (self.a_lift,) + self.a + (self.a0,)

    def key(self) -> bytes:
        return pack_key(self.coefficients())

    @property
    def d(self) -> int:
        return len(self.a)

    @property
    def is_sphere(self) -> bool:
        return self.a_lift > 0

    @property
    def is_hyperplane(self) -> bool:
        return self.a_lift == 0

    def evaluate(self, p: Sequence[int]) -> int:
        q = tuple(p)
        return (self.a_lift * sum(x * x for x in q)
                + sum(ai * x for ai, x in zip(self.a, q))
                + self.a0)

    def center(self) -> tuple[Fraction, ...]:
        if not self.is_sphere:
            raise ValueError("hyperplanes have no center")
        return tuple(Fraction(-ai, 2 * self.a_lift) for ai in self.a)

    def radius_squared(self) -> Fraction:
        """May be negative (empty locus) for hand-built coefficient vectors."""
        if not self.is_sphere:
            raise ValueError("hyperplanes have no radius")
        num = sum(ai * ai for ai in self.a) - 4 * self.a_lift * self.a0
        return Fraction(num, 4 * self.a_lift * self.a_lift)


def canonicalize(coeffs: Sequence[int]) -> GeneralizedSphere:
    """Scale an integer vector (a_lift, a_1..a_d, a0) to its canonical sphere."""
    vec = tuple(int(x) for x in coeffs)
    if len(vec) < 3:
        raise ValueError("need at least (a_lift, a_1, a0)")
    canon = canonical_coefficients(vec)
    if canon is None:
        raise ValueError("zero coefficient vector")
    return GeneralizedSphere(a_lift=canon[0], a=canon[1:-1], a0=canon[-1])


def sphere_from_key(key: bytes | tuple[int, ...]) -> GeneralizedSphere:
    """Rebuild a surface from a packed key or coefficient tuple (trusted)."""
    from ._pykernels import unpack_key

    coeffs = unpack_key(key) if isinstance(key, bytes) else tuple(key)
    return GeneralizedSphere(a_lift=coeffs[0], a=coeffs[1:-1], a0=coeffs[-1])


def sphere_through(points: Iterable[Sequence[int]]) -> GeneralizedSphere:
    """The unique sphere through d+1 affinely independent points.

    Solves the lifted null space via signed maximal minors, already in
    canonical form.  Raises ValueError when the points admit no sphere,
    i.e. they lie on a common hyperplane.
    """
    pts = _as_points(points)
    d = len(pts[0])
    if len(pts) != d + 1:
        raise ValueError("expected exactly d+1 points")
    coeffs = subset_coefficients([lift_row(p) for p in pts])
    if coeffs is None or coeffs[0] == 0:
        raise ValueError("degenerate: points lie on a hyperplane")
    return GeneralizedSphere(a_lift=coeffs[0], a=coeffs[1:-1], a0=coeffs[-1])


def on_surface(s: GeneralizedSphere, p: Sequence[int]) -> bool:
    return s.evaluate(p) == 0


def in_general_position(ps: PointSet) -> bool:
    """No d+1 points of ps on a common hyperplane (brute force)."""
    if len(ps) < ps.d + 1:
        return True
    rows = [(1,) + p for p in ps.points]
    return backend.count_low_rank_subsets(rows, ps.d + 1, ps.d) == 0


# ---------------------------------------------------------------------------
# grid partition


@dataclass(frozen=True)
class GridPartition:
    """[n]^d split into D^d aligned boxes of (n/D)^d lattice points each."""

    n: int
    d: int
    D: int

    def __post_init__(self) -> None:
        if self.D < 1 or self.n < 1 or self.d < 1:
            raise ValueError("need n, d, D >= 1")
        if self.n % self.D:
            raise ValueError("D must divide n")

    @property
    def side(self) -> int:
        return self.n // self.D

    def cell_of(self, p: Sequence[int]) -> tuple[int, ...]:
        """Box index of a point, 0-based per axis: i_j = ceil(p_j*D/n) - 1."""
        return tuple((x - 1) * self.D // self.n for x in p)

    def cell_bounds(self, cell: Sequence[int]) -> tuple[tuple[int, int], ...]:
        """Inclusive coordinate range [lo, hi] of a box along each axis."""
        s = self.side
        return tuple((i * s + 1, (i + 1) * s) for i in cell)

    def cells(self) -> Iterator[tuple[int, ...]]:
        return product(range(self.D), repeat=self.d)


def grid_partition(n: int, d: int, D: int) -> GridPartition:
    return GridPartition(n=n, d=d, D=D)


def largest_prime_leq(n: int) -> int:
    """Largest prime <= n (simple sieve; inputs here are desk-scale)."""
    if n < 2:
        raise ValueError("no prime <= %d" % n)
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    for k in range(n, 1, -1):
        if sieve[k]:
            return k
    raise AssertionError("unreachable")
