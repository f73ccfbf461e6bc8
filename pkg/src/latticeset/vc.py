"""Refuting shattering of d+2 points by spheres and hyperplanes.

For any d+2 points there is a subset B no surface can cut exactly; this
module produces and checks such a certificate.  The easy case: if the points
are in affinely general position they lie on at most one common sphere, so
either the whole set or a (d+1)-subset is untraceable.  Otherwise some d+1
of them share a hyperplane h, and the problem recurses inside h: points in h
are rewritten in an integer shear chart (drop the coordinate of the largest
stride of the normal, relative to an origin in h), and the Euclidean
structure follows along as an explicit integer Gram matrix, so every level
keeps exact arithmetic.  When the recursive answer uses up all of the
chart's points and h cuts exactly that trace, the certificate is bumped by
one point off h, which no surface can follow: a surface through the bumped
set would intersect h in a nested surface cutting the forbidden trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from . import backend
from ._pykernels import null_space_basis
from .analysis import trace_sets
from .geometry import Point

REASONS = (
    "not_cospherical",
    "unique_sphere_forces_extra_point",
    "degenerate_recursed",
)


@dataclass(frozen=True)
class VcRefutation:
    """Certificate that no surface traces exactly `untraceable` on `q`.

    `inner` documents the hyperplane recursion when present; its points live
    in the shear chart of the hyperplane, not in the original lattice.
    """

    q: tuple[Point, ...]
    untraceable: tuple[Point, ...]
    reason: str
    inner: "VcRefutation | None" = None

    def __post_init__(self) -> None:
        if self.reason not in REASONS:
            raise ValueError("unknown reason %r" % self.reason)
        if len(set(self.q)) != len(self.q):
            raise ValueError("q must be distinct")
        qset = set(self.q)
        if len(self.untraceable) < 2 or len(set(self.untraceable)) != len(self.untraceable):
            raise ValueError("target must be >= 2 distinct points")
        if any(p not in qset for p in self.untraceable):
            raise ValueError("target must be a subset of q")


def _identity_gram(e: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(e)] for i in range(e)]


def _gram_lift(p: Sequence[int], gram: list[list[int]]) -> tuple[int, ...]:
    e = len(p)
    norm = sum(p[i] * gram[i][j] * p[j] for i in range(e) for j in range(e))
    return (1,) + tuple(p) + (norm,)


def _shear_gram(gram: list[list[int]], normal: Sequence[int], pi: int) -> list[list[int]]:
    """Gram matrix of the chart basis v_j = a_pi e_j - a_j e_pi (j != pi)."""
    e = len(normal)
    cols = []
    for j in range(e):
        if j == pi:
            continue
        v = [0] * e
        v[j] = normal[pi]
        v[pi] = -normal[j]
        cols.append(v)
    k = len(cols)
    mixed = [[sum(gram[s][t] * cols[c][t] for t in range(e)) for c in range(k)]
             for s in range(e)]
    return [[sum(cols[r][s] * mixed[s][c] for s in range(e)) for c in range(k)]
            for r in range(k)]


def _check_untraceable(points: list[Point], gram: list[list[int]],
                       target_idx: frozenset[int]) -> None:
    lrows = [_gram_lift(p, gram) for p in points]
    if target_idx in trace_sets(lrows):
        raise AssertionError("internal error: produced a traceable target")


def _refute(points: list[Point], gram: list[list[int]]) -> VcRefutation:
    e = len(points[0])
    assert len(points) == e + 2
    q = tuple(points)

    degenerate = None
    for idx in combinations(range(e + 2), e + 1):
        affine = [(1,) + points[i] for i in idx]
        if backend.rank_int(affine) < e + 1:
            degenerate = idx
            break

    if degenerate is None:
        lrows = [_gram_lift(p, gram) for p in points]
        if backend.rank_int(lrows) == e + 2:
            target = frozenset(range(e + 2))
            reason = "not_cospherical"
        else:
            # unique common sphere: any d+1 of the points already force it,
            # and it passes through the rest of q as well
            target = frozenset(range(e + 1))
            reason = "unique_sphere_forces_extra_point"
        _check_untraceable(points, gram, target)
        return VcRefutation(
            q=q, untraceable=tuple(points[i] for i in sorted(target)),
            reason=reason)

    # some e+1 points share a hyperplane h: a . x + c0 = 0
    null = null_space_basis([(1,) + points[i] for i in degenerate])
    c0, normal = null[0][0], null[0][1:]
    on_h = [i for i in range(e + 2)
            if c0 + sum(a * x for a, x in zip(normal, points[i])) == 0]

    nested_idx = on_h if len(on_h) == e + 1 else list(range(e + 1))
    pi = next(j for j, a in enumerate(normal) if a)
    origin = points[nested_idx[0]]
    nested_pts = [
        tuple(points[i][j] - origin[j] for j in range(e) if j != pi)
        for i in nested_idx]
    inner = _refute(nested_pts, _shear_gram(gram, normal, pi))

    pos = {p: k for k, p in enumerate(nested_pts)}
    target = {nested_idx[pos[p]] for p in inner.untraceable}
    if len(target) == e + 1 and len(on_h) == e + 1:
        # h itself cuts exactly the chart points; one point off h breaks it
        target.add(next(i for i in range(e + 2) if i not in on_h))
    target = frozenset(target)
    _check_untraceable(points, gram, target)
    return VcRefutation(
        q=q, untraceable=tuple(points[i] for i in sorted(target)),
        reason="degenerate_recursed", inner=inner)


def vc_refute(q: Sequence[Sequence[int]]) -> VcRefutation:
    """Certificate that the d+2 given points are not shattered by surfaces.

    The result names a subset no sphere or hyperplane intersects exactly;
    its untraceability is re-verified before returning, so a bug here fails
    loudly rather than producing a bogus certificate.
    """
    pts = [tuple(int(x) for x in p) for p in q]
    if not pts:
        raise ValueError("need points")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ValueError("points have mixed dimensions")
    if len(set(pts)) != len(pts):
        raise ValueError("points must be distinct")
    if len(pts) != d + 2:
        raise ValueError("expected exactly d+2 points")
    return _refute(pts, _identity_gram(d))
