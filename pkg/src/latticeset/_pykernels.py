"""Exact integer kernels, pure-Python reference implementation.

Everything here works on Python ints, so no overflow is possible at any
input size.  The compiled backend (`_speedups`) reimplements the hot loops
with fixed-width arithmetic plus a magnitude precheck, and delegates back to
these functions whenever the precheck fails; key bytes produced by the two
backends are identical by construction.

Conventions shared across the package:

* a point is a tuple of d ints;
* its homogeneous lifted row is (1, p_1, ..., p_d, |p|^2), length d + 2;
* a surface coefficient vector is spec-ordered (a_lift, a_1, ..., a_d, a_0),
  meaning a_lift*|x|^2 + sum(a_i x_i) + a_0 = 0, canonical when the entries
  are coprime and the first nonzero one is positive.
"""

from __future__ import annotations

import math
import struct
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

BACKEND_NAME = "python"

_I64_MIN = -(1 << 63)
_I64_MAX = (1 << 63) - 1


# ---------------------------------------------------------------------------
# elementary exact linear algebra


def det_int(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    a = [list(r) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - aik * rk[j]) // prev
            ri[k] = 0
        prev = pk
    return sign * a[n - 1][n - 1]


def rank_int(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix, fraction-free elimination with pivoting."""
    a = [list(r) for r in rows]
    m = len(a)
    if m == 0:
        return 0
    n = len(a[0])
    rank = 0
    prev = 1
    for c in range(n):
        piv = None
        for i in range(rank, m):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        rk = a[rank]
        for i in range(rank + 1, m):
            ri = a[i]
            aic = ri[c]
            for j in range(c + 1, n):
                ri[j] = (p * ri[j] - aic * rk[j]) // prev
            ri[c] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def _rref_fractions(rows: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q.  Returns (rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a[:r], pivots


def _clear_denominators(row: Iterable[Fraction]) -> tuple[int, ...]:
    row = list(row)
    lcm = 1
    for x in row:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in row]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints)


def rref_canonical(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Canonical integer form of the row space of `rows`.

    Two matrices get the same result iff their rows span the same subspace,
    which makes this usable as a dictionary key for rank-deficient subsets.
    Rows come out primitive with positive leading entry, ordered by pivot.
    """
    reduced, _ = _rref_fractions(rows)
    return tuple(_clear_denominators(r) for r in reduced)


def null_space_basis(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Primitive integer basis of the right null space, one vector per free
    column of the RREF, ordered by free column index."""
    if not rows:
        return []
    n = len(rows[0])
    reduced, pivots = _rref_fractions(rows)
    pivot_set = set(pivots)
    basis: list[tuple[int, ...]] = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -reduced[r][f]
        basis.append(_clear_denominators(v))
    return basis


# ---------------------------------------------------------------------------
# surface keys


def lift_row(p: Sequence[int]) -> tuple[int, ...]:
    return (1,) + tuple(p) + (sum(x * x for x in p),)


def canonical_coefficients(vec: Sequence[int]) -> tuple[int, ...] | None:
    """Scale an integer vector to its canonical representative.

    Divides out the gcd and flips sign so the first nonzero entry is
    positive.  Returns None for the zero vector.
    """
    g = 0
    for x in vec:
        g = math.gcd(g, x)
    if g == 0:
        return None
    lead = next(x for x in vec if x)
    if lead < 0:
        g = -g
    return tuple(x // g for x in vec)


def pack_key(coeffs: Sequence[int]) -> bytes:
    """Stable byte key for a coefficient tuple.

    int64-packable tuples use a fixed-width little-endian encoding; anything
    larger falls back to repr bytes.  The one-byte prefix keeps the two
    formats from ever colliding.
    """
    if all(_I64_MIN <= c <= _I64_MAX for c in coeffs):
        return b"q" + struct.pack("<%dq" % len(coeffs), *coeffs)
    return b"L" + repr(tuple(coeffs)).encode("ascii")


def unpack_key(key: bytes) -> tuple[int, ...]:
    if key[:1] == b"q":
        body = key[1:]
        return struct.unpack("<%dq" % (len(body) // 8), body)
    # repr of a tuple of ints, produced by pack_key above
    text = key[1:].decode("ascii").strip("(),")
    return tuple(int(part) for part in text.split(",") if part.strip())


def subset_coefficients(lrows: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Canonical surface coefficients spanned by d+1 lifted rows.

    Computes the signed maximal minors of the (d+1) x (d+2) matrix, which
    form a null vector of it; reorders from column order (1, x, |x|^2) to
    (a_lift, a_1..a_d, a_0).  Returns None when all minors vanish, i.e. the
    rows are linearly dependent and span no unique surface.
    """
    k = len(lrows[0])
    v = []
    for j in range(k):
        sub = [r[:j] + r[j + 1:] for r in [tuple(r) for r in lrows]]
        m = det_int(sub)
        v.append(m if j % 2 == 0 else -m)
    reordered = (v[k - 1],) + tuple(v[1:k - 1]) + (v[0],)
    return canonical_coefficients(reordered)


# ---------------------------------------------------------------------------
# subset scans


def surface_scan(
    points: Sequence[Sequence[int]], min_bucket: int
) -> tuple[dict[bytes, list[int]], list[tuple[int, ...]]]:
    """Group all (d+1)-subsets of `points` by the surface they span.

    Returns (members, flats): `members` maps the packed canonical key of
    each spanned surface to the sorted indices of every point appearing in
    a spanning subset, keeping only keys hit by >= min_bucket subsets;
    `flats` lists the rank-deficient subsets (no unique surface) untouched,
    for the caller to group by row space.
    """
    pts = [tuple(p) for p in points]
    m = len(pts)
    d = len(pts[0]) if m else 0
    lrows = [lift_row(p) for p in pts]
    flats: list[tuple[int, ...]] = []
    if m < d + 1:
        return {}, flats

    def keyed_subsets():
        for idx in combinations(range(m), d + 1):
            coeffs = subset_coefficients([lrows[i] for i in idx])
            if coeffs is None:
                yield None, idx
            else:
                yield pack_key(coeffs), idx

    if min_bucket <= 1:
        members: dict[bytes, set[int]] = {}
        for key, idx in keyed_subsets():
            if key is None:
                flats.append(idx)
            else:
                members.setdefault(key, set()).update(idx)
        return {k: sorted(v) for k, v in members.items()}, flats

    counts: dict[bytes, int] = {}
    for key, idx in keyed_subsets():
        if key is None:
            flats.append(idx)
        else:
            counts[key] = counts.get(key, 0) + 1
    wanted = {k for k, c in counts.items() if c >= min_bucket}
    del counts
    members = {}
    if wanted:
        for key, idx in keyed_subsets():
            if key is not None and key in wanted:
                members.setdefault(key, set()).update(idx)
    return {k: sorted(v) for k, v in members.items()}, flats


def anchor_scan(points: Sequence[Sequence[int]], q: Sequence[int]) -> bool:
    """Would adding `q` to `points` create d+2 points on a common surface?

    Scans d-subsets V of `points`: if the lifted rows of V + q are dependent,
    any further point completes a degenerate (d+2)-tuple, so that alone is a
    conflict once `points` has more than d members.  Otherwise buckets the
    spanned surface; a conflict exists iff some surface accumulates d+1
    distinct members of `points`.
    """
    pts = [tuple(p) for p in points]
    q = tuple(q)
    d = len(q)
    if len(pts) < d:
        return False
    reject_on_flat = len(pts) >= d + 1
    qrow = lift_row(q)
    lrows = [lift_row(p) for p in pts]
    buckets: dict[bytes, set[int]] = {}
    for idx in combinations(range(len(pts)), d):
        coeffs = subset_coefficients([lrows[i] for i in idx] + [qrow])
        if coeffs is None:
            if reject_on_flat:
                return True
            continue
        key = pack_key(coeffs)
        bucket = buckets.setdefault(key, set())
        bucket.update(idx)
        if len(bucket) >= d + 1:
            return True
    return False


def count_low_rank_subsets(
    rows: Sequence[Sequence[int]], arity: int, max_rank: int
) -> int:
    """Number of arity-subsets of `rows` with rank <= max_rank."""
    rows = [tuple(r) for r in rows]
    count = 0
    for idx in combinations(range(len(rows)), arity):
        if rank_int([rows[i] for i in idx]) <= max_rank:
            count += 1
    return count


def trace_closure_count(rows: Sequence[Sequence[int]]) -> int:
    """Number of distinct closures of independent 2..(width-1)-subsets.

    The closure of a subset is the index set of every row lying in the
    subset's linear span.  Counting distinct closures is the inner operation
    of trace counting, hot enough inside exhaustive subset sweeps to deserve
    a compiled twin; the set-returning sibling lives in analysis.trace_sets.
    """
    rows = [tuple(row) for row in rows]
    m = len(rows)
    if m == 0:
        return 0
    cap = len(rows[0]) - 1
    closed: set[frozenset[int]] = set()
    for size in range(2, min(m, cap) + 1):
        for b in combinations(range(m), size):
            sub = [rows[i] for i in b]
            if rank_int(sub) < size:
                continue
            closed.add(frozenset(
                j for j in range(m) if rank_int(sub + [rows[j]]) == size))
    return len(closed)
