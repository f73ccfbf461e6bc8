# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exact kernels.

Same contract and identical outputs as `_pykernels` (see there for the
conventions).  All elimination arithmetic runs in 128-bit integers after a
per-call magnitude check proves overflow impossible; calls that cannot be
proven safe delegate wholesale to the pure kernels.  Canonical vectors with
entries wider than int64 are packed through the pure path so byte keys agree
across backends bit for bit.
"""

from math import comb, factorial

from libc.stdlib cimport free, malloc
from cpython.bytes cimport PyBytes_FromStringAndSize

from . import _pykernels

cdef extern from *:
    ctypedef long long i128 "__int128"

BACKEND_NAME = "c"

cdef enum:
    MAXK = 9  # largest det dimension kept in fixed scratch (covers d <= 7)
    MAXMINORS = 126  # C(MAXK, MAXK // 2), most k x k minors a row set can have

cdef i128 _I64_MAX = 9223372036854775807
cdef i128 _I64_MIN = -9223372036854775807 - 1

_LIMIT = 1 << 126


def _fits(k, bound):
    """True iff Bareiss on a k x k matrix with |entries| <= bound provably
    stays inside signed 128-bit arithmetic (with margin for the cross
    products)."""
    if k <= 1:
        return bound < (1 << 62)
    prod = factorial(k - 1) * bound ** (k - 1)
    if prod * prod >= _LIMIT:
        return False
    return factorial(k) * bound ** k < _LIMIT


cdef inline i128 _iabs(i128 x):
    return -x if x < 0 else x


cdef inline i128 _gcd(i128 a, i128 b):
    # callers pass nonnegative values
    cdef i128 t
    while b != 0:
        t = a % b
        a = b
        b = t
    return a


cdef object _to_pyint(i128 x):
    cdef bint neg = x < 0
    cdef i128 ux = -x if neg else x
    cdef unsigned long long lo = <unsigned long long>(ux & <i128>0xFFFFFFFFFFFFFFFF)
    cdef unsigned long long hi = <unsigned long long>(ux >> 64)
    val = (int(hi) << 64) | int(lo)
    return -val if neg else val


cdef i128 _det_i128(i128* a, int n):
    # fraction-free elimination; destroys the scratch matrix
    cdef int k, i, j, piv
    cdef i128 prev = 1, pk, aik, tmp, sign = 1
    for k in range(n - 1):
        if a[k * n + k] == 0:
            piv = -1
            for i in range(k + 1, n):
                if a[i * n + k] != 0:
                    piv = i
                    break
            if piv < 0:
                return 0
            for j in range(n):
                tmp = a[k * n + j]
                a[k * n + j] = a[piv * n + j]
                a[piv * n + j] = tmp
            sign = -sign
        pk = a[k * n + k]
        for i in range(k + 1, n):
            aik = a[i * n + k]
            for j in range(k + 1, n):
                a[i * n + j] = (pk * a[i * n + j] - aik * a[k * n + j]) / prev
            a[i * n + k] = 0
        prev = pk
    return sign * a[(n - 1) * n + (n - 1)]


cdef int _rank_i128(i128* a, int m, int n):
    cdef int rank = 0, c, i, j, piv
    cdef i128 prev = 1, p, aic, tmp
    for c in range(n):
        piv = -1
        for i in range(rank, m):
            if a[i * n + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(n):
                tmp = a[rank * n + j]
                a[rank * n + j] = a[piv * n + j]
                a[piv * n + j] = tmp
        p = a[rank * n + c]
        for i in range(rank + 1, m):
            aic = a[i * n + c]
            for j in range(c + 1, n):
                a[i * n + j] = (p * a[i * n + j] - aic * a[rank * n + j]) / prev
            a[i * n + c] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


cdef inline bint _next_comb(int* idx, int r, int m):
    # lexicographic successor, matching itertools.combinations order
    cdef int i = r - 1, j
    while i >= 0 and idx[i] == m - r + i:
        i -= 1
    if i < 0:
        return False
    idx[i] += 1
    for j in range(i + 1, r):
        idx[j] = idx[j - 1] + 1
    return True


cdef object _key_from_minors(i128* v, int k):
    """Reorder column-order minors to coefficient order, canonicalize, pack.

    Returns bytes, or None when every minor vanishes (rank-deficient)."""
    cdef i128 w[MAXK]
    cdef i128 g = 0, lead = 0
    cdef int i, b
    cdef unsigned long long u
    cdef unsigned char buf[1 + 8 * MAXK]
    w[0] = v[k - 1]
    for i in range(1, k - 1):
        w[i] = v[i]
    w[k - 1] = v[0]
    for i in range(k):
        g = _gcd(g, _iabs(w[i]))
    if g == 0:
        return None
    for i in range(k):
        if w[i] != 0:
            lead = w[i]
            break
    if lead < 0:
        g = -g
    for i in range(k):
        w[i] = w[i] / g
    for i in range(k):
        if w[i] > _I64_MAX or w[i] < _I64_MIN:
            return _pykernels.pack_key(tuple(_to_pyint(w[j]) for j in range(k)))
    buf[0] = 113  # ord('q')
    for i in range(k):
        u = <unsigned long long><long long>w[i]
        for b in range(8):
            buf[1 + 8 * i + b] = <unsigned char>((u >> (8 * b)) & 0xFF)
    return PyBytes_FromStringAndSize(<char*>buf, 1 + 8 * k)


def det_int(rows):
    a = [tuple(r) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    if n > MAXK:
        return _pykernels.det_int(rows)
    bound = max(abs(x) for r in a for x in r)
    if not _fits(n, bound):
        return _pykernels.det_int(rows)
    cdef i128 scratch[MAXK * MAXK]
    cdef int i, j
    for i in range(n):
        for j in range(n):
            scratch[i * n + j] = <i128><long long>(a[i][j])
    return _to_pyint(_det_i128(scratch, n))


def rank_int(rows):
    a = [tuple(r) for r in rows]
    m = len(a)
    if m == 0:
        return 0
    n = len(a[0])
    if any(len(r) != n for r in a):
        raise ValueError("ragged matrix")
    if n == 0:
        return 0
    bound = max(abs(x) for r in a for x in r)
    if not _fits(min(m, n) + 1, bound):
        return _pykernels.rank_int(rows)
    cdef i128* buf = <i128*>malloc(m * n * sizeof(i128))
    if buf == NULL:
        raise MemoryError()
    cdef int i, j
    try:
        for i in range(m):
            for j in range(n):
                buf[i * n + j] = <i128><long long>(a[i][j])
        return _rank_i128(buf, m, n)
    finally:
        free(buf)


def count_low_rank_subsets(rows, arity, max_rank):
    # the comprehension variable must not collide with the cdef int r below:
    # inlined comprehensions share the function scope and would coerce rows
    a = [tuple(row) for row in rows]
    m = len(a)
    if arity > m:
        return 0
    n = len(a[0]) if a else 0
    bound = max((abs(x) for row in a for x in row), default=0)
    if n == 0 or not _fits(min(arity, n) + 1, bound):
        return _pykernels.count_low_rank_subsets(rows, arity, max_rank)
    cdef long long* L = <long long*>malloc(m * n * sizeof(long long))
    cdef i128* scratch = <i128*>malloc(arity * n * sizeof(i128))
    cdef int* idx = <int*>malloc(arity * sizeof(int))
    if L == NULL or scratch == NULL or idx == NULL:
        free(L); free(scratch); free(idx)
        raise MemoryError()
    cdef int i, j, r
    cdef int ar = arity, mr = max_rank
    cdef long long count = 0
    try:
        for i in range(m):
            for j in range(n):
                L[i * n + j] = a[i][j]
        for i in range(ar):
            idx[i] = i
        while True:
            for r in range(ar):
                for j in range(n):
                    scratch[r * n + j] = <i128>L[idx[r] * n + j]
            if _rank_i128(scratch, ar, n) <= mr:
                count += 1
            if not _next_comb(idx, ar, m):
                break
        return int(count)
    finally:
        free(L); free(scratch); free(idx)


def trace_closure_count(rows):
    """Number of distinct closures of independent 2..(width-1)-subsets.

    Same output as the pure twin, different route: rank-k subsets are grouped
    by the canonical vector of k x k minors over lexicographic column subsets
    (gcd-reduced, first nonzero positive), which is equal exactly when the
    spans are equal.  Unioning the subsets behind one vector reaches every
    nonzero row of the span by basis exchange, so the union is the closure
    and the answer is the number of distinct vectors.  A zero row would sit
    in every span without joining any independent subset, breaking the union
    argument, so that case delegates.
    """
    a = rows if type(rows) is list else list(rows)
    m_py = len(a)
    if m_py == 0:
        return 0
    w_py = len(a[0])
    top_py = min(m_py, w_py - 1)
    if top_py < 2:
        return 0
    if w_py > MAXK or m_py > 64:
        return _pykernels.trace_closure_count(rows)
    ncand_py = 0
    klen_py = 0
    for sz in range(2, top_py + 1):
        ncand_py += comb(m_py, sz)
        if comb(w_py, sz) > klen_py:
            klen_py = comb(w_py, sz)
    if ncand_py > 4096:
        return _pykernels.trace_closure_count(rows)

    cdef int m = m_py, w = w_py, top = top_py, ncand = ncand_py
    cdef int klen_max = klen_py
    cdef long long* L = <long long*>malloc(m * w * sizeof(long long))
    cdef int* idx = <int*>malloc(top * sizeof(int))
    cdef int* cols = <int*>malloc(w * sizeof(int))
    cdef unsigned long long* recmask = <unsigned long long*>malloc(ncand * sizeof(unsigned long long))
    cdef int* recrank = <int*>malloc(ncand * sizeof(int))
    cdef i128* keybuf = <i128*>malloc(<size_t>ncand * klen_max * sizeof(i128))
    cdef unsigned long long* bmask = <unsigned long long*>malloc(ncand * sizeof(unsigned long long))
    if (L == NULL or idx == NULL or cols == NULL or recmask == NULL
            or recrank == NULL or keybuf == NULL or bmask == NULL):
        free(L); free(idx); free(cols); free(recmask)
        free(recrank); free(keybuf); free(bmask)
        raise MemoryError()

    cdef int i, j, ksz, klen, nrec = 0, nbuck, total = 0
    cdef int rr, cc, t, b, hit
    cdef unsigned long long candmask
    cdef i128 scratch[MAXK * MAXK]
    cdef i128 mv[MAXMINORS]
    cdef i128 e[4 * MAXK]
    cdef i128 top2[MAXK * MAXK]
    cdef i128 bot2[MAXK * MAXK]
    cdef i128 g, lead, mval, bound = 0
    cdef bint pruned, allzero, same, zerorow
    try:
        try:
            for i in range(m):
                row = a[i]
                zerorow = True
                for j in range(w):
                    mval = <i128><long long>(row[j])
                    L[i * w + j] = <long long>mval
                    if mval != 0:
                        zerorow = False
                        if _iabs(mval) > bound:
                            bound = _iabs(mval)
                if zerorow:
                    return _pykernels.trace_closure_count(rows)
        except OverflowError:
            return _pykernels.trace_closure_count(rows)
        if not _fits(w_py + 1, _to_pyint(bound)):
            return _pykernels.trace_closure_count(rows)
        for ksz in range(2, top + 1):
            klen = comb(w, ksz)
            nbuck = 0
            for i in range(ksz):
                idx[i] = i
            while True:
                candmask = 0
                for i in range(ksz):
                    candmask |= (<unsigned long long>1) << idx[i]
                # a subset inside a strictly lower-rank closure is dependent
                # and cannot open a new bucket; skip it before the minors
                pruned = False
                for t in range(nrec):
                    if recrank[t] < ksz and (recmask[t] & candmask) == candmask:
                        pruned = True
                        break
                if not pruned:
                    allzero = True
                    if ksz <= 4:
                        # Laplace expansion along row pairs: the 2x2
                        # complements repeat across column subsets, so gather
                        # the candidate once and tabulate them up front
                        for rr in range(ksz):
                            for i in range(w):
                                e[rr * w + i] = <i128>L[idx[rr] * w + i]
                        if ksz >= 3:
                            for i in range(w):
                                for j in range(i + 1, w):
                                    top2[i * w + j] = (e[i] * e[w + j]
                                                       - e[j] * e[w + i])
                        if ksz == 4:
                            for i in range(w):
                                for j in range(i + 1, w):
                                    bot2[i * w + j] = (
                                        e[2 * w + i] * e[3 * w + j]
                                        - e[2 * w + j] * e[3 * w + i])
                    for i in range(ksz):
                        cols[i] = i
                    cc = 0
                    while True:
                        if ksz == 2:
                            mval = (e[cols[0]] * e[w + cols[1]]
                                    - e[cols[1]] * e[w + cols[0]])
                        elif ksz == 3:
                            mval = (top2[cols[0] * w + cols[1]] * e[2 * w + cols[2]]
                                    - top2[cols[0] * w + cols[2]] * e[2 * w + cols[1]]
                                    + top2[cols[1] * w + cols[2]] * e[2 * w + cols[0]])
                        elif ksz == 4:
                            mval = (top2[cols[0] * w + cols[1]] * bot2[cols[2] * w + cols[3]]
                                    - top2[cols[0] * w + cols[2]] * bot2[cols[1] * w + cols[3]]
                                    + top2[cols[0] * w + cols[3]] * bot2[cols[1] * w + cols[2]]
                                    + top2[cols[1] * w + cols[2]] * bot2[cols[0] * w + cols[3]]
                                    - top2[cols[1] * w + cols[3]] * bot2[cols[0] * w + cols[2]]
                                    + top2[cols[2] * w + cols[3]] * bot2[cols[0] * w + cols[1]])
                        else:
                            for rr in range(ksz):
                                for i in range(ksz):
                                    scratch[rr * ksz + i] = <i128>L[idx[rr] * w + cols[i]]
                            mval = _det_i128(scratch, ksz)
                        mv[cc] = mval
                        if mval != 0:
                            allzero = False
                        cc += 1
                        if not _next_comb(cols, ksz, w):
                            break
                    if not allzero:
                        g = 0
                        for i in range(klen):
                            g = _gcd(g, _iabs(mv[i]))
                        lead = 0
                        for i in range(klen):
                            if mv[i] != 0:
                                lead = mv[i]
                                break
                        if lead < 0:
                            g = -g
                        for i in range(klen):
                            mv[i] = mv[i] / g
                        hit = -1
                        for b in range(nbuck):
                            same = True
                            for i in range(klen):
                                if keybuf[b * klen + i] != mv[i]:
                                    same = False
                                    break
                            if same:
                                hit = b
                                break
                        if hit < 0:
                            for i in range(klen):
                                keybuf[nbuck * klen + i] = mv[i]
                            bmask[nbuck] = candmask
                            nbuck += 1
                        else:
                            bmask[hit] |= candmask
                if not _next_comb(idx, ksz, m):
                    break
            # buckets become prune records only once their unions are final
            for b in range(nbuck):
                recmask[nrec] = bmask[b]
                recrank[nrec] = ksz
                nrec += 1
            total += nbuck
        return total
    finally:
        free(L); free(idx); free(cols); free(recmask)
        free(recrank); free(keybuf); free(bmask)


cdef object _scan_key(long long* L, int* idx, int r, long long* qrow,
                      int d, i128* v):
    """Canonical key of the surface spanned by rows idx[0..r-1] (+ qrow if
    non-NULL); None when the rows are linearly dependent."""
    cdef int k = d + 2, j, c, c2, row
    cdef i128 scratch[MAXK * MAXK]
    cdef long long* src
    cdef i128 mdet
    for j in range(k):
        for row in range(r):
            src = L + idx[row] * k
            c2 = 0
            for c in range(k):
                if c != j:
                    scratch[row * (k - 1) + c2] = <i128>src[c]
                    c2 += 1
        if qrow != NULL:
            c2 = 0
            for c in range(k):
                if c != j:
                    scratch[r * (k - 1) + c2] = <i128>qrow[c]
                    c2 += 1
        mdet = _det_i128(scratch, k - 1)
        if j & 1:
            v[j] = -mdet
        else:
            v[j] = mdet
    return _key_from_minors(v, k)


def surface_scan(points, min_bucket):
    pts = [tuple(p) for p in points]
    m = len(pts)
    if m == 0:
        return {}, []
    d = len(pts[0])
    if m < d + 1:
        return {}, []
    if d + 2 > MAXK:
        return _pykernels.surface_scan(points, min_bucket)
    lrows = [_pykernels.lift_row(p) for p in pts]
    bound = max(abs(x) for row in lrows for x in row)
    if not _fits(d + 1, bound):
        return _pykernels.surface_scan(points, min_bucket)

    cdef int k = d + 2, r = d + 1
    cdef long long* L = <long long*>malloc(m * k * sizeof(long long))
    cdef int* idx = <int*>malloc(r * sizeof(int))
    if L == NULL or idx == NULL:
        free(L); free(idx)
        raise MemoryError()
    cdef int i, j
    cdef i128 v[MAXK]
    flats = []
    members = {}
    counts = {}
    try:
        for i in range(m):
            row = lrows[i]
            for j in range(k):
                L[i * k + j] = row[j]

        full = min_bucket <= 1
        for i in range(r):
            idx[i] = i
        while True:
            key = _scan_key(L, idx, r, NULL, d, v)
            if key is None:
                flats.append(tuple(idx[i] for i in range(r)))
            elif full:
                bucket = members.get(key)
                if bucket is None:
                    bucket = set()
                    members[key] = bucket
                for i in range(r):
                    bucket.add(idx[i])
            else:
                counts[key] = counts.get(key, 0) + 1
            if not _next_comb(idx, r, m):
                break

        if not full:
            wanted = {kk for kk, c in counts.items() if c >= min_bucket}
            counts = None
            if wanted:
                for i in range(r):
                    idx[i] = i
                while True:
                    key = _scan_key(L, idx, r, NULL, d, v)
                    if key is not None and key in wanted:
                        bucket = members.get(key)
                        if bucket is None:
                            bucket = set()
                            members[key] = bucket
                        for i in range(r):
                            bucket.add(idx[i])
                    if not _next_comb(idx, r, m):
                        break
        return {kk: sorted(vv) for kk, vv in members.items()}, flats
    finally:
        free(L); free(idx)


def anchor_scan(points, q):
    pts = [tuple(p) for p in points]
    q = tuple(q)
    d = len(q)
    m = len(pts)
    if m < d:
        return False
    if d + 2 > MAXK:
        return _pykernels.anchor_scan(points, q)
    lrows = [_pykernels.lift_row(p) for p in pts]
    qlift = _pykernels.lift_row(q)
    bound = max(max(abs(x) for row in lrows for x in row), max(abs(x) for x in qlift))
    if not _fits(d + 1, bound):
        return _pykernels.anchor_scan(points, q)

    cdef int k = d + 2, r = d
    cdef bint reject_on_flat = m >= d + 1
    cdef long long* L = <long long*>malloc(m * k * sizeof(long long))
    cdef long long qrow[MAXK]
    cdef int* idx = <int*>malloc(r * sizeof(int))
    if L == NULL or idx == NULL:
        free(L); free(idx)
        raise MemoryError()
    cdef int i, j
    cdef i128 v[MAXK]
    buckets = {}
    try:
        for i in range(m):
            row = lrows[i]
            for j in range(k):
                L[i * k + j] = row[j]
        for j in range(k):
            qrow[j] = qlift[j]
        for i in range(r):
            idx[i] = i
        while True:
            key = _scan_key(L, idx, r, qrow, d, v)
            if key is None:
                if reject_on_flat:
                    return True
            else:
                bucket = buckets.get(key)
                if bucket is None:
                    bucket = set()
                    buckets[key] = bucket
                for i in range(r):
                    bucket.add(idx[i])
                if len(bucket) >= d + 1:
                    return True
            if not _next_comb(idx, r, m):
                break
        return False
    finally:
        free(L); free(idx)
