# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# cython: language_level=3
"""Compiled persistence kernels.

Same contracts as topoprobe._core_py: a union-find scan over sorted
edges for the degree-0 merge events, and a GF(2) reduction of edge
coboundary columns for the degree-1 pairs. The reduction runs on the
anti-transposed boundary matrix, one column per edge (youngest first),
with three standard accelerations:

- edges flagged as degree-0 deaths reduce to zero by construction and
  are skipped outright;
- a column whose minimal cofacet has the column's own edge as its
  maximal facet settles immediately on that cofacet (equal diameters,
  a pair of every valid reduction), with no heap work at all;
- the working column lives in a lazy binary min-heap with parity
  cancellation, and settled columns are stored in factored form as the
  short list of edges whose coboundaries sum to them, replayed on
  demand instead of stored entry by entry.

The pairs produced are exactly those of the straightforward
triangle-column reduction, and nothing of size O(n^3) is ever
materialized.
"""

import numpy as np

from libc.stdlib cimport free, malloc, realloc

BACKEND = "compiled"


ctypedef struct Tri:
    double diam
    long long code


cdef inline long long _find_root(long long* parent, long long x) noexcept nogil:
    cdef long long root = x
    cdef long long nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def kruskal_merge_flags(const int[::1] ei, const int[::1] ej, Py_ssize_t n):
    """Flag the edges (in filtration order) that merge two components."""
    cdef Py_ssize_t n_edges = ei.shape[0]
    flags_arr = np.zeros(n_edges, dtype=np.uint8)
    cdef unsigned char[::1] flags = flags_arr
    cdef long long* parent = <long long*> malloc(n * sizeof(long long))
    if parent == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, k
    cdef long long ra, rb
    cdef Py_ssize_t merges = 0
    try:
        with nogil:
            for i in range(n):
                parent[i] = i
            for k in range(n_edges):
                ra = _find_root(parent, ei[k])
                rb = _find_root(parent, ej[k])
                if ra != rb:
                    parent[ra] = rb
                    flags[k] = 1
                    merges += 1
                    if merges == n - 1:
                        break
    finally:
        free(parent)
    return flags_arr


cdef inline bint _tri_lt(Tri a, Tri b) noexcept nogil:
    if a.diam != b.diam:
        return a.diam < b.diam
    return a.code < b.code


cdef inline void _heap_push(Tri* heap, long long* size, Tri item) noexcept nogil:
    cdef long long i = size[0]
    cdef long long p
    heap[i] = item
    size[0] = i + 1
    while i > 0:
        p = (i - 1) >> 1
        if _tri_lt(heap[i], heap[p]):
            heap[i], heap[p] = heap[p], heap[i]
            i = p
        else:
            break


cdef inline void _sift_down(Tri* heap, long long size, long long i) noexcept nogil:
    cdef long long child
    while True:
        child = 2 * i + 1
        if child >= size:
            return
        if child + 1 < size and _tri_lt(heap[child + 1], heap[child]):
            child += 1
        if _tri_lt(heap[child], heap[i]):
            heap[i], heap[child] = heap[child], heap[i]
            i = child
        else:
            return


cdef inline Tri _heap_pop(Tri* heap, long long* size) noexcept nogil:
    cdef Tri root = heap[0]
    size[0] -= 1
    heap[0] = heap[size[0]]
    _sift_down(heap, size[0], 0)
    return root


cdef inline bint _heap_pivot(Tri* heap, long long* size, Tri* out) noexcept nogil:
    # pop the minimal entry with odd multiplicity; even copies cancel
    cdef Tri t
    cdef long long cnt
    while size[0] > 0:
        t = _heap_pop(heap, size)
        cnt = 1
        while size[0] > 0 and heap[0].diam == t.diam and heap[0].code == t.code:
            _heap_pop(heap, size)
            cnt += 1
        if cnt & 1:
            out[0] = t
            return True
    return False


cdef inline void _vheap_push(long long* heap, long long* size, long long item) noexcept nogil:
    cdef long long i = size[0]
    cdef long long p
    heap[i] = item
    size[0] = i + 1
    while i > 0:
        p = (i - 1) >> 1
        if heap[i] < heap[p]:
            heap[i], heap[p] = heap[p], heap[i]
            i = p
        else:
            break


cdef inline long long _vheap_pop(long long* heap, long long* size) noexcept nogil:
    cdef long long root = heap[0]
    cdef long long i = 0, child
    size[0] -= 1
    heap[0] = heap[size[0]]
    while True:
        child = 2 * i + 1
        if child >= size[0]:
            break
        if child + 1 < size[0] and heap[child + 1] < heap[child]:
            child += 1
        if heap[child] < heap[i]:
            heap[i], heap[child] = heap[child], heap[i]
            i = child
        else:
            break
    return root


cdef inline long long _ht_get(long long* keys, long long* vals,
                              unsigned long long mask, int shift,
                              long long code) noexcept nogil:
    cdef unsigned long long h = ((<unsigned long long> code) *
                                 <unsigned long long> 0x9E3779B97F4A7C15) >> shift
    while True:
        if keys[h] == -1:
            return -1
        if keys[h] == code:
            return vals[h]
        h = (h + 1) & mask


cdef inline void _ht_put(long long* keys, long long* vals,
                         unsigned long long mask, int shift,
                         long long code, long long val) noexcept nogil:
    cdef unsigned long long h = ((<unsigned long long> code) *
                                 <unsigned long long> 0x9E3779B97F4A7C15) >> shift
    while keys[h] != -1:
        h = (h + 1) & mask
    keys[h] = code
    vals[h] = val


cdef inline bint _edge_lt(double w1, long long i1, long long j1,
                          double w2, long long i2, long long j2) noexcept nogil:
    # filtration order of edges: (weight, smaller vertex, larger vertex)
    if w1 != w2:
        return w1 < w2
    if i1 != i2:
        return i1 < i2
    return j1 < j2


def h1_pairs(const double[:, ::1] dist, double thr, const double[::1] w,
             const int[::1] ei, const int[::1] ej,
             const unsigned char[::1] flags, Py_ssize_t n):
    """Degree-1 persistence pairs; see topoprobe._core_py.h1_pairs."""
    cdef Py_ssize_t n_edges = w.shape[0]
    cdef long long E = n_edges

    cdef long long* ht_keys = NULL       # triangle code -> settled column id
    cdef long long* ht_vals = NULL
    cdef unsigned long long ht_size = 16
    cdef unsigned long long ht_mask
    cdef unsigned long long sz
    cdef int ht_shift

    cdef long long* varena = NULL        # factored columns: edge-index lists
    cdef long long varena_len = 0, varena_cap = 0
    cdef long long* col_off = NULL
    cdef long long* col_len = NULL
    cdef long long col_count = 0

    cdef Tri* heap = NULL                # working coboundary, lazy min-heap
    cdef long long heap_cap = 0, heap_size = 0
    cdef long long* vheap = NULL         # working factorization, min-heap
    cdef long long vheap_cap = 0, vheap_size = 0

    cdef long long* pair_e = NULL
    cdef double* pair_d = NULL
    cdef long long pair_count = 0

    cdef Py_ssize_t k, c, i
    cdef long long a, b, t0, t1, t2, own, f, need
    cdef long long min_c, vstart, vlen, prev, cur, fa, fb
    cdef long long lo_ac, hi_ac, lo_bc, hi_bc
    cdef double we, dac, dbc, diam, wf
    cdef Tri item, piv, min_tri
    cdef bint have_min, apparent, settled
    cdef void* tmp
    cdef bint oom = False
    cdef long long[::1] out_e_v
    cdef double[::1] out_d_v

    if n_edges == 0 or n < 3:
        return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64))

    while ht_size < 2 * <unsigned long long> E:
        ht_size *= 2
    ht_mask = ht_size - 1
    ht_shift = 64
    sz = ht_size
    while sz > 1:
        sz >>= 1
        ht_shift -= 1

    ht_keys = <long long*> malloc(ht_size * sizeof(long long))
    ht_vals = <long long*> malloc(ht_size * sizeof(long long))
    col_off = <long long*> malloc(E * sizeof(long long))
    col_len = <long long*> malloc(E * sizeof(long long))
    pair_e = <long long*> malloc(E * sizeof(long long))
    pair_d = <double*> malloc(E * sizeof(double))
    heap_cap = 4 * n
    heap = <Tri*> malloc(heap_cap * sizeof(Tri))
    vheap_cap = 64
    vheap = <long long*> malloc(vheap_cap * sizeof(long long))

    try:
        if (ht_keys == NULL or ht_vals == NULL or col_off == NULL
                or col_len == NULL or pair_e == NULL or pair_d == NULL
                or heap == NULL or vheap == NULL):
            raise MemoryError()
        with nogil:
            for i in range(<Py_ssize_t> ht_size):
                ht_keys[i] = -1

            for k in range(n_edges - 1, -1, -1):
                if flags[k]:
                    continue             # cleared: edge is a degree-0 death
                a = ei[k]
                b = ej[k]
                we = w[k]

                # scan cofacets once: fill the heap buffer, track the minimum
                heap_size = 0
                have_min = False
                min_c = -1
                for c in range(n):
                    if c == a or c == b:
                        continue
                    dac = dist[a, c]
                    if dac > thr:
                        continue
                    dbc = dist[b, c]
                    if dbc > thr:
                        continue
                    diam = we
                    if dac > diam:
                        diam = dac
                    if dbc > diam:
                        diam = dbc
                    t0 = a
                    t2 = b
                    if c < t0:
                        t1 = t0
                        t0 = c
                    elif c > t2:
                        t1 = t2
                        t2 = c
                    else:
                        t1 = c
                    if heap_size == heap_cap:
                        heap_cap *= 2
                        tmp = realloc(heap, heap_cap * sizeof(Tri))
                        if tmp == NULL:
                            oom = True
                            break
                        heap = <Tri*> tmp
                    item.diam = diam
                    item.code = (t0 * n + t1) * n + t2
                    heap[heap_size] = item
                    heap_size += 1
                    if not have_min or _tri_lt(item, min_tri):
                        min_tri = item
                        min_c = c
                        have_min = True
                if oom:
                    break
                if not have_min:
                    continue             # no cofacets: zero column

                # shortcut: minimal cofacet whose maximal facet is this edge
                if min_tri.diam == we:
                    dac = dist[a, min_c]
                    dbc = dist[b, min_c]
                    lo_ac = a if a < min_c else min_c
                    hi_ac = min_c if a < min_c else a
                    lo_bc = b if b < min_c else min_c
                    hi_bc = min_c if b < min_c else b
                    apparent = (_edge_lt(dac, lo_ac, hi_ac, we, a, b)
                                and _edge_lt(dbc, lo_bc, hi_bc, we, a, b)
                                and _ht_get(ht_keys, ht_vals, ht_mask, ht_shift,
                                            min_tri.code) == -1)
                    if apparent:
                        # column settles as-is; factorization is itself
                        if varena_len + 1 > varena_cap:
                            varena_cap = 1024 if varena_cap == 0 else varena_cap * 2
                            tmp = realloc(varena, varena_cap * sizeof(long long))
                            if tmp == NULL:
                                oom = True
                                break
                            varena = <long long*> tmp
                        varena[varena_len] = k
                        col_off[col_count] = varena_len
                        col_len[col_count] = 1
                        varena_len += 1
                        _ht_put(ht_keys, ht_vals, ht_mask, ht_shift,
                                min_tri.code, col_count)
                        col_count += 1
                        pair_e[pair_count] = k
                        pair_d[pair_count] = min_tri.diam
                        pair_count += 1
                        continue

                # general path: heapify the buffer and reduce
                for i in range(heap_size // 2 - 1, -1, -1):
                    _sift_down(heap, heap_size, i)
                vheap_size = 0
                _vheap_push(vheap, &vheap_size, k)
                settled = False
                while _heap_pivot(heap, &heap_size, &piv):
                    own = _ht_get(ht_keys, ht_vals, ht_mask, ht_shift, piv.code)
                    if own == -1:
                        settled = True
                        break
                    # put the pivot back; the owner replay must cancel it
                    if heap_size == heap_cap:
                        heap_cap *= 2
                        tmp = realloc(heap, heap_cap * sizeof(Tri))
                        if tmp == NULL:
                            oom = True
                            break
                        heap = <Tri*> tmp
                    _heap_push(heap, &heap_size, piv)
                    # replay the owner's factored column
                    vstart = col_off[own]
                    vlen = col_len[own]
                    need = vheap_size + vlen
                    if need > vheap_cap:
                        while vheap_cap < need:
                            vheap_cap *= 2
                        tmp = realloc(vheap, vheap_cap * sizeof(long long))
                        if tmp == NULL:
                            oom = True
                            break
                        vheap = <long long*> tmp
                    for i in range(vlen):
                        f = varena[vstart + i]
                        _vheap_push(vheap, &vheap_size, f)
                        fa = ei[f]
                        fb = ej[f]
                        wf = w[f]
                        need = heap_size + n
                        if need > heap_cap:
                            while heap_cap < need:
                                heap_cap *= 2
                            tmp = realloc(heap, heap_cap * sizeof(Tri))
                            if tmp == NULL:
                                oom = True
                                break
                            heap = <Tri*> tmp
                        for c in range(n):
                            if c == fa or c == fb:
                                continue
                            dac = dist[fa, c]
                            if dac > thr:
                                continue
                            dbc = dist[fb, c]
                            if dbc > thr:
                                continue
                            diam = wf
                            if dac > diam:
                                diam = dac
                            if dbc > diam:
                                diam = dbc
                            t0 = fa if fa < fb else fb
                            t2 = fb if fa < fb else fa
                            if c < t0:
                                t1 = t0
                                t0 = c
                            elif c > t2:
                                t1 = t2
                                t2 = c
                            else:
                                t1 = c
                            item.diam = diam
                            item.code = (t0 * n + t1) * n + t2
                            _heap_push(heap, &heap_size, item)
                    if oom:
                        break
                if oom:
                    break
                if not settled:
                    continue             # column reduced to zero

                # settle: compact the factorization (GF(2) parity) and store
                vstart = varena_len
                vlen = 0
                prev = -1
                while vheap_size > 0:
                    cur = _vheap_pop(vheap, &vheap_size)
                    if cur == prev:
                        # cancel the pair: drop the stored copy
                        vlen -= 1
                        varena_len -= 1
                        prev = -1
                        continue
                    if varena_len + 1 > varena_cap:
                        varena_cap = 1024 if varena_cap == 0 else varena_cap * 2
                        tmp = realloc(varena, varena_cap * sizeof(long long))
                        if tmp == NULL:
                            oom = True
                            break
                        varena = <long long*> tmp
                    varena[varena_len] = cur
                    varena_len += 1
                    vlen += 1
                    prev = cur
                if oom:
                    break
                col_off[col_count] = vstart
                col_len[col_count] = vlen
                _ht_put(ht_keys, ht_vals, ht_mask, ht_shift, piv.code, col_count)
                col_count += 1
                pair_e[pair_count] = k
                pair_d[pair_count] = piv.diam
                pair_count += 1
        if oom:
            raise MemoryError()

        out_e = np.empty(pair_count, dtype=np.int64)
        out_d = np.empty(pair_count, dtype=np.float64)
        out_e_v = out_e
        out_d_v = out_d
        for i in range(pair_count):
            out_e_v[i] = pair_e[i]
            out_d_v[i] = pair_d[i]
        return out_e, out_d
    finally:
        free(ht_keys)
        free(ht_vals)
        free(col_off)
        free(col_len)
        free(pair_e)
        free(pair_d)
        free(heap)
        free(vheap)
        free(varena)
