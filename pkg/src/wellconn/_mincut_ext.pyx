# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exact global min-cut kernel.

Stoer-Wagner maximum-adjacency phases with Nagamochi-Ibaraki contraction:
during a phase, an edge whose scan-time attachment value reaches the best
cut found so far is contracted, besides the usual last pair. Mirrors
``_mincut_py.stoer_wagner`` step for step, including tie-breaking.
"""
from libcpp.vector cimport vector
from libcpp.queue cimport priority_queue
from libcpp.pair cimport pair

import numpy as np

ctypedef long long i64


cdef extern from *:
    """
    #include <algorithm>
    #include <vector>
    struct Arc { int src; int dst; long long w; };
    static inline bool arc_less(const Arc& a, const Arc& b) {
        return a.src < b.src || (a.src == b.src && a.dst < b.dst);
    }
    static inline void sort_arcs(std::vector<Arc>& v) {
        std::sort(v.begin(), v.end(), arc_less);
    }
    """
    cdef struct Arc:
        int src
        int dst
        i64 w
    void sort_arcs(vector[Arc]& v) nogil


cdef int _find(vector[int]& parent, int x) noexcept nogil:
    cdef int r = x
    while parent[r] != r:
        r = parent[r]
    while parent[x] != r:
        parent[x], x = r, parent[x]
    return r


cdef void _union(vector[int]& parent, int a, int b) noexcept nogil:
    a = _find(parent, a)
    b = _find(parent, b)
    if a != b:
        # smaller id becomes the root so renumbering is order independent
        if a < b:
            parent[b] = a
        else:
            parent[a] = b


cdef i64 _run(int n0, const i64[::1] indptr, const i64[::1] indices,
              i64 lower_bound, char* best_side) noexcept nogil:
    cdef vector[i64] ptr
    cdef vector[int] nbr
    cdef vector[i64] wt
    cdef vector[int] label = vector[int](n0)
    cdef vector[int] parent, newid
    cdef vector[i64] key
    cdef vector[char] seen
    cdef vector[Arc] arcs
    cdef Arc arc
    cdef priority_queue[pair[i64, int]] pq
    cdef pair[i64, int] top
    cdef int k = n0, v, u, i, j, s, t, added, nk, arg
    cdef i64 e, best = -1, deg, cut

    ptr.resize(n0 + 1)
    for v in range(n0 + 1):
        ptr[v] = indptr[v]
    for e in range(indptr[n0]):
        nbr.push_back(<int>indices[e])
        wt.push_back(1)
    for v in range(n0):
        label[v] = v

    while k > 1:
        # singleton supernode cuts
        arg = -1
        for v in range(k):
            deg = 0
            for e in range(ptr[v], ptr[v + 1]):
                deg += wt[e]
            if best < 0 or deg < best:
                best = deg
                arg = v
        if arg >= 0:
            for i in range(n0):
                best_side[i] = label[i] == arg
        if best <= lower_bound:
            break

        # maximum-adjacency ordering with contraction marks
        parent.resize(k)
        key.assign(k, 0)
        seen.assign(k, 0)
        for v in range(k):
            parent[v] = v
        while not pq.empty():
            pq.pop()
        pq.push(pair[i64, int](0, 0))
        s = -1
        t = -1
        added = 0
        while added < k:
            if pq.empty():
                v = k - 1
                while seen[v]:
                    v -= 1
                pq.push(pair[i64, int](0, v))
            top = pq.top()
            pq.pop()
            v = top.second
            if seen[v] or top.first != key[v]:
                continue
            seen[v] = 1
            added += 1
            s = t
            t = v
            for e in range(ptr[v], ptr[v + 1]):
                u = nbr[e]
                if not seen[u]:
                    key[u] += wt[e]
                    pq.push(pair[i64, int](key[u], u))
                    if key[u] >= best:
                        _union(parent, v, u)
        cut = key[t]
        if cut < best:
            best = cut
            for i in range(n0):
                best_side[i] = label[i] == t
            if best <= lower_bound:
                break
        _union(parent, s, t)

        # contract
        newid.assign(k, -1)
        nk = 0
        for v in range(k):
            j = _find(parent, v)
            if newid[j] < 0:
                newid[j] = nk
                nk += 1
            newid[v] = newid[j]
        arcs.clear()
        for v in range(k):
            for e in range(ptr[v], ptr[v + 1]):
                if newid[v] != newid[nbr[e]]:
                    arc.src = newid[v]
                    arc.dst = newid[nbr[e]]
                    arc.w = wt[e]
                    arcs.push_back(arc)
        sort_arcs(arcs)
        ptr.assign(nk + 1, 0)
        nbr.clear()
        wt.clear()
        for i in range(<int>arcs.size()):
            if nbr.size() > 0 and i > 0 and arcs[i].src == arcs[i - 1].src and arcs[i].dst == arcs[i - 1].dst:
                wt[wt.size() - 1] += arcs[i].w
            else:
                nbr.push_back(arcs[i].dst)
                wt.push_back(arcs[i].w)
                ptr[arcs[i].src + 1] = nbr.size()
        for v in range(1, nk + 1):
            if ptr[v] < ptr[v - 1]:
                ptr[v] = ptr[v - 1]
        for i in range(n0):
            label[i] = newid[label[i]]
        k = nk
    return best


def stoer_wagner(const i64[::1] indptr, const i64[::1] indices, long long lower_bound=0):
    """Exact global min cut of an unweighted CSR graph with ``n >= 2`` nodes.

    Returns ``(cut_size, side)`` where ``side`` is a boolean mask of one shore.
    Stops early once a cut of size ``<= lower_bound`` is found.
    """
    cdef int n = indptr.shape[0] - 1
    if n < 2:
        raise ValueError("min cut needs at least two nodes")
    side = np.zeros(n, dtype=np.int8)
    cdef char[::1] side_view = side
    cdef i64 best
    with nogil:
        best = _run(n, indptr, indices, lower_bound, &side_view[0])
    return int(best), side.astype(bool)
