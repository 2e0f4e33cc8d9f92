"""Pure-Python min-cut kernel (fallback when the extension is absent).

Stoer-Wagner maximum-adjacency phases with Nagamochi-Ibaraki contraction,
step for step the same as the compiled kernel, tie-breaking included.
"""
import heapq

import numpy as np


def _find(parent, x):
    r = x
    while parent[r] != r:
        r = parent[r]
    while parent[x] != r:
        parent[x], x = r, parent[x]
    return r


def _union(parent, a, b):
    a = _find(parent, a)
    b = _find(parent, b)
    if a != b:
        if a < b:
            parent[b] = a
        else:
            parent[a] = b


def stoer_wagner(indptr, indices, lower_bound=0):
    """Exact global min cut of an unweighted CSR graph with ``n >= 2`` nodes.

    Returns ``(cut_size, side)`` where ``side`` is a boolean mask of one shore.
    Stops early once a cut of size ``<= lower_bound`` is found.
    """
    n0 = len(indptr) - 1
    if n0 < 2:
        raise ValueError("min cut needs at least two nodes")
    indptr = np.asarray(indptr).tolist()
    indices = np.asarray(indices).tolist()
    adj = [[(u, 1) for u in indices[indptr[v]:indptr[v + 1]]] for v in range(n0)]
    label = np.arange(n0)
    best = -1
    best_side = None
    k = n0
    while k > 1:
        # singleton supernode cuts
        arg = -1
        for v in range(k):
            deg = sum(w for _, w in adj[v])
            if best < 0 or deg < best:
                best = deg
                arg = v
        if arg >= 0:
            best_side = label == arg
        if best <= lower_bound:
            break

        # maximum-adjacency ordering with contraction marks
        parent = list(range(k))
        key = [0] * k
        seen = [False] * k
        # max-heap on (key, node) via negation
        pq = [(0, 0)]
        s = t = -1
        added = 0
        while added < k:
            if not pq:
                v = k - 1
                while seen[v]:
                    v -= 1
                pq.append((0, -v))
            kv, v = heapq.heappop(pq)
            v = -v
            if seen[v] or -kv != key[v]:
                continue
            seen[v] = True
            added += 1
            s, t = t, v
            for u, w in adj[v]:
                if not seen[u]:
                    key[u] += w
                    heapq.heappush(pq, (-key[u], -u))
                    if key[u] >= best:
                        _union(parent, v, u)
        cut = key[t]
        if cut < best:
            best = cut
            best_side = label == t
            if best <= lower_bound:
                break
        _union(parent, s, t)

        # contract
        newid = [-1] * k
        nk = 0
        for v in range(k):
            j = _find(parent, v)
            if newid[j] < 0:
                newid[j] = nk
                nk += 1
            newid[v] = newid[j]
        merged = [{} for _ in range(nk)]
        for v in range(k):
            nv = newid[v]
            row = merged[nv]
            for u, w in adj[v]:
                nu = newid[u]
                if nu != nv:
                    row[nu] = row.get(nu, 0) + w
        adj = [sorted(row.items()) for row in merged]
        label = np.asarray(newid)[label]
        k = nk
    return best, np.asarray(best_side, dtype=bool)
