"""Seeded planted-partition graphs for tests and benchmarks."""
from __future__ import annotations

import numpy as np

from .clustering import Clustering
from .graph import Graph


def planted_partition(sizes, p_in: float, p_out: float, seed=0):
    """Return ``(graph, truth)``; node labels are ``"0".."n-1"``.

    Nodes that end up with no edge are kept, so the graph may contain
    isolated nodes.
    """
    rng = np.random.default_rng(seed)
    sizes = [int(s) for s in sizes]
    n = sum(sizes)
    offsets = np.cumsum([0] + sizes)
    parts = []
    for s, off in zip(sizes, offsets[:-1]):
        iu, ju = np.triu_indices(s, k=1)
        keep = rng.random(len(iu)) < p_in
        parts.append(np.column_stack([iu[keep], ju[keep]]) + off)
    if p_out > 0 and n > 1:
        m = rng.binomial(n * (n - 1) // 2, p_out)
        u = rng.integers(0, n, size=m)
        v = rng.integers(0, n, size=m)
        block = np.repeat(np.arange(len(sizes)), sizes)
        cross = block[u] != block[v]
        parts.append(np.column_stack([u[cross], v[cross]]))
    edges = np.concatenate(parts) if parts else np.zeros((0, 2), dtype=np.int64)
    graph = Graph.from_edges(n, edges, [str(i) for i in range(n)])
    truth = Clustering(np.repeat(np.arange(len(sizes)), sizes), graph.labels)
    return graph, truth


def merge_clusters(clustering: Clustering, group: int, seed=0) -> Clustering:
    """Randomly merge clusters into groups of ``group``, mimicking a coarse clustering."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(clustering.B)
    target = np.empty(clustering.B, dtype=np.int64)
    target[perm] = np.arange(clustering.B) // group
    return Clustering(target[clustering.assignment], clustering.node_labels)


def random_partition(n: int, k: int, labels, seed=0) -> Clustering:
    rng = np.random.default_rng(seed)
    return Clustering(rng.integers(0, max(k, 1), size=n), labels)
