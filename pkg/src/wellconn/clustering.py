"""Partitions of a graph's node set, clustering files and cluster statistics."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import ContractViolation, ParseError
from .graph import Graph


class Clustering:
    """A partition of ``n`` nodes into clusters with dense labels ``0..B-1``.

    ``node_labels`` is the external label of every node (shared with the
    graph the clustering was read against) and defines the node universe.
    """

    __slots__ = ("assignment", "node_labels", "_clusters")

    def __init__(self, assignment, node_labels: Sequence[str]):
        assignment = np.asarray(assignment, dtype=np.int64)
        if assignment.ndim != 1 or len(assignment) != len(node_labels):
            raise ContractViolation("assignment must have one entry per node")
        # renumber densely by first appearance
        if assignment.size:
            _, first, inverse = np.unique(assignment, return_index=True, return_inverse=True)
            rank = np.empty(len(first), dtype=np.int64)
            rank[np.argsort(first, kind="stable")] = np.arange(len(first))
            assignment = rank[inverse.ravel()]
        assignment.setflags(write=False)
        self.assignment = assignment
        self.node_labels = tuple(node_labels)
        self._clusters = None

    @classmethod
    def from_clusters(cls, clusters: Iterable[Iterable[int]], node_labels: Sequence[str]) -> "Clustering":
        """Build from an explicit list of node-index groups covering every node once."""
        n = len(node_labels)
        assignment = np.full(n, -1, dtype=np.int64)
        for cid, members in enumerate(clusters):
            members = np.asarray(list(members) if not isinstance(members, np.ndarray) else members,
                                 dtype=np.int64)
            if members.size == 0:
                continue
            if np.any(assignment[members] != -1):
                raise ContractViolation("clusters overlap")
            assignment[members] = cid
        if np.any(assignment == -1):
            raise ContractViolation("clusters do not cover every node")
        return cls(assignment, node_labels)

    @classmethod
    def single(cls, graph: Graph) -> "Clustering":
        return cls(np.zeros(graph.n, dtype=np.int64), graph.labels)

    @classmethod
    def singletons(cls, graph: Graph) -> "Clustering":
        return cls(np.arange(graph.n), graph.labels)

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def B(self) -> int:
        return len(self.clusters)

    num_clusters = B

    @property
    def clusters(self) -> list[np.ndarray]:
        """Member arrays (sorted node indices) indexed by cluster label."""
        if self._clusters is None:
            if self.n == 0:
                self._clusters = []
            else:
                order = np.argsort(self.assignment, kind="stable")
                counts = np.bincount(self.assignment)
                self._clusters = np.split(order, np.cumsum(counts)[:-1])
        return self._clusters

    def sizes(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros(0, dtype=np.int64)
        return np.bincount(self.assignment)

    def canonical(self) -> "Clustering":
        """Relabel clusters in order of their smallest member."""
        if self.n == 0:
            return self
        mins = np.array([c[0] for c in self.clusters])
        rank = np.empty(len(mins), dtype=np.int64)
        rank[np.argsort(mins)] = np.arange(len(mins))
        return Clustering(rank[self.assignment], self.node_labels)

    def same_partition(self, other: "Clustering") -> bool:
        return (self.node_labels == other.node_labels
                and np.array_equal(self.canonical().assignment, other.canonical().assignment))

    def __eq__(self, other):
        if not isinstance(other, Clustering):
            return NotImplemented
        return self.node_labels == other.node_labels and np.array_equal(self.assignment, other.assignment)

    __hash__ = None

    def __repr__(self):
        return f"Clustering(n={self.n}, B={self.B})"


def parse_clustering(stream: TextIO | Iterable[str], graph: Graph, source: str | None = None) -> Clustering:
    """Read ``node cluster`` lines against ``graph``.

    Nodes of the graph that the file does not mention become singletons,
    numbered after the file's clusters in node-index order.
    """
    index = graph.label_index
    assignment = np.full(graph.n, -1, dtype=np.int64)
    cluster_ids: dict[str, int] = {}
    for lineno, line in enumerate(stream, start=1):
        s = line.strip()
        if not s or s.startswith(("#", "%")):
            continue
        parts = s.split()
        if len(parts) < 2:
            raise ParseError(f"expected 'node cluster', got {s!r}", lineno, source)
        node, cl = parts[0], parts[1]
        i = index.get(node)
        if i is None:
            raise ParseError(f"unknown node label {node!r}", lineno, source)
        if assignment[i] != -1:
            raise ParseError(f"node {node!r} assigned more than once", lineno, source)
        cid = cluster_ids.setdefault(cl, len(cluster_ids))
        assignment[i] = cid
    missing = np.flatnonzero(assignment == -1)
    assignment[missing] = len(cluster_ids) + np.arange(len(missing))
    return Clustering(assignment, graph.labels)


def read_clustering(path, graph: Graph) -> Clustering:
    with open(path, encoding="utf-8") as fh:
        return parse_clustering(fh, graph, source=str(path))


def read_clustering_labels(path) -> list[str]:
    """Node labels mentioned in a clustering file (used to admit isolated nodes)."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            s = line.strip()
            if s and not s.startswith(("#", "%")):
                out.append(s.split()[0])
    return out


def _label_sort_key(label: str):
    # numeric labels sort numerically, everything else lexically after them
    try:
        return (0, int(label), "")
    except ValueError:
        return (1, 0, label)


def write_clustering(clustering: Clustering, stream: TextIO) -> None:
    """Write ``node<TAB>cluster`` lines sorted by node label."""
    labels = clustering.node_labels
    assignment = clustering.assignment
    for i in sorted(range(clustering.n), key=lambda i: _label_sort_key(labels[i])):
        stream.write(f"{labels[i]}\t{assignment[i]}\n")


def is_refinement(child: Clustering, parent: Clustering) -> bool:
    """True iff every cluster of ``child`` lies inside one cluster of ``parent``."""
    if child.node_labels != parent.node_labels:
        raise ContractViolation("clusterings are over different node universes")
    if child.n == 0:
        return True
    pa = parent.assignment
    for members in child.clusters:
        if np.any(pa[members] != pa[members[0]]):
            return False
    return True


def lower_median(values) -> int:
    vals = sorted(values)
    return int(vals[(len(vals) - 1) // 2])


@dataclass
class ClusterStats:
    n: int
    node_coverage: float
    num_clusters: int
    num_non_singleton: int
    size_min: int | None
    size_median: int | None
    size_max: int | None
    size_histogram: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["size_histogram"] = {str(k): v for k, v in sorted(self.size_histogram.items())}
        return d


def cluster_stats(clustering: Clustering) -> ClusterStats:
    """Coverage and size statistics.

    Size min/median/max are taken over non-singleton clusters; when every
    cluster is a singleton they fall back to all clusters (all equal 1), and
    they are ``None`` only for an empty node set.
    """
    sizes = clustering.sizes()
    n = clustering.n
    big = sizes[sizes >= 2]
    covered = int(big.sum())
    pool = big if big.size else sizes
    hist_keys, hist_counts = np.unique(sizes, return_counts=True)
    return ClusterStats(
        n=n,
        node_coverage=covered / n if n else 0.0,
        num_clusters=int(sizes.size),
        num_non_singleton=int(big.size),
        size_min=int(pool.min()) if pool.size else None,
        size_median=lower_median(pool) if pool.size else None,
        size_max=int(pool.max()) if pool.size else None,
        size_histogram={int(k): int(c) for k, c in zip(hist_keys, hist_counts)},
    )
