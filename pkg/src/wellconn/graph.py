"""Undirected simple graphs stored as CSR arrays.

Nodes carry their external label (the token read from the edge-list file)
and a dense internal index assigned in first-appearance order.
"""
from __future__ import annotations

from typing import Iterable, Sequence, TextIO

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import ContractViolation, ParseError

_COMMENT_PREFIXES = ("#", "%")


class Graph:
    """Immutable undirected simple graph.

    Parameters
    ----------
    indptr, indices : ndarray
        CSR adjacency. Neighbor lists must be strictly increasing and the
        adjacency symmetric; use :meth:`from_edges` to build from raw pairs.
    labels : sequence of str
        External label of each internal index.
    """

    __slots__ = ("n", "indptr", "indices", "labels", "_label_index", "_csr")

    def __init__(self, indptr, indices, labels: Sequence[str]):
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        if len(indptr) != len(labels) + 1:
            raise ContractViolation("indptr length must be n + 1")
        indptr.setflags(write=False)
        indices.setflags(write=False)
        self.n = len(labels)
        self.indptr = indptr
        self.indices = indices
        self.labels = tuple(str(x) for x in labels)
        self._label_index = None
        self._csr = None

    @classmethod
    def from_edges(cls, n: int, edges, labels: Sequence[str] | None = None) -> "Graph":
        """Build a graph on ``n`` nodes from an ``(m, 2)`` array of index pairs.

        Self-loops are dropped and duplicate or reversed pairs collapsed.
        """
        if labels is None:
            labels = [str(i) for i in range(n)]
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise ContractViolation("edge endpoint out of range")
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        keep = lo != hi
        key = np.unique(lo[keep] * max(n, 1) + hi[keep])
        lo, hi = key // max(n, 1), key % max(n, 1)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(indptr, dst, labels)

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    E = num_edges

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edges(self) -> np.ndarray:
        """Edge array of shape ``(E, 2)`` with ``u < v``, sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        mask = src < self.indices
        return np.column_stack([src[mask], self.indices[mask]])

    def index_of(self, label: str) -> int:
        if self._label_index is None:
            self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        return self._label_index[label]

    @property
    def label_index(self) -> dict:
        if self._label_index is None:
            self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        return self._label_index

    def to_csr(self) -> sparse.csr_matrix:
        if self._csr is None:
            data = np.ones(len(self.indices), dtype=np.int8)
            self._csr = sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))
        return self._csr

    def with_isolated(self, labels: Iterable[str]) -> "Graph":
        """Return a copy with extra degree-0 nodes appended for unseen labels."""
        new = [lab for lab in dict.fromkeys(str(x) for x in labels) if lab not in self.label_index]
        if not new:
            return self
        indptr = np.concatenate([self.indptr, np.full(len(new), self.indptr[-1])])
        return Graph(indptr, self.indices, self.labels + tuple(new))

    def __repr__(self):
        return f"Graph(n={self.n}, E={self.num_edges})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.labels == other.labels
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    __hash__ = None


def parse_edge_list(stream: TextIO | Iterable[str], source: str | None = None) -> Graph:
    """Read a whitespace-separated edge list.

    Lines starting with ``#`` or ``%`` and blank lines are skipped; columns
    past the second (weights, timestamps) are ignored.
    """
    index: dict[str, int] = {}
    labels: list[str] = []
    src: list[int] = []
    dst: list[int] = []
    for lineno, line in enumerate(stream, start=1):
        s = line.strip()
        if not s or s.startswith(_COMMENT_PREFIXES):
            continue
        parts = s.split()
        if len(parts) < 2:
            raise ParseError(f"expected two node labels, got {s!r}", lineno, source)
        a, b = parts[0], parts[1]
        ia = index.get(a)
        if ia is None:
            ia = index[a] = len(labels)
            labels.append(a)
        ib = index.get(b)
        if ib is None:
            ib = index[b] = len(labels)
            labels.append(b)
        src.append(ia)
        dst.append(ib)
    edges = np.column_stack([np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)])
    g = Graph.from_edges(len(labels), edges, labels)
    g._label_index = index
    return g


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, source=str(path))


def write_edge_list(graph: Graph, stream: TextIO) -> None:
    """Write one ``u v`` line per edge using external labels.

    Degree-0 nodes cannot be represented and are omitted.
    """
    labels = graph.labels
    for u, v in graph.edges():
        stream.write(f"{labels[u]} {labels[v]}\n")


def _as_subset(graph: Graph, subset) -> np.ndarray:
    if subset is None:
        return np.arange(graph.n, dtype=np.int64)
    arr = np.unique(np.asarray(list(subset) if not isinstance(subset, np.ndarray) else subset,
                               dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= graph.n):
        raise ContractViolation(f"node index out of range for graph with n={graph.n}")
    return arr


def induced_subgraph(graph: Graph, subset) -> tuple[Graph, np.ndarray]:
    """Subgraph on ``subset`` plus the array mapping local index -> parent index."""
    nodes = _as_subset(graph, subset)
    if nodes.size == graph.n:
        return graph, nodes
    sub = graph.to_csr()[nodes][:, nodes].tocsr()
    sub.sort_indices()
    labels = [graph.labels[i] for i in nodes]
    return Graph(sub.indptr, sub.indices, labels), nodes


def connected_components(graph: Graph, subset=None) -> list[np.ndarray]:
    """Connected components of the subgraph induced by ``subset``.

    Each component is a sorted array of parent indices; components are
    ordered by their smallest member.
    """
    nodes = _as_subset(graph, subset)
    if nodes.size == 0:
        return []
    sub, mapping = induced_subgraph(graph, nodes)
    ncomp, comp = csgraph.connected_components(sub.to_csr(), directed=False)
    if ncomp == 1:
        return [mapping]
    order = np.argsort(comp, kind="stable")
    bounds = np.cumsum(np.bincount(comp, minlength=ncomp))[:-1]
    pieces = [mapping[p] for p in np.split(order, bounds)]
    pieces.sort(key=lambda p: p[0])
    return pieces


def degree_sequence(graph: Graph) -> np.ndarray:
    return graph.degrees().copy()
