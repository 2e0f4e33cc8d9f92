"""Global min cuts of cluster subgraphs and well-connectedness classification."""
from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import mincut
from .clustering import Clustering
from .errors import ContractViolation
from .graph import Graph, connected_components, induced_subgraph

ThresholdFn = Callable[[int], float]


def log10_threshold(n_c: int) -> float:
    return math.log10(n_c)


log10_threshold.spec = "log10"


class const_threshold:
    """Fixed cut-size threshold regardless of cluster size."""

    def __init__(self, value: float):
        self.value = float(value)
        self.spec = f"const:{self.value:g}"

    def __call__(self, n_c: int) -> float:
        return self.value

    def __repr__(self):
        return f"const_threshold({self.value:g})"


def parse_threshold(spec: str) -> ThresholdFn:
    """Parse ``log10`` or ``const:<value>``."""
    if spec == "log10":
        return log10_threshold
    if spec.startswith("const:"):
        try:
            value = float(spec[len("const:"):])
        except ValueError:
            raise ValueError(f"bad threshold constant in {spec!r}") from None
        if value < 0 or not math.isfinite(value):
            raise ValueError("threshold must be a non-negative finite number")
        return const_threshold(value)
    raise ValueError(f"unknown threshold spec {spec!r} (expected 'log10' or 'const:<v>')")


def threshold_spec(fn: ThresholdFn) -> str:
    return getattr(fn, "spec", getattr(fn, "__name__", repr(fn)))


@dataclass
class CutResult:
    cut_size: int
    side_a: np.ndarray
    side_b: np.ndarray


class ConnectivityClass(str, enum.Enum):
    DISCONNECTED = "disconnected"
    POORLY_CONNECTED = "poorly_connected"
    WELL_CONNECTED = "well_connected"
    TRIVIAL_SINGLETON = "singleton"


def min_edge_cut(graph: Graph) -> CutResult:
    """Exact global minimum edge cut.

    A disconnected graph yields ``cut_size == 0`` with its first connected
    component as ``side_a``.
    """
    if graph.n < 2:
        raise ContractViolation("min_edge_cut needs a graph with at least 2 nodes")
    comps = connected_components(graph)
    everything = np.arange(graph.n, dtype=np.int64)
    if len(comps) > 1:
        side_a = comps[0]
        return CutResult(0, side_a, np.setdiff1d(everything, side_a))
    cut, mask = mincut.stoer_wagner(graph.indptr, graph.indices, 1)
    return CutResult(int(cut), everything[mask], everything[~mask])


def classify_cluster(graph: Graph, cluster, threshold: ThresholdFn = log10_threshold):
    """Return ``(ConnectivityClass, CutResult | None)`` for one cluster."""
    nodes = np.unique(np.asarray(cluster, dtype=np.int64))
    if nodes.size == 0:
        raise ContractViolation("cannot classify an empty cluster")
    if nodes.size == 1:
        return ConnectivityClass.TRIVIAL_SINGLETON, None
    sub, mapping = induced_subgraph(graph, nodes)
    cut = min_edge_cut(sub)
    cut = CutResult(cut.cut_size, mapping[cut.side_a], mapping[cut.side_b])
    if cut.cut_size == 0:
        return ConnectivityClass.DISCONNECTED, cut
    if cut.cut_size > threshold(nodes.size):
        return ConnectivityClass.WELL_CONNECTED, cut
    return ConnectivityClass.POORLY_CONNECTED, cut


_CLASSIFIED = (ConnectivityClass.DISCONNECTED, ConnectivityClass.POORLY_CONNECTED,
               ConnectivityClass.WELL_CONNECTED)


@dataclass
class ClusterRecord:
    label: int
    size: int
    cut_size: int | None
    cls: ConnectivityClass

    def to_dict(self) -> dict:
        return {"cluster": self.label, "n_c": self.size, "cut_size": self.cut_size,
                "class": self.cls.value}


@dataclass
class ConnectivityProfile:
    records: list
    threshold: str = "log10"

    @property
    def counts(self) -> dict:
        c = Counter(r.cls for r in self.records)
        return {k.value: c.get(k, 0) for k in ConnectivityClass}

    @property
    def num_classified(self) -> int:
        return sum(1 for r in self.records if r.cls in _CLASSIFIED)

    @property
    def percentages(self) -> dict:
        """Percent of non-singleton clusters in each class (0 when none)."""
        total = self.num_classified
        counts = self.counts
        return {k.value: (100.0 * counts[k.value] / total if total else 0.0) for k in _CLASSIFIED}

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "counts": self.counts,
            "num_classified": self.num_classified,
            "percentages": self.percentages,
            "clusters": [r.to_dict() for r in self.records],
        }


def _classify_chunk(graph, chunk, threshold):
    out = []
    for label, members in chunk:
        cls, cut = classify_cluster(graph, members, threshold)
        out.append(ClusterRecord(label, len(members), None if cut is None else cut.cut_size, cls))
    return out


def connectivity_profile(graph: Graph, clustering: Clustering,
                         threshold: ThresholdFn = log10_threshold, jobs: int = 1) -> ConnectivityProfile:
    """Classify every cluster; singletons are recorded but excluded from percentages."""
    if clustering.n != graph.n:
        raise ContractViolation("clustering and graph have different node counts")
    items = list(enumerate(clustering.clusters))
    from .parallel import map_chunks

    records = map_chunks(_classify_chunk, graph, items, threshold, jobs=jobs,
                         cost=lambda item: len(item[1]))
    records.sort(key=lambda r: r.label)
    return ConnectivityProfile(records, threshold_spec(threshold))
