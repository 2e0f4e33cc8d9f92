"""CC, WCC and CM post-processing treatments.

All three only split clusters. The parent graph is never modified: once a
cut is removed, the two shores are processed separately, and the subgraph
induced by any later piece cannot contain a removed edge, so the induced
subgraph of a piece *is* its edge-reduced working subgraph.
"""
from __future__ import annotations

import enum
import logging
import os
import shlex
import subprocess
import tempfile
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from . import mincut
from .clustering import Clustering, parse_clustering
from .connectivity import ThresholdFn, log10_threshold
from .errors import ContractViolation, ExternalCommandError, ParseError, TreatmentError
from .graph import Graph, connected_components, induced_subgraph, write_edge_list
from .parallel import map_chunks

log = logging.getLogger(__name__)

Reclusterer = Callable[[Graph], Sequence[Sequence[int]]]


class TreatmentMode(str, enum.Enum):
    CC = "cc"
    WCC = "wcc"
    CM = "cm"


@dataclass
class TreatmentResult:
    mode: TreatmentMode
    output: Clustering
    removed_edges: int = 0
    cuts_applied: int = 0
    recluster_calls: int = 0
    trace: dict = field(default_factory=dict)

    @property
    def changed(self) -> bool:
        return any(len(v) != 1 for v in self.trace.values())

    def summary(self) -> dict:
        return {
            "mode": self.mode.value,
            "removed_edges": self.removed_edges,
            "cuts_applied": self.cuts_applied,
            "recluster_calls": self.recluster_calls,
            "clusters_in": len(self.trace),
            "clusters_out": self.output.B,
            "changed": self.changed,
        }


def _components_recluster(graph: Graph):
    return connected_components(graph)


def components_reclusterer() -> Reclusterer:
    """Reclusterer returning the connected components of its input."""
    return _components_recluster


class ExternalReclusterer:
    """Run an external clustering command on each subgraph.

    ``template`` must contain ``{input}`` (edge list written for the command)
    and ``{output}`` (clustering file the command must write). Nodes the
    output omits become singletons. An edgeless subgraph is returned as
    singletons without invoking the command, since it cannot be written as
    an edge list.
    """

    def __init__(self, template: str, workdir=None, timeout: float = 3600.0):
        if "{input}" not in template or "{output}" not in template:
            raise ContractViolation("reclusterer command must contain {input} and {output}")
        self.template = template
        self.workdir = None if workdir is None else str(workdir)
        self.timeout = timeout

    def __call__(self, graph: Graph):
        if graph.num_edges == 0:
            return [[i] for i in range(graph.n)]
        if self.workdir:
            os.makedirs(self.workdir, exist_ok=True)
        with tempfile.TemporaryDirectory(prefix="wellconn-", dir=self.workdir) as tmp:
            inp = Path(tmp) / "input.edgelist"
            out = Path(tmp) / "output.clustering"
            with open(inp, "w", encoding="utf-8") as fh:
                write_edge_list(graph, fh)
            cmd = (self.template.replace("{input}", shlex.quote(str(inp)))
                   .replace("{output}", shlex.quote(str(out))))
            try:
                proc = subprocess.run(cmd, shell=True, capture_output=True, text=True,
                                      timeout=self.timeout)
            except subprocess.TimeoutExpired as exc:
                stderr = exc.stderr.decode(errors="replace") if isinstance(exc.stderr, bytes) else (exc.stderr or "")
                raise ExternalCommandError(f"reclusterer timed out after {self.timeout:g}s: {cmd}",
                                           None, stderr) from None
            if proc.returncode != 0:
                raise ExternalCommandError(
                    f"reclusterer exited with code {proc.returncode}: {cmd}\n{proc.stderr.strip()}",
                    proc.returncode, proc.stderr)
            if not out.exists():
                raise ExternalCommandError(f"reclusterer wrote no output file: {cmd}", 0, proc.stderr)
            try:
                with open(out, encoding="utf-8") as fh:
                    result = parse_clustering(fh, graph, source="reclusterer output")
            except (ParseError, UnicodeDecodeError) as exc:
                raise ExternalCommandError(f"unparseable reclusterer output: {exc}", 0, proc.stderr) from None
        return result.clusters


def external_reclusterer(command_template: str, workdir=None, timeout: float = 3600.0) -> Reclusterer:
    return ExternalReclusterer(command_template, workdir, timeout)


def _checked_partition(parts, size: int, where: str) -> list[np.ndarray]:
    seen = np.zeros(size, dtype=bool)
    out = []
    for p in parts:
        arr = np.asarray(p, dtype=np.int64).ravel()
        if arr.size == 0:
            continue
        if arr.min() < 0 or arr.max() >= size:
            raise TreatmentError(f"{where}: reclusterer returned node index out of range")
        if np.any(seen[arr]) or len(np.unique(arr)) != arr.size:
            raise TreatmentError(f"{where}: reclusterer returned overlapping clusters")
        seen[arr] = True
        out.append(np.sort(arr))
    if not seen.all():
        raise TreatmentError(f"{where}: reclusterer left {int((~seen).sum())} of {size} nodes unassigned")
    return out


def _split_components(graph: Graph, clustering: Clustering):
    """Vectorized CC split: pieces ordered by (input label, smallest member)."""
    n = graph.n
    a = clustering.assignment
    edges = graph.edges()
    keep = a[edges[:, 0]] == a[edges[:, 1]]
    e = edges[keep]
    h = sparse.coo_matrix((np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(n, n))
    ncomp, comp = csgraph.connected_components(h, directed=False)
    mins = np.full(ncomp, n, dtype=np.int64)
    np.minimum.at(mins, comp, np.arange(n, dtype=np.int64))
    order = np.lexsort((mins, a[mins]))
    groups = np.argsort(comp, kind="stable")
    bounds = np.cumsum(np.bincount(comp, minlength=ncomp))[:-1]
    members = np.split(groups, bounds)
    return [(int(a[mins[c]]), members[c]) for c in order]


def _repair(graph: Graph, members: np.ndarray, mode: TreatmentMode, threshold: ThresholdFn,
            reclusterer, origin: int):
    final = []
    removed = cuts = calls = 0
    queue = deque([members])
    while queue:
        c = queue.popleft()
        size = c.size
        if size == 1:
            final.append(c)
            continue
        sub, mapping = induced_subgraph(graph, c)
        comps = connected_components(sub)
        if len(comps) > 1:
            children = [mapping[p] for p in comps]
        elif mode is TreatmentMode.CC:
            final.append(c)
            continue
        else:
            cut, mask = mincut.stoer_wagner(sub.indptr, sub.indices, 1)
            if cut > threshold(size):
                final.append(c)
                continue
            removed += int(cut)
            cuts += 1
            sides = [mapping[mask], mapping[~mask]]
            if mode is TreatmentMode.WCC:
                children = sides
            else:
                children = []
                for side in sides:
                    calls += 1
                    where = f"input cluster {origin}, recluster call {calls} ({side.size} nodes)"
                    local, lmap = induced_subgraph(graph, side)
                    parts = _checked_partition(reclusterer(local), side.size, where)
                    children.extend(lmap[p] for p in parts)
        for child in children:
            if child.size >= size:
                raise TreatmentError(f"input cluster {origin}: piece did not shrink ({child.size} >= {size})")
            queue.append(child)
    return final, removed, cuts, calls


def _repair_chunk(graph, chunk, mode, threshold, reclusterer):
    out = []
    for key, members in chunk:
        out.append((key, *_repair(graph, members, mode, threshold, reclusterer, key[0])))
    return out


def _assemble(mode, clustering, pieces_by_key, removed=0, cuts=0, calls=0) -> TreatmentResult:
    """pieces_by_key: iterable of ((input_label, idx), [pieces]) in final order."""
    assignment = np.empty(clustering.n, dtype=np.int64)
    trace: dict = {int(k): [] for k in range(clustering.B)}
    label = 0
    for (origin, _), pieces in pieces_by_key:
        for p in pieces:
            assignment[p] = label
            trace[origin].append(label)
            label += 1
    return TreatmentResult(mode, Clustering(assignment, clustering.node_labels),
                           removed, cuts, calls, trace)


def _check_inputs(graph, clustering):
    if clustering.n != graph.n or clustering.node_labels != graph.labels:
        raise ContractViolation("clustering is not over this graph's node set")


def treat_cc(graph: Graph, clustering: Clustering) -> TreatmentResult:
    """Replace every cluster by its connected components."""
    _check_inputs(graph, clustering)
    pieces = _split_components(graph, clustering)
    counters = {}
    keyed = []
    for origin, members in pieces:
        idx = counters.get(origin, 0)
        counters[origin] = idx + 1
        keyed.append(((origin, idx), [members]))
    return _assemble(TreatmentMode.CC, clustering, keyed)


def _treat_iterative(graph, clustering, mode, threshold, reclusterer, jobs) -> TreatmentResult:
    _check_inputs(graph, clustering)
    items = []
    done = []
    counters = {}
    for origin, members in _split_components(graph, clustering):
        idx = counters.get(origin, 0)
        counters[origin] = idx + 1
        key = (origin, idx)
        if members.size == 1:
            done.append((key, [members], 0, 0, 0))
        else:
            items.append((key, members))
    results = done + map_chunks(_repair_chunk, graph, items, mode, threshold, reclusterer,
                                jobs=jobs, cost=lambda it: it[1].size ** 2 // 8)
    results.sort(key=lambda r: r[0])
    removed = sum(r[2] for r in results)
    cuts = sum(r[3] for r in results)
    calls = sum(r[4] for r in results)
    return _assemble(mode, clustering, [(r[0], r[1]) for r in results], removed, cuts, calls)


def treat_wcc(graph: Graph, clustering: Clustering, threshold: ThresholdFn = log10_threshold,
              jobs: int = 1) -> TreatmentResult:
    """Repeatedly remove minimum cuts of size <= threshold(n_c) until every
    cluster is a singleton or well-connected."""
    return _treat_iterative(graph, clustering, TreatmentMode.WCC, threshold, None, jobs)


def treat_cm(graph: Graph, clustering: Clustering, threshold: ThresholdFn = log10_threshold,
             reclusterer: Reclusterer | None = None, jobs: int = 1) -> TreatmentResult:
    """Connectivity Modifier inner loop: cut, recluster both shores, repeat.

    No small-cluster filtering is applied. With ``jobs > 1`` the reclusterer
    must be picklable.
    """
    if reclusterer is None:
        reclusterer = components_reclusterer()
    return _treat_iterative(graph, clustering, TreatmentMode.CM, threshold, reclusterer, jobs)


def treat(graph: Graph, clustering: Clustering, mode, threshold: ThresholdFn = log10_threshold,
          reclusterer: Reclusterer | None = None, jobs: int = 1) -> TreatmentResult:
    mode = TreatmentMode(mode)
    if mode is TreatmentMode.CC:
        return treat_cc(graph, clustering)
    if mode is TreatmentMode.WCC:
        return treat_wcc(graph, clustering, threshold, jobs)
    return treat_cm(graph, clustering, threshold, reclusterer, jobs)
