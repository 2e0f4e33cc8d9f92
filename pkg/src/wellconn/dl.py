"""Degree-corrected SBM description length, split into its four terms.

Microcanonical formulation with a uniform degree prior (all values in nats):

* ``term_A = -log p(A | b, e, k)``
  = -[sum_{r<s} log e_rs! + sum_r log e_rr!! + sum_i log k_i! - sum_r log e_r!]
* ``term_K = -log p(k | b, e)`` = sum_r log multiset(n_r, e_r)
* ``term_B = -log p(b)`` = log C(n-1, B-1) + log n! - sum_r log n_r! + log n
* ``term_E = -log p(e)`` = log multiset(B(B+1)/2, E)

with ``multiset(n, m) = C(n+m-1, m)`` and ``e_rr!! = 2^(e_rr/2) (e_rr/2)!``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .clustering import Clustering
from .errors import ContractViolation
from .graph import Graph

FORMULATION = "microcanonical DC, uniform degree prior"
TERMS = ("term_A", "term_K", "term_B", "term_E")


@dataclass(frozen=True)
class BlockMatrix:
    """Sparse symmetric block edge counts; diagonal holds twice the internal edges."""

    B: int
    rows: np.ndarray
    cols: np.ndarray
    counts: np.ndarray

    @property
    def block_degrees(self) -> np.ndarray:
        """``e_r``: total degree of each block."""
        return np.bincount(self.rows, weights=self.counts, minlength=self.B).astype(np.int64)

    def to_dense(self) -> np.ndarray:
        m = np.zeros((self.B, self.B), dtype=np.int64)
        m[self.rows, self.cols] = self.counts
        return m


def edge_count_matrix(graph: Graph, clustering: Clustering) -> BlockMatrix:
    if clustering.n != graph.n:
        raise ContractViolation("clustering does not cover the graph's nodes")
    b = clustering.assignment
    nb = clustering.B
    src = np.repeat(np.arange(graph.n, dtype=np.int64), graph.degrees())
    # every undirected edge appears twice in CSR, which yields e_rs and e_sr
    # off the diagonal and 2x the internal count on it
    cells, counts = np.unique(b[src] * max(nb, 1) + b[graph.indices], return_counts=True)
    return BlockMatrix(nb, cells // max(nb, 1), cells % max(nb, 1), counts.astype(np.int64))


def _lfact(x) -> np.ndarray:
    return gammaln(np.asarray(x, dtype=np.float64) + 1.0)


def log_binom(n, k) -> float:
    if k < 0 or k > n:
        raise ValueError("binomial out of range")
    return float(_lfact(n) - _lfact(k) - _lfact(n - k))


def log_multiset(n, m) -> float:
    """log of C(n+m-1, m); equals 0 when m == 0."""
    if m == 0:
        return 0.0
    return log_binom(n + m - 1, m)


def term_E(B: int, E: int) -> float:
    return log_multiset(B * (B + 1) // 2, E)


@dataclass
class DLBreakdown:
    term_A: float
    term_K: float
    term_B: float
    term_E: float
    B: int
    n: int
    E: int

    @property
    def total(self) -> float:
        return self.term_A + self.term_K + self.term_B + self.term_E

    @property
    def total_without_term_E(self) -> float:
        return self.term_A + self.term_K + self.term_B

    def to_dict(self) -> dict:
        return {
            "term_A": self.term_A, "term_K": self.term_K, "term_B": self.term_B,
            "term_E": self.term_E, "total": self.total,
            "total_without_term_E": self.total_without_term_E,
            "B": self.B, "n": self.n, "E": self.E, "formulation": FORMULATION,
        }


def dl_dc(graph: Graph, clustering: Clustering) -> DLBreakdown:
    """Four-term degree-corrected description length of ``clustering``."""
    em = edge_count_matrix(graph, clustering)
    n, E, B = graph.n, graph.num_edges, clustering.B
    k = graph.degrees()
    er = em.block_degrees
    nr = clustering.sizes()

    off = em.rows < em.cols
    diag = em.rows == em.cols
    half = em.counts[diag] // 2
    log_p_a = (np.sum(_lfact(em.counts[off]))
               + np.sum(half * math.log(2.0) + _lfact(half))
               + np.sum(_lfact(k))
               - np.sum(_lfact(er)))
    t_a = max(float(-log_p_a), 0.0)

    t_k = math.fsum(log_multiset(int(nr_), int(er_)) for nr_, er_ in zip(nr, er))

    if n == 0:
        t_b = 0.0
    else:
        t_b = (log_binom(n - 1, B - 1) + float(_lfact(n)) - float(np.sum(_lfact(nr)))
               + math.log(n))
    t_b = max(t_b, 0.0)
    return DLBreakdown(t_a, t_k, t_b, term_E(B, E), B, n, E)


@dataclass
class DLComparison:
    untreated: DLBreakdown
    treated: DLBreakdown

    ROWS = TERMS + ("total", "total_without_term_E")

    def value(self, which: str, row: str) -> float:
        return getattr(getattr(self, which), row)

    def ratio(self, row: str):
        den = self.value("untreated", row)
        return self.value("treated", row) / den if den != 0 else None

    def winner(self, row: str) -> str:
        u, t = self.value("untreated", row), self.value("treated", row)
        if u < t:
            return "untreated"
        if t < u:
            return "treated"
        return "tie"

    def to_dict(self) -> dict:
        return {
            "formulation": FORMULATION,
            "rows": [
                {"quantity": r, "untreated": self.value("untreated", r),
                 "treated": self.value("treated", r), "ratio": self.ratio(r),
                 "preferred": self.winner(r)}
                for r in self.ROWS
            ],
            "untreated": self.untreated.to_dict(),
            "treated": self.treated.to_dict(),
        }

    def table(self) -> str:
        names = {"term_A": "-log p(A|b,e,k)", "term_K": "-log p(k|b,e)", "term_B": "-log p(b)",
                 "term_E": "-log p(e)", "total": "DL(A,b)", "total_without_term_E": "DL without -log p(e)"}
        lines = [f"{'Quantity':<22}{'untreated':>16}{'treated':>16}{'ratio':>9}  preferred",
                 "-" * 72]
        for r in self.ROWS:
            ratio = self.ratio(r)
            rs = f"{ratio:9.2f}" if ratio is not None else f"{'n/a':>9}"
            lines.append(f"{names[r]:<22}{self.value('untreated', r):16.2f}"
                         f"{self.value('treated', r):16.2f}{rs}  {self.winner(r)}")
            if r == "term_E":
                lines.append("-" * 72)
        lines.append(f"({FORMULATION}; nats)")
        return "\n".join(lines)


def compare_dl(graph: Graph, untreated: Clustering, treated: Clustering) -> DLComparison:
    return DLComparison(dl_dc(graph, untreated), dl_dc(graph, treated))
