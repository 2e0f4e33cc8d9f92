"""Partition agreement: ARI, NMI and AMI (arithmetic-mean normalization, nats)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .clustering import Clustering
from .errors import ContractViolation


@dataclass(frozen=True)
class ContingencyTable:
    """Sparse contingency table: non-zero cells ``(rows[k], cols[k]) -> counts[k]``."""

    rows: np.ndarray
    cols: np.ndarray
    counts: np.ndarray
    a: np.ndarray  # row sums
    b: np.ndarray  # column sums

    @property
    def N(self) -> int:
        return int(self.a.sum())

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(self.cols, self.rows, self.counts, self.b, self.a)

    def to_dense(self) -> np.ndarray:
        m = np.zeros((len(self.a), len(self.b)), dtype=np.int64)
        m[self.rows, self.cols] = self.counts
        return m


def contingency(u: Clustering, v: Clustering) -> ContingencyTable:
    if u.node_labels != v.node_labels:
        raise ContractViolation("clusterings are over different node universes")
    return contingency_from_labels(u.assignment, v.assignment)


def contingency_from_labels(u, v) -> ContingencyTable:
    """Contingency table of two label vectors (labels need not be dense)."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ContractViolation("label vectors differ in length")
    _, ui = np.unique(u, return_inverse=True)
    _, vi = np.unique(v, return_inverse=True)
    ui = ui.ravel().astype(np.int64)
    vi = vi.ravel().astype(np.int64)
    nb = int(vi.max()) + 1 if vi.size else 0
    cells, counts = np.unique(ui * max(nb, 1) + vi, return_counts=True)
    rows, cols = cells // max(nb, 1), cells % max(nb, 1)
    a = np.bincount(ui, minlength=int(ui.max()) + 1 if ui.size else 0)
    b = np.bincount(vi, minlength=nb)
    return ContingencyTable(rows, cols, counts.astype(np.int64), a.astype(np.int64), b.astype(np.int64))


def _is_identity(t: ContingencyTable) -> bool:
    # identical up to relabeling <=> every row and column has exactly one non-zero cell
    return len(t.counts) == len(t.a) == len(t.b)


def _comb2_sum(x) -> int:
    return sum(int(k) * (int(k) - 1) // 2 for k in x)


def ari(t: ContingencyTable) -> float:
    n = t.N
    if n < 2:
        raise ContractViolation("ARI needs at least two nodes")
    total = n * (n - 1) // 2
    index = _comb2_sum(t.counts)
    sa = _comb2_sum(t.a)
    sb = _comb2_sum(t.b)
    # exact integer form of (index - expected) / (max - expected), scaled by 2 * C(N,2)
    num = 2 * (index * total - sa * sb)
    den = (sa + sb) * total - 2 * sa * sb
    if den == 0:
        return 1.0 if num == 0 else 0.0
    return num / den


def _entropy(sizes, n) -> float:
    p = np.asarray(sizes, dtype=np.float64)
    p = p[p > 0] / n
    return float(-np.sum(p * np.log(p)))


def mutual_information(t: ContingencyTable) -> float:
    n = t.N
    if n == 0:
        return 0.0
    nij = t.counts.astype(np.float64)
    ai = t.a[t.rows].astype(np.float64)
    bj = t.b[t.cols].astype(np.float64)
    mi = float(np.sum(nij / n * (np.log(n * nij) - np.log(ai * bj))))
    return max(mi, 0.0)


def nmi(t: ContingencyTable) -> float:
    n = t.N
    if n < 1:
        raise ContractViolation("NMI needs at least one node")
    if _is_identity(t):
        return 1.0
    hu, hv = _entropy(t.a, n), _entropy(t.b, n)
    if hu == 0.0 or hv == 0.0:
        return 0.0
    return min(mutual_information(t) / ((hu + hv) / 2.0), 1.0)


def hypergeometric_weights(a: int, b: int, n: int):
    """Feasible cell counts and their probabilities for row sum ``a``, column sum ``b``."""
    lo = max(0, a + b - n)
    hi = min(a, b)
    k = np.arange(lo, hi + 1, dtype=np.float64)
    logp = (gammaln(a + 1) + gammaln(b + 1) + gammaln(n - a + 1) + gammaln(n - b + 1)
            - gammaln(n + 1) - gammaln(k + 1) - gammaln(a - k + 1) - gammaln(b - k + 1)
            - gammaln(n - a - b + k + 1))
    return k, np.exp(logp)


def expected_mutual_information(t: ContingencyTable) -> float:
    """E[MI] under random relabeling with fixed cluster sizes.

    Cells depend only on (row sum, column sum), so the sum runs over
    distinct size pairs weighted by their multiplicities.
    """
    n = t.N
    if len(t.a) <= 1 or len(t.b) <= 1:
        return 0.0
    av, ac = np.unique(t.a, return_counts=True)
    bv, bc = np.unique(t.b, return_counts=True)
    terms = []
    for a, ca in zip(av.tolist(), ac.tolist()):
        for b, cb in zip(bv.tolist(), bc.tolist()):
            k, w = hypergeometric_weights(a, b, n)
            k, w = k[k > 0], w[k > 0]
            if k.size == 0:
                continue
            cell = np.sum(k / n * (np.log(n * k) - math.log(a * b)) * w)
            terms.append(ca * cb * float(cell))
    return math.fsum(terms)


def ami(t: ContingencyTable) -> float:
    n = t.N
    if n < 2:
        raise ContractViolation("AMI needs at least two nodes")
    if _is_identity(t):
        return 1.0
    mi = mutual_information(t)
    emi = expected_mutual_information(t)
    norm = (_entropy(t.a, n) + _entropy(t.b, n)) / 2.0
    den = norm - emi
    if den == 0.0:
        return 0.0
    return (mi - emi) / den


def compare(u: Clustering, v: Clustering) -> dict:
    t = contingency(u, v)
    return {"nmi": nmi(t), "ari": ari(t), "ami": ami(t), "N": t.N, "B_u": len(t.a), "B_v": len(t.b)}
