import itertools
import random

import numpy as np
import pytest

from wellconn.clustering import Clustering
from wellconn.graph import Graph


def complete(n, offset=0):
    return [(offset + i, offset + j) for i, j in itertools.combinations(range(n), 2)]


def make_graph(n, edges):
    return Graph.from_edges(n, edges)


def random_graph(rng, n, p):
    return [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]


def random_instance(seed, n_max=60):
    """Random graph mixing dense planted groups and noise, plus a coarse partition."""
    rng = random.Random(seed)
    n = rng.randint(2, n_max)
    groups = rng.randint(1, max(1, n // 4))
    block = [rng.randrange(groups) for _ in range(n)]
    p_in, p_out = rng.uniform(0.2, 0.9), rng.uniform(0.0, 0.08)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < (p_in if block[u] == block[v] else p_out)]
    g = Graph.from_edges(n, edges)
    k = rng.randint(1, max(1, groups // 2 + 1))
    coarse = [b % k for b in block]
    return g, Clustering(coarse, g.labels)


@pytest.fixture
def triangle():
    return make_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def two_k5_bridge():
    return make_graph(10, complete(5) + complete(5, 5) + [(4, 5)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance criteria register a verdict here; printed at the end of the run
ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    def record(number, title, passed, detail=""):
        ACCEPTANCE[number] = (title, bool(passed), detail)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number} {verdict}: {title} ({detail})")
