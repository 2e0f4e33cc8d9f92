"""Fan per-cluster work out to worker processes.

Workers receive the graph once through the pool initializer; results come
back in submission order so merges stay deterministic.
"""
from __future__ import annotations

import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor

_GRAPH = None
# below this much total work a single in-process call is faster
MIN_PARALLEL_COST = 20_000


def _init(graph):
    global _GRAPH
    _GRAPH = graph


def _call(fn, chunk, args):
    return fn(_GRAPH, chunk, *args)


def _balanced_chunks(items, nchunks, cost):
    loads = [0] * nchunks
    chunks = [[] for _ in range(nchunks)]
    for idx in sorted(range(len(items)), key=lambda i: -cost(items[i])):
        k = loads.index(min(loads))
        chunks[k].append(idx)
        loads[k] += cost(items[idx]) + 1
    return [[items[i] for i in sorted(c)] for c in chunks if c]


def map_chunks(fn, graph, items, *args, jobs=1, cost=len):
    """Run ``fn(graph, chunk, *args)`` over chunks of ``items`` and concatenate.

    Falls back to a single in-process call when ``jobs <= 1`` or the total
    work (sum of ``cost``) is below ``MIN_PARALLEL_COST``.
    """
    items = list(items)
    if jobs <= 1 or len(items) < 2 or sum(cost(x) for x in items) < MIN_PARALLEL_COST:
        return list(fn(graph, items, *args))
    try:
        ctx = mp.get_context("fork")
    except ValueError:
        ctx = mp.get_context()
    chunks = _balanced_chunks(items, jobs * 4, cost)
    out = []
    with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx, initializer=_init,
                             initargs=(graph,)) as pool:
        for res in pool.map(_call, [fn] * len(chunks), chunks, [args] * len(chunks)):
            out.extend(res)
    return out
