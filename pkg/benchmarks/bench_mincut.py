"""Compare the compiled and pure-Python min-cut kernels.

    python benchmarks/bench_mincut.py [--repeat 3] [--sizes 50,200,1000,5000]

Each graph is one dense random cluster; both kernels must agree on the cut
and on the returned side.
"""
import argparse
import time

import numpy as np

from wellconn import mincut
from wellconn.synth import planted_partition


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sizes", default="50,200,1000,5000")
    ap.add_argument("--degree", type=float, default=20.0, help="expected average degree")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if mincut.compiled_stoer_wagner is None:
        print("compiled kernel not available; timing the Python kernel only")
    print(f"{'n':>7}{'E':>9}{'cut':>6}{'python s':>11}{'compiled s':>12}{'speedup':>9}")
    for n in (int(x) for x in args.sizes.split(",")):
        p = min(1.0, args.degree / max(n - 1, 1))
        g, _ = planted_partition([n], p, 0.0, seed=args.seed)
        t_py, (cut, side) = best_time(lambda: mincut.python_stoer_wagner(g.indptr, g.indices), args.repeat)
        if mincut.compiled_stoer_wagner is not None:
            t_c, (cut_c, side_c) = best_time(
                lambda: mincut.compiled_stoer_wagner(g.indptr, g.indices), args.repeat)
            assert cut == cut_c and np.array_equal(side, side_c), "kernels disagree"
            print(f"{n:>7}{g.num_edges:>9}{cut:>6}{t_py:>11.4f}{t_c:>12.4f}{t_py / t_c:>8.1f}x")
        else:
            print(f"{n:>7}{g.num_edges:>9}{cut:>6}{t_py:>11.4f}{'-':>12}{'-':>9}")


if __name__ == "__main__":
    main()
