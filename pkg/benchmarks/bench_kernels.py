"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--sizes 1024,4096] [--p 0.05] [--repeat 3] [--csv out.csv]
"""

import argparse
import csv
import sys
import timeit

import numpy as np

from cliquemis import _kernels_py
from cliquemis.graph import gnp_random
from cliquemis.greedy import uniform_order

try:
    from cliquemis import _kernels
except ImportError:
    _kernels = None


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def _same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="512,1024,2048,4096")
    ap.add_argument("--p", type=float, default=0.05)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--csv")
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1

    rows = []
    for n in [int(x) for x in args.sizes.split(",")]:
        g = gnp_random(n, args.p, 0)
        perm = uniform_order(n, 1).perm
        mask = np.random.default_rng(2).random(n) < 0.5
        cases = {
            "greedy_trace": lambda mod: mod.greedy_trace(g.indptr, g.indices, perm),
            "residual_degrees": lambda mod: mod.residual_degrees(g.indptr, g.indices, mask),
        }
        for name, call in cases.items():
            fast = call(_kernels)
            slow = call(_kernels_py)
            if not _same(fast, slow):
                print(f"backends disagree on {name} at n={n}", file=sys.stderr)
                return 1
            t_c = bench(lambda: call(_kernels), args.repeat)
            t_py = bench(lambda: call(_kernels_py), args.repeat)
            rows.append({"kernel": name, "n": n, "m": g.edge_count, "cython_s": t_c, "python_s": t_py, "speedup": t_py / t_c})

    print(f"{'kernel':<18}{'n':>7}{'m':>10}{'cython s':>12}{'python s':>12}{'speedup':>9}")
    for r in rows:
        print(f"{r['kernel']:<18}{r['n']:>7}{r['m']:>10}{r['cython_s']:>12.5f}{r['python_s']:>12.5f}{r['speedup']:>8.1f}x")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
