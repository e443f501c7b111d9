"""Time each kernel under the numba and numpy backends.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Every kernel is called once untimed before timing (this is where numba
compiles); that first pass is reported as its own row.  Workloads are the basis families the library actually feeds the
kernels: uniform and graphic matroids, their basis graphs and k-base graphs.
"""

import argparse
import json
import time
import timeit

import numpy as np

from matx import graphic, kernels, uniform
from matx.graphs import csr, k_base_graph


def workloads():
    K5 = graphic(5, [(a, b) for a in range(1, 6) for b in range(a + 1, 6)])
    U412 = uniform(4, 12)
    U618 = uniform(6, 18)
    big = k_base_graph(uniform(2, 10), 5)      # 945 vertices, 189k edges
    indptr, indices = csr(len(big.vertices), big.edges)
    sample = np.arange(0, len(big.vertices), max(1, len(big.vertices) // 64))
    masks = np.arange(1 << 18, dtype=np.uint64)
    return [
        ("rank_table U(4,12)", lambda: kernels.rank_table(U412.array, U412.n)),
        ("rank_table K5", lambda: kernels.rank_table(K5.array, K5.n)),
        ("rank_many U(6,18) x 2^18", lambda: kernels.rank_many(U618.array[:2000], masks)),
        ("exchange_violation U(4,12)",
         lambda: kernels.exchange_violation(U412.array, U412.sorted_ints, U412.n, True)),
        ("basis_edges U(4,12)",
         lambda: kernels.basis_edges(U412.array, U412.sorted_ints, U412.sorted_to_canon, U412.n)),
        (f"component_labels {len(big.vertices)} vertices",
         lambda: kernels.component_labels(len(big.vertices), big.edges)),
        (f"max_eccentricity {len(sample)} sources",
         lambda: kernels.max_eccentricity(indptr, indices, sample)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", default=None, help="write results to this file")
    args = ap.parse_args(argv)

    names = ["numpy"] + (["numba"] if kernels._numba_ns is not None else [])
    rows = {}
    jobs = workloads()
    for name in names:
        with kernels.using(name):
            t0 = time.perf_counter()
            for _, fn in jobs:          # first call compiles under numba
                fn()
            warm = time.perf_counter() - t0
            for label, fn in jobs:
                best = min(timeit.repeat(fn, number=1, repeat=args.repeat))
                rows.setdefault(label, {})[name] = best
            rows.setdefault("(first call of every kernel)", {})[name] = warm

    width = max(map(len, rows))
    print(f"{'kernel':<{width}}  " + "  ".join(f"{n:>10}" for n in names) +
          ("  speedup" if len(names) == 2 else ""))
    for label, t in rows.items():
        line = f"{label:<{width}}  " + "  ".join(f"{t[n] * 1e3:9.2f}ms" for n in names)
        if len(names) == 2:
            line += f"  {t['numpy'] / t['numba']:6.1f}x"
        print(line)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
