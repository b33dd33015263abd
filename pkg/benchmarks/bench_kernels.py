"""Compiled vs pure-Python kernel timings.

    python benchmarks/bench_kernels.py [--rows N] [--repeat R]

Each line reports the best of R runs for both backends and the speedup.
"""
import argparse
import timeit

import numpy as np

from qhe import _kernels_py, cycle, sampling

try:
    from qhe import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def cases(rows):
    e = sampling.endpoints(1, rows)
    cols = [np.ascontiguousarray(e[:, j]) for j in range(4)]
    th = np.full(rows, 3.0)
    tl = np.full(rows, 1.0)
    scalar = [((0.0, a, a + b), (0.0, c, c + d)) for a, b, c, d in e[:200]]
    return {
        "otto_quantities x200": lambda k: [k.otto_quantities(h, l, 3.0, 1.0) for h, l in scalar],
        "critical_temperature x200": lambda k: [
            k.critical_temperature(h, l, 1.0, cycle.BRACKET[0], cycle.BRACKET[1], cycle.N_SCAN, cycle.RTOL)
            for h, l in scalar
        ],
        f"net_work3_batch n={rows}": lambda k: k.net_work3_batch(*cols, th, tl),
        f"critical_ratio3_batch n={rows}": lambda k: k.critical_ratio3_batch(
            *cols, tl, cycle.BRACKET[0], cycle.BRACKET[1], cycle.N_SCAN, cycle.RTOL
        ),
    }


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'kernel':32s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, call in cases(args.rows).items():
        t_py = best(lambda: call(_kernels_py), args.repeat)
        if compiled is None:
            print(f"{name:32s} {t_py:11.4f} {'n/a':>11s} {'n/a':>8s}")
            continue
        t_c = best(lambda: call(compiled), args.repeat)
        print(f"{name:32s} {t_py:11.4f} {t_c:11.4f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
