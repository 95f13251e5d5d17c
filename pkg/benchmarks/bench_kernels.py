"""Compiled vs numpy kernels on the vectorised hot paths.

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 5]
"""

import argparse
import math
import timeit

import numpy as np

from bisectrix.kernels import _pykernels as py

try:
    from bisectrix.kernels import _ckernels as ck
except ImportError:
    ck = None


def cases(n, rng):
    a, b, c, d = 0.2, 1.3, 2.1, 0.7
    xs = rng.uniform(-3, 5, n)
    ys = b + np.exp(rng.uniform(-6, 2, n))
    ts = b + np.exp(rng.uniform(-6, 3, n))
    th = rng.uniform(math.pi / 3, math.pi, n)
    philo = (0.0, 0.0, 1.0, 0.0, 0.5, math.sqrt(3) / 2, 1.2, 0.4)
    return {
        "dual_objective": lambda m: m.dual_objective(a, b, c, d, xs, ys),
        "lp_objective p=2": lambda m: m.lp_objective(a, b, c, d, xs, ys, py.KIND_FINITE, 2.0),
        "lp_objective p=0": lambda m: m.lp_objective(a, b, c, d, xs, ys, py.KIND_ZERO, 0.0),
        "phi_values": lambda m: m.phi_values(a, b, c, d, ts),
        "philo_lengths": lambda m: m.philo_lengths(*philo, th),
        "lp_value x1000": lambda m: [m.lp_value(a, b, c, d, 0.5, 2.0, py.KIND_INF, 0.0) for _ in range(1000)],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':<20}{'numpy ms':>12}{'cython ms':>12}{'speed-up':>10}")
    for name, fn in cases(args.n, rng).items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        if ck is None:
            print(f"{name:<20}{t_py:>12.2f}{'-':>12}{'-':>10}")
            continue
        t_c = min(timeit.repeat(lambda: fn(ck), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<20}{t_py:>12.2f}{t_c:>12.2f}{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
