"""Time each hot kernel on every available backend.

    python3 benchmarks/bench_kernels.py [--points N] [--grid G] [--repeat R]

Prints one row per (kernel, backend) with the best wall time and the speedup
of the compiled core over the pure-Python fallback. Outputs are checked for
bit-identity between backends before timing.
"""
import argparse
import timeit

import numpy as np

from fibgeom.ifs import sierpinski_system
from fibgeom.kernels import available_backends


def workloads(n_points, g):
    A, b = sierpinski_system()._stacked()
    p = np.full(3, 1 / 3)
    idx = np.random.default_rng(0).integers(0, 3, size=n_points + 64).astype(np.int64)
    box = (0.0, 0.0, 1.0, 1.0)
    pts = np.random.default_rng(1).random((n_points, 2))
    mass = np.random.default_rng(2).random((g, g))
    mass /= mass.sum()
    return {
        "chaos_iterate": lambda k: k.chaos_iterate(A, b, idx, 0.0, 0.0, 64),
        "histogram2d": lambda k: k.histogram2d(pts, *box, g),
        "pushforward": lambda k: k.pushforward(mass, A, b, p, *box),
        "count_no_adjacent_ones": lambda k: k.count_no_adjacent_ones(20),
    }


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return a.tobytes() == np.asarray(b).tobytes()
    return a == b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--grid", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(sorted(backends))}; points={args.points} grid={args.grid}")
    print(f"{'kernel':<24}{'backend':<10}{'best (ms)':>12}{'speedup':>10}")
    for name, work in workloads(args.points, args.grid).items():
        results = {k: work(mod) for k, mod in backends.items()}
        if "cython" in results and not same(results["cython"], results["python"]):
            raise SystemExit(f"{name}: backends disagree")
        times = {
            k: min(timeit.repeat(lambda: work(mod), number=1, repeat=args.repeat)) for k, mod in sorted(backends.items())
        }
        for k, t in times.items():
            speed = f"{times['python'] / t:.1f}x" if k != "python" else ""
            print(f"{name:<24}{k:<10}{1e3 * t:>12.2f}{speed:>10}")


if __name__ == "__main__":
    main()
