"""Compare the compiled and pure-Python optimization kernels.

Usage::

    python benchmarks/bench_kernels.py [--repeat N]

Both backends get identical seeded starting points; the table reports the
best wall time per call and the largest difference in the optimum found.
"""
import argparse
import math
import time

import numpy as np

from bellscatter import _kernels_py as py
from bellscatter.biphoton import canonical_state

try:
    from bellscatter import _ckernels as cy
except ImportError:
    cy = None


def best_time(f, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        f()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads(rng):
    a = canonical_state(0.6).a
    chsh_starts = rng.uniform(0, 2 * math.pi, (16, 8))
    t1 = np.array([[0.9, 0.2j], [0.1, 0.5]])
    t2 = np.array([[0.7, 0.0], [0.3, 0.6]])
    d = (canonical_state(0.5).a[0, 0].real, canonical_state(0.5).a[1, 1].real)
    pout_starts = rng.uniform(0, 2 * math.pi, (32, 6))
    return {
        "chsh_max (16 restarts)": lambda k: k.maximize_chsh(a, chsh_starts),
        "optimize_incident (32 restarts)": lambda k: k.maximize_pout(t1, d, t2.T, pout_starts),
        "chsh objective x1000": lambda k: [k.chsh_value(a, chsh_starts[0]) for _ in range(1000)],
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if cy is None:
        print("compiled kernels not built; only the Python backend is available")
    rng = np.random.default_rng(0)
    print(f"{'workload':34s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, f in workloads(rng).items():
        tp = best_time(lambda: f(py), args.repeat)
        if cy is None:
            print(f"{name:34s} {tp:11.4f}")
            continue
        tc = best_time(lambda: f(cy), args.repeat)
        rp, rc = f(py), f(cy)
        diff = float(np.max(np.abs(np.asarray(rp[1]) - np.asarray(rc[1])))) \
            if isinstance(rp, tuple) else abs(rp[0] - rc[0])
        print(f"{name:34s} {tp:11.4f} {tc:11.4f} {tp / tc:7.1f}x {diff:11.1e}")


if __name__ == "__main__":
    main()
