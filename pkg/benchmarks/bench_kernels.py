"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The first numba call compiles; it is run once before timing.
"""
import argparse
import itertools
import math
import timeit

import numpy as np

from stconn import _accel
from stconn.bounds import _edge_perm_maps
from stconn.graph import all_assignments


def connectivity_case(n=9, batch=20000, seed=0):
    pairs = np.array(list(itertools.combinations(range(n), 2)))
    present = np.random.default_rng(seed).random((batch, len(pairs))) < 0.3
    return (n, pairs[:, 0], pairs[:, 1], present), f"component_labels n={n} batch={batch}"


def orbit_case(n=6):
    maps = _edge_perm_maps(n, list(itertools.permutations(range(n))))
    bits = all_assignments(n * (n - 1) // 2)
    return (bits, maps), f"min_orbit_codes n={n} rows={len(bits)} perms={math.factorial(n)}"


def bench(fn, args, backend, repeat):
    fn(*args, backend=backend)
    return min(timeit.repeat(lambda: fn(*args, backend=backend), number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args()
    backends = ["numpy"] + (["numba"] if _accel.HAVE_NUMBA else [])
    for fn, (args, label) in ((_accel.component_labels, connectivity_case()),
                              (_accel.min_orbit_codes, orbit_case())):
        times = {b: bench(fn, args, b, opts.repeat) for b in backends}
        cells = "  ".join(f"{b} {t * 1e3:8.1f} ms" for b, t in times.items())
        speedup = f"  x{times['numpy'] / times['numba']:.1f}" if "numba" in times else ""
        print(f"{label:<48} {cells}{speedup}")


if __name__ == "__main__":
    main()
