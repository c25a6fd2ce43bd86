"""Time the numba and numpy kernels side by side.

    python3 benchmarks/bench_kernels.py [--s 4] [--repeat 5]
"""

import argparse
import time

import numpy as np

from isoprod import kernels
from isoprod.constructions import build_T1, sample_tensors
from isoprod.group import make_group


def best_of(fn, repeat):
    fn()  # warm-up, includes jit compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--s", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    g = make_group(sample_tensors(args.s, 1, rng)[0])
    x = rng.integers(0, g.order, size=10**6, dtype=np.int64)
    y = rng.integers(0, g.order, size=10**6, dtype=np.int64)
    gens = np.array([g.gen(i).code for i in range(1, g.r + 1)], dtype=np.int64)
    sph = np.array([c.code for c in build_T1(g).spherical], dtype=np.int64)

    cases = {
        "multiply (1e6 pairs)": lambda impl: impl["multiply"](x, y, g.ktab, g.s),
        "inverse (1e6)": lambda impl: impl["inverse"](x, g.ktab, g.s),
        "closure (generators)": lambda impl: impl["closure"](gens, g.ktab, g.s),
        "sigma (T1)": lambda impl: impl["sigma"](sph, g.ktab, g.s),
    }
    print(f"s={args.s}  |G|={g.order}")
    print(f"{'kernel':24s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}")
    for name, run in cases.items():
        a = np.asarray(run(kernels.IMPLEMENTATIONS["numba"]))
        b = np.asarray(run(kernels.IMPLEMENTATIONS["numpy"]))
        assert np.array_equal(a, b), name
        tn = best_of(lambda: run(kernels.IMPLEMENTATIONS["numba"]), args.repeat)
        tp = best_of(lambda: run(kernels.IMPLEMENTATIONS["numpy"]), args.repeat)
        print(f"{name:24s} {tn * 1e3:11.2f} {tp * 1e3:11.2f} {tp / tn:8.1f}")


if __name__ == "__main__":
    main()
