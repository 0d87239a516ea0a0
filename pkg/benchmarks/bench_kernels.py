"""Compare the compiled and pure-Python integer kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Reports the best wall time of each workload on each available backend.
"""

import argparse
import itertools
import timeit

import numpy as np

from grasstensor import kernels
from grasstensor.geometry import DimensionInvariants, canonical_setup, random_setup
from grasstensor.grassmann import build
from grasstensor.mlrank import oracle_frank


def workloads(rng):
    dets = [rng.integers(-9, 10, size=(8, 8)) for _ in range(200)]
    wide = rng.integers(-9, 10, size=(10, 16))
    cols = np.array(list(itertools.combinations(range(16), 10)))
    small_ranks = [rng.integers(-2, 3, size=(10, 14)) for _ in range(200)]
    # Bareiss growth overflows int64 here, so both backends end up in Python
    ranks = [rng.integers(-3, 4, size=(40, 60)) for _ in range(5)]
    # a random (non-canonical) setup forces the minor-based build
    cams = random_setup(7, (6, 4, 4), (3, 3, 2), rng)
    canon = canonical_setup(DimensionInvariants.from_dims(9, (3, 8, 8), (3, 3, 4)))
    return {
        "det 200 x (8x8)": lambda: [kernels.det_int(m) for m in dets],
        f"minors {len(cols)} x (10x10)": lambda: kernels.minors_int(wide, cols),
        "rank 200 x (10x14)": lambda: [kernels.rank_int(m) for m in small_ranks],
        "rank 5 x (40x60), overflows": lambda: [kernels.rank_int(m) for m in ranks],
        "build+oracle k=7 random": lambda: oracle_frank(build(cams)),
        "oracle k=9 (4x84x126)": lambda: oracle_frank(build(canon)),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"] + (["compiled"] if kernels.compiled_available() else [])
    jobs = workloads(np.random.default_rng(0))
    print(f"{'workload':32s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, fn in jobs.items():
        times = []
        for b in backends:
            with kernels.use_backend(b):
                fn()  # warm up
                times.append(min(timeit.repeat(fn, number=1, repeat=args.repeat)))
        row = f"{name:32s}" + "".join(f"{t:11.4f}s" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
