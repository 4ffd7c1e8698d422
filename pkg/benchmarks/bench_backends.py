"""Compare the numba and numpy flavours of the hot kernels.

Run from the repository root::

    python3 benchmarks/bench_backends.py [--repeat 5]

Both flavours are importable whatever ``RIESZGRAD_BACKEND`` says, so one
process times them side by side.  The end-to-end rows (``N_alpha`` and the
Monte-Carlo functionals) run in a subprocess per backend because the
dispatch layer is bound at import time.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from rieszgrad import _kernels as K


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def leaf_cases():
    pts = np.random.default_rng(0).normal(size=(200_000, 3)) + np.array([3.0, 0.0, 0.0])
    # a slowly converging series and an Euler integral near the unit point
    return {
        "series_2f1 (x=0.999)": (
            lambda: K.series_2f1_numba(0.7, 1.3, 2.5, 0.999, K.MAX_TERMS),
            lambda: K.series_2f1_numpy(0.7, 1.3, 2.5, 0.999, K.MAX_TERMS),
        ),
        "euler_2f1 (y=1e-9)": (
            lambda: K.euler_2f1_numba(1.5, 0.5, 2.5, 1.0 - 1e-9, 1e-9),
            lambda: K.euler_2f1_numpy(1.5, 0.5, 2.5, 1.0 - 1e-9, 1e-9),
        ),
        "mc_integrands (2e5 pts)": (
            lambda: K.mc_integrands_numba(pts, 1.3),
            lambda: K.mc_integrands_numpy(pts, 1.3),
        ),
    }


END_TO_END = """
import time
from rieszgrad import N_alpha, BallSpec, Density, density_functionals
N_alpha(3, 1.3, 1.0, 1.0)
t0 = time.perf_counter()
for i in range(200):
    N_alpha(3, 1.3, 0.1 + 0.01 * i, 0.5)
t1 = time.perf_counter()
rho = Density.single(BallSpec(2.0, 1.0, 3))
density_functionals(rho, 1.3, "montecarlo", samples=1000)
t2 = time.perf_counter()
density_functionals(rho, 1.3, "montecarlo", samples=1_000_000)
t3 = time.perf_counter()
print(t1 - t0, t3 - t2)
"""


def end_to_end(backend):
    env = dict(os.environ, RIESZGRAD_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, check=True,
                         capture_output=True, text=True).stdout
    return [float(x) for x in out.split()]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    print(f"{'kernel':<28}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for name, (fast, slow) in leaf_cases().items():
        a = best_of(fast, args.repeat) * 1e3
        b = best_of(slow, args.repeat) * 1e3
        print(f"{name:<28}{a:>12.3f}{b:>12.3f}{b / a:>10.1f}")

    nb, npy = end_to_end("numba"), end_to_end("numpy")
    for label, a, b in zip(("N_alpha x200", "monte-carlo 1e6"), nb, npy):
        print(f"{label:<28}{a * 1e3:>12.3f}{b * 1e3:>12.3f}{b / a:>10.1f}")


if __name__ == "__main__":
    main()
