"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--n 16 18 20] [--repeat 5]
"""

import argparse
import math
import time

import numpy as np

from qencode import kernels
from qencode.protocols import encode_protocol1
from qencode.statevec import (
    LogicalAmplitudes, StateVector, apply_1q, apply_cnot, apply_cz, apply_jx2,
)


def _state(n, rng):
    z = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(n, z / np.linalg.norm(z))


def cases(n):
    s = _state(n, np.random.default_rng(n))
    targets = list(range(1, n))
    return {
        "H on one qubit": lambda: apply_1q(s, n // 2, "H"),
        "CNOT": lambda: apply_cnot(s, 0, n - 1),
        "CZ": lambda: apply_cz(s, 1, n - 2),
        "Jx2 on n-1 qubits": lambda: apply_jx2(s, math.pi / 2, targets),
        "protocol 1": lambda: encode_protocol1(LogicalAmplitudes(0.6, 0.8j), n - 1 - (n - 1) % 2),
    }


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, nargs="+", default=[12, 16, 20])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = sorted(kernels.BACKENDS)
    print(f"{'n':>3}  {'operation':<20}" + "".join(f"{b:>12}" for b in backends) + "     speedup")
    for n in args.n:
        for name, fn in cases(n).items():
            row = {}
            for b in backends:
                previous = kernels.use_backend(b)
                try:
                    row[b] = best_of(fn, args.repeat)
                finally:
                    kernels.use_backend(previous)
            speed = row["python"] / row["cython"] if "cython" in row else float("nan")
            print(f"{n:>3}  {name:<20}" + "".join(f"{row[b] * 1e3:>10.2f}ms" for b in backends)
                  + f"   {speed:>7.2f}x")


if __name__ == "__main__":
    main()
