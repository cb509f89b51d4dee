"""Compare the compiled field kernels against the pure-NumPy fallback.

Times the primitives that dominate protocol runtime (element-wise multiply,
matrix multiply, codec encode/decode) on both backends and prints a table
with the speedup.  Usage:

    python3 benchmarks/bench_gf.py [--repeat N] [--seed S]
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from halfba import gf16
from halfba.rs import Symbol, rs_decode, rs_encode
from halfba.values import Bits


def timeit(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def build_cases(seed: int):
    rng = np.random.default_rng(seed)
    pyrng = random.Random(seed)
    a = rng.integers(0, 1 << 16, size=200_000, dtype=np.uint16)
    b = rng.integers(0, 1 << 16, size=200_000, dtype=np.uint16)
    ma = rng.integers(0, 1 << 16, size=(160, 160), dtype=np.uint16)
    mb = rng.integers(0, 1 << 16, size=(160, 160), dtype=np.uint16)
    payload = Bits.random(pyrng, 1 << 16)
    n, k, r = 64, 21, 21
    cw = rs_encode(payload, n, k)
    received = list(cw.symbols)
    for i in pyrng.sample(range(n), r):
        elems = [e ^ 0x5A5A for e in received[i].elements]
        received[i] = Symbol.from_elements(received[i].index, elems)

    cases = {
        "mul 200k": lambda: gf16.mul(a, b),
        "matmul 160x160": lambda: gf16.matmul(ma, mb),
        f"rs_encode L=65536 n={n} k={k}": lambda: rs_encode(payload, n, k),
        f"rs_decode {r} errors": lambda: rs_decode(k, r, received),
    }
    check = rs_decode(k, r, received)
    assert check == payload, "benchmark inputs must round-trip"
    return cases


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    cases = build_cases(args.seed)
    backends = ["python"]
    try:
        gf16.set_backend("cython")
        backends.append("cython")
    except ValueError:
        print("compiled backend unavailable; timing the fallback only")

    results: dict[str, dict[str, float]] = {name: {} for name in cases}
    for backend in backends:
        gf16.set_backend(backend)
        for name, fn in cases.items():
            results[name][backend] = timeit(fn, args.repeat)

    width = max(len(name) for name in results)
    header = f"{'case'.ljust(width)}  " + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for name, times in results.items():
        row = name.ljust(width) + "  " + "".join(f"{times[b] * 1e3:>10.2f}ms" for b in backends)
        if len(backends) == 2:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
