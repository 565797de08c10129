"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from painsense._kernels import available_backends, get_backend


def cases(rng):
    windows = rng.integers(0, 1024, size=(10_000, 32)).astype(np.float64)
    single = windows[0].copy()
    signal = rng.integers(0, 1024, size=100_000).astype(np.float64)
    codes = rng.integers(0, 5, size=(5_000, 4)).astype(np.int64)
    return {
        "trimmed_mean_rows 10000x32": lambda k: k.trimmed_mean_rows(windows),
        "trimmed_mean x1000": lambda k: [k.trimmed_mean(single) for _ in range(1000)],
        "moving_average n=1e5 w=9": lambda k: k.moving_average(signal, 9),
        "splitmix64_block n=1e6": lambda k: k.splitmix64_block(2024, 1_000_000),
        "partition_codes 5000x4": lambda k: k.partition_codes(codes),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = {name: get_backend(name) for name in available_backends()}
    rng = np.random.default_rng(0)
    header = f"{'kernel':<28}" + "".join(f"{name:>12}" for name in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for label, fn in cases(rng).items():
        best = {name: min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) for name, k in backends.items()}
        row = f"{label:<28}" + "".join(f"{best[n] * 1e3:>10.3f}ms" for n in backends)
        if "cython" in best:
            row += f"{best['python'] / best['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
