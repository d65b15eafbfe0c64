"""Compare the jitted kernels against the pure-numpy / pure-Python fallbacks.

Run once normally and once with DICESIM_NO_NUMBA=1 to see the full matrix,
or just run it as is: the vectorized numpy paths are importable either way,
so a single invocation already prints a meaningful comparison.

    python benchmarks/bench_kernels.py [N]
"""

import sys
import time

import numpy as np

from dicesim import kernels

N = int(sys.argv[1]) if len(sys.argv) > 1 else 2_000_000
REPEAT = 3


def best_of(fn, *args):
    fn(*args)  # warmup (compiles on first call when jitted)
    best = float("inf")
    for _ in range(REPEAT):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    print(f"numba active: {kernels.USING_NUMBA}  (set DICESIM_NO_NUMBA=1 to force the fallback)")
    print(f"N = {N}")
    words = np.arange(1, N + 1, dtype=np.uint32)

    rows = [
        ("feedback_sequence", best_of(kernels.feedback_sequence, 1, N)),
        ("feedback_sequence_py", best_of(kernels.feedback_sequence_py, 1, N)),
        ("stateless_sequence", best_of(kernels.stateless_sequence, 12345, N)),
        ("stateless_sequence_py", best_of(kernels.stateless_sequence_py, 12345, N)),
        ("xorshift_batch", best_of(kernels.xorshift_batch, words)),
        ("xorshift_batch_numpy", best_of(kernels.xorshift_batch_numpy, words)),
        ("xorshift_inverse_batch", best_of(kernels.xorshift_inverse_batch, kernels.xorshift_batch(words))),
    ]

    width = max(len(name) for name, _ in rows)
    print(f"{'kernel':<{width}}  {'best (s)':>10}  {'Mwords/s':>9}")
    for name, seconds in rows:
        rate = N / seconds / 1e6
        print(f"{name:<{width}}  {seconds:>10.4f}  {rate:>9.1f}")

    # sanity: both paths must agree bit for bit
    assert np.array_equal(kernels.feedback_sequence(1, 4096), kernels.feedback_sequence_py(1, 4096))
    assert np.array_equal(kernels.xorshift_batch(words[:4096]), kernels.xorshift_batch_numpy(words[:4096]))
    print("paths agree bit for bit")


if __name__ == "__main__":
    main()
