"""Compare numba-compiled kernels with their pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--seed N] [--repeat R]

Set MULTIBIN_DISABLE_NUMBA=1 to confirm the fallback path runs on its own
(both columns then time the same Python code).
"""

import argparse

from multibin.bench import run_benchmarks


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rows = run_benchmarks(args.seed, args.repeat)
    print(f"{'kernel':<22} {'backend':<8} {'compiled s':>11} {'python s':>10} {'speedup':>8}")
    for r in rows:
        print(f"{r['kernel']:<22} {r['backend']:<8} {r['compiled_s']:>11.6f} {r['python_s']:>10.6f} {r['speedup']!s:>8}")


if __name__ == "__main__":
    main()
