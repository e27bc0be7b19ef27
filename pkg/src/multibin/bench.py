"""Time each compiled kernel against its plain-Python body on random inputs."""

from __future__ import annotations

import time

import numpy as np

from . import kernels
from ._accel import backend


def _cases(rng: np.random.Generator) -> dict:
    n = 12
    w = np.sort(rng.integers(1, 60, n))[::-1].astype(np.int64)
    conf = np.zeros((n, n), np.uint8)
    caps3 = np.array([100, 100, 100], np.int64)
    v = 14
    adj = (rng.random((v, v)) < 0.35).astype(np.uint8)
    adj = np.triu(adj, 1)
    adj = adj | adj.T
    order = np.arange(v, dtype=np.int64)
    masks = np.arange(1 << n, dtype=np.int64)
    counts = rng.integers(0, 3, (n, 3)).astype(np.int64)
    dist = rng.integers(0, 6, (8, n)).astype(np.int64)
    tsp = rng.integers(0, 5, (11, 11)).astype(np.int64)
    bb_n = 14
    bb_w = np.sort(rng.integers(10, 60, bb_n))[::-1].astype(np.int64)
    bb_conf = np.zeros((bb_n, bb_n), np.uint8)
    inc = np.arange(bb_n, dtype=np.int64)
    return {
        "bpp_branch_and_bound": (bb_w, 100, bb_conf, False, bb_n, inc, 1),
        "packable_masks": (w, caps3, conf, False, True),
        "max_profit_assign": (w, rng.integers(0, 9, n).astype(np.int64), caps3, conf, False, True),
        "color_backtrack": (adj, order, 4),
        "count_colorings": (adj[:10, :10].copy(), order[:10].copy(), 4),
        "held_karp_suffix": (tsp,),
        "subset_counts": (masks, counts),
        "subset_medians": (masks, dist),
    }


def _time(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run_benchmarks(seed: int = 0, repeat: int = 3) -> list[dict]:
    rng = np.random.default_rng(seed)
    rows = []
    for name, args in _cases(rng).items():
        kernel = getattr(kernels, name)
        kernel(*args)  # compile outside the timed runs
        fast = _time(kernel, args, repeat)
        slow = _time(kernel.py_func, args, repeat)
        rows.append({"kernel": name, "backend": backend(), "compiled_s": round(fast, 6),
                     "python_s": round(slow, 6), "speedup": round(slow / fast, 1) if fast > 0 else None})
    return rows
