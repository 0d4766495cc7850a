"""Compare the compiled and pure-Python normal-form kernels.

Workloads are the presentation matrices the library actually reduces
(the refined scissors relations for a few q) plus random dense
matrices.  Both backends receive identical input; results are checked
entrywise before timings are reported.

The random shapes stay modest on purpose: exact reduction of a dense
random matrix swells intermediate entries far beyond the sparse 0/+-1
presentation matrices that dominate real use.

Usage: python benchmarks/bench_snf.py [--repeat N] [--seed S]
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from typing import Callable, List, Optional, Sequence, Tuple

from kmw import _snf_py
from kmw.scissors import rp_presentation

try:
    from kmw import _snf_core
except ImportError:
    _snf_core = None


def scissors_case(q: int) -> Tuple[str, int, int, List[int]]:
    labels, rows, _ = rp_presentation(q)
    flat = [entry for row in rows for entry in row]
    return f"scissors relations q={q}", len(rows), len(labels), flat


def random_case(rng: random.Random, rows: int, cols: int,
                magnitude: int) -> Tuple[str, int, int, List[int]]:
    flat = [rng.randint(-magnitude, magnitude) for _ in range(rows * cols)]
    return f"random +-{magnitude}", rows, cols, flat


def best_of(repeat: int, fn: Callable[[], object]) -> Tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def time_backends(kernel: str, rows: int, cols: int, flat: Sequence[int],
                  repeat: int) -> Tuple[Optional[float], float, str]:
    """(compiled seconds or None, pure seconds, agreement note)."""
    pure_fn = getattr(_snf_py, kernel)
    if kernel == "snf_kernel":
        args = (rows, cols, True, True)
    else:
        args = (rows, cols, True)
    pure_time, pure_result = best_of(repeat, lambda: pure_fn(list(flat), *args))
    if _snf_core is None:
        return None, pure_time, "compiled backend not built"
    core_fn = getattr(_snf_core, kernel)
    try:
        core_time, core_result = best_of(
            repeat, lambda: core_fn(list(flat), *args)
        )
    except _snf_core.Overflow:
        return None, pure_time, "64-bit overflow, pure fallback"
    note = "agree" if core_result == pure_result else "MISMATCH"
    return core_time, pure_time, note


def fmt_ms(seconds: Optional[float]) -> str:
    return "-" if seconds is None else f"{seconds * 1000.0:9.2f}"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions, best is kept (default 3)")
    parser.add_argument("--seed", type=int, default=5,
                        help="seed for the random matrices (default 5)")
    parser.add_argument("--qs", default="13,17,25",
                        help="comma-separated q values for the scissors "
                             "matrices (default 13,17,25; pure-backend cost "
                             "grows steeply, q=49 takes minutes)")
    ns = parser.parse_args(argv)

    rng = random.Random(ns.seed)
    cases = [scissors_case(int(q)) for q in ns.qs.split(",")]
    cases.append(random_case(rng, 25, 25, 9))
    cases.append(random_case(rng, 60, 20, 999))
    cases.append(random_case(rng, 12, 12, 10 ** 6))

    if _snf_core is None:
        print("note: compiled backend not built; timing pure backend only")
    header = (f"{'case':<28} {'shape':>10} {'kernel':<10} "
              f"{'compiled ms':>11} {'pure ms':>9} {'speedup':>8}  result")
    print(header, flush=True)
    print("-" * len(header), flush=True)
    mismatches = 0
    for name, rows, cols, flat in cases:
        for kernel in ("snf_kernel", "hnf_kernel"):
            core_time, pure_time, note = time_backends(
                kernel, rows, cols, flat, ns.repeat
            )
            if note == "MISMATCH":
                mismatches += 1
            speedup = ("-" if core_time is None
                       else f"{pure_time / core_time:7.1f}x")
            print(f"{name:<28} {rows:>4}x{cols:<5} {kernel[:-7]:<10} "
                  f"{fmt_ms(core_time):>11} {fmt_ms(pure_time):>9} "
                  f"{speedup:>8}  {note}", flush=True)
    if mismatches:
        print(f"{mismatches} kernel disagreements", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
