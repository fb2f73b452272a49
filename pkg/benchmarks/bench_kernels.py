#!/usr/bin/env python3
"""Benchmark: compiled enumeration kernel vs the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

from toricount.counting import count_points_schedule
from toricount.fan import height_system
from toricount.kernels import HAVE_COMPILED
from toricount.presets import preset


def run(name, schedule, force_python, **kw):
    pair, coeffs, _ = preset(name, **kw)
    h = height_system(pair.fan, coeffs)
    t0 = time.perf_counter()
    counts, _ = count_points_schedule(pair, h, 1, schedule, force_python=force_python)
    return counts, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller bounds")
    args = ap.parse_args()

    cases = [
        ("p2-full", {}, [60 if args.quick else 150]),
        ("p2-weak-campana-2", {}, [60 if args.quick else 150]),
        ("p1-campana-2-2", {}, [10 ** 4 if args.quick else 10 ** 5]),
        ("p1xp1-full", {}, [40 if args.quick else 100]),
    ]
    print(f"compiled kernel available: {HAVE_COMPILED}")
    print(f"{'case':28s} {'B':>8s} {'N':>12s} {'python_s':>9s} {'compiled_s':>10s} {'speedup':>8s}")
    for name, kw, schedule in cases:
        slow, t_py = run(name, schedule, True, **kw)
        if HAVE_COMPILED:
            fast, t_c = run(name, schedule, False, **kw)
            assert fast == slow, f"kernel mismatch on {name}"
            speedup = t_py / t_c if t_c > 0 else float("inf")
            print(
                f"{name:28s} {schedule[-1]:>8d} {slow[-1]:>12d} "
                f"{t_py:>9.3f} {t_c:>10.3f} {speedup:>7.1f}x"
            )
        else:
            print(f"{name:28s} {schedule[-1]:>8d} {slow[-1]:>12d} {t_py:>9.3f} {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
