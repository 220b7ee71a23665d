"""Compare the compiled kernels against the pure-numpy fallback.

Run as:  python benchmarks/kernel_benchmark.py [--repeats N]

Prints per-kernel timings and speedups on workloads sized like those
the planners and the recognizer generate.
"""

import argparse
import time

import numpy as np

from goalrec.geometry import ConvexPolygon
from goalrec.kernels import _pure

try:
    from goalrec.kernels import _fast
except ImportError:
    _fast = None


def bench(fn, args_list, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best / len(args_list)


def workloads(rng):
    poly = ConvexPolygon(np.array([[40.0, 40.0], [60.0, 38.0], [65.0, 55.0],
                                   [50.0, 65.0], [38.0, 55.0]]))
    polylines = [rng.uniform(0, 100, (50, 2)) for _ in range(200)]
    points = rng.uniform(0, 100, (200, 2))
    segments = rng.uniform(0, 100, (500, 2, 2))
    nodes = rng.uniform(0, 100, (2000, 2))

    return {
        "polyline_closest_point (50 pts)": [
            (p, pl) for p, pl in zip(points, polylines)],
        "segment_intersects_polygon": [
            (s[0], s[1], poly._normals, poly._offsets) for s in segments],
        "segment_intersects_box": [
            (s[0], s[1], np.array([40.0, 40.0]), np.array([60.0, 60.0]))
            for s in segments],
        "nearest_index (2000 nodes)": [
            (nodes, p) for p in points],
        "within_radius (2000 nodes)": [
            (nodes, p, 10.0) for p in points],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    if _fast is None:
        print("compiled kernels unavailable; only timing the pure fallback")

    rng = np.random.default_rng(0)
    print(f"{'kernel':40s} {'pure':>10s} {'fast':>10s} {'speedup':>8s}")
    for name, calls in workloads(rng).items():
        fn_name = name.split(" ")[0]
        t_pure = bench(getattr(_pure, fn_name), calls, args.repeats)
        if _fast is None:
            print(f"{name:40s} {t_pure * 1e6:9.2f}u {'-':>10s} {'-':>8s}")
            continue
        t_fast = bench(getattr(_fast, fn_name), calls, args.repeats)
        print(f"{name:40s} {t_pure * 1e6:9.2f}u {t_fast * 1e6:9.2f}u "
              f"{t_pure / t_fast:7.1f}x")


if __name__ == "__main__":
    main()
