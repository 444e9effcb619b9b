"""Compare the numba and numpy kernel backends on synthetic workloads.

Run from the repository root:

    python3 benchmarks/bench_kernels.py --points 1000000 --repeat 5

The script re-executes itself once per backend with SAFETY_DASH_BACKEND set
in the child environment, so each measurement goes through the public
dispatch exactly as a user's process would. The numba timings exclude
compilation; a warmup call runs before the clock starts.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

LON_RANGE = (-84.60, -84.23)
LAT_RANGE = (33.58, 33.95)


def _grid_index():
    from safety_dash.geo import GeoPoint, GeoRegion, RegionKind, build_region_index

    regions = []
    for row in range(5):
        for col in range(6):
            lon_w = -84.55 + col * 0.045
            lat_s = 33.62 + row * 0.056
            ring = (
                GeoPoint(lat_s, lon_w),
                GeoPoint(lat_s, lon_w + 0.045),
                GeoPoint(lat_s + 0.056, lon_w + 0.045),
                GeoPoint(lat_s + 0.056, lon_w),
                GeoPoint(lat_s, lon_w),
            )
            regions.append(GeoRegion(f"cell-{row}{col}", RegionKind.NPU, f"{row}{col}", (ring,)))
    return build_region_index(regions)


def _measure(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def run_measurements(points: int, repeat: int) -> dict:
    from safety_dash import kernels
    from safety_dash.geo import assign_points

    index = _grid_index()
    rng = np.random.default_rng(7)
    lons = rng.uniform(*LON_RANGE, points)
    lats = rng.uniform(*LAT_RANGE, points)

    kernels.warmup()
    assign_s = _measure(lambda: assign_points(lons, lats, index), repeat)
    hex_s = _measure(
        lambda: kernels.hex_axial(lons, lats, -84.39, 33.76, 33.76, 150.0), repeat
    )
    return {
        "backend": kernels.active_backend(),
        "points": points,
        "assign_s": assign_s,
        "hex_s": hex_s,
    }


def _child_run(backend: str, points: int, repeat: int) -> dict | None:
    env = dict(os.environ, SAFETY_DASH_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--child",
         "--points", str(points), "--repeat", str(repeat)],
        env=env, capture_output=True, text=True,
    )
    if proc.returncode != 0:
        print(f"{backend} run failed:\n{proc.stderr}", file=sys.stderr)
        return None
    result = json.loads(proc.stdout)
    if result["backend"] != backend:
        print(f"{backend} backend unavailable (got {result['backend']}), skipping")
        return None
    return result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args(argv)

    if args.child:
        print(json.dumps(run_measurements(args.points, args.repeat)))
        return 0

    results = [r for r in (_child_run(b, args.points, args.repeat) for b in ("numba", "numpy")) if r]
    if not results:
        print("no backend produced a measurement", file=sys.stderr)
        return 1

    mpts = args.points / 1e6
    print(f"{args.points:,} points, 30 region polygons, best of {args.repeat}\n")
    print(f"{'kernel':<16} {'backend':<8} {'best s':>8} {'Mpts/s':>8}")
    for result in results:
        for kernel, key in (("assign_regions", "assign_s"), ("hex_axial", "hex_s")):
            seconds = result[key]
            print(f"{kernel:<16} {result['backend']:<8} {seconds:>8.4f} {mpts / seconds:>8.1f}")

    if len(results) == 2:
        by_backend = {r["backend"]: r for r in results}
        print()
        for kernel, key in (("assign_regions", "assign_s"), ("hex_axial", "hex_s")):
            ratio = by_backend["numpy"][key] / by_backend["numba"][key]
            print(f"{kernel}: numba is {ratio:.2f}x the numpy fallback")
    return 0


if __name__ == "__main__":
    sys.exit(main())
