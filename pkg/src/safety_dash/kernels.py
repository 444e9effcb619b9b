"""Hot numeric kernels: batch region assignment and hex binning.

Two interchangeable backends compute identical results:

* ``numba`` — ``@njit``-compiled loops (default when numba imports).
* ``numpy`` — vectorized fallback, no compilation step.

Selection is by the ``SAFETY_DASH_BACKEND`` environment variable
(``auto`` | ``numba`` | ``numpy``), read once at import. Both paths use the
same operation order on float64 so results match bit-for-bit; the test
suite cross-checks them and ``benchmarks/bench_kernels.py`` compares their
speed.

Kernels work on flat arrays only (no package types): polygon rings are
concatenated vertex arrays with ring offsets, grouped per region, plus a
per-region bounding box used as the join prefilter.
"""

from __future__ import annotations

import math
import os
import warnings

import numpy as np

EARTH_RADIUS_M = 6_371_000.0
SQRT3 = math.sqrt(3.0)
DEG = math.pi / 180.0

_requested = os.environ.get("SAFETY_DASH_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    warnings.warn(f"SAFETY_DASH_BACKEND={_requested!r} not recognized, using auto")
    _requested = "auto"

if _requested == "numpy":
    _HAS_NUMBA = False
else:
    try:
        from numba import njit

        _HAS_NUMBA = True
    except ImportError:
        _HAS_NUMBA = False
        if _requested == "numba":
            warnings.warn("SAFETY_DASH_BACKEND=numba but numba is not importable; using numpy")

_ACTIVE = "numba" if _HAS_NUMBA else "numpy"


def active_backend() -> str:
    """Name of the backend the dispatch functions will use."""
    return _ACTIVE


# ---------------------------------------------------------------------------
# region assignment
#
# Containment rule: a point is inside a region when it lies exactly on any
# ring edge or vertex, or when it is inside an odd number of the region's
# rings (even-odd crossing test). Regions are scanned in array order and the
# first containing region wins, so callers control the tie-break by ordering.


def _assign_regions_numpy(lons, lats, vx, vy, ring_off, region_ring_off, bbox, use_bbox):
    n = lons.size
    out = np.full(n, -1, dtype=np.int64)
    open_mask = np.ones(n, dtype=bool)
    nreg = region_ring_off.size - 1
    for ri in range(nreg):
        if not open_mask.any():
            break
        if use_bbox:
            cand = (
                open_mask
                & (lons >= bbox[ri, 0])
                & (lats >= bbox[ri, 1])
                & (lons <= bbox[ri, 2])
                & (lats <= bbox[ri, 3])
            )
        else:
            cand = open_mask.copy()
        idx = np.nonzero(cand)[0]
        if idx.size == 0:
            continue
        px = lons[idx]
        py = lats[idx]
        odd_rings = np.zeros(idx.size, dtype=np.int64)
        on_edge = np.zeros(idx.size, dtype=bool)
        for rj in range(region_ring_off[ri], region_ring_off[ri + 1]):
            s = ring_off[rj]
            e = ring_off[rj + 1]
            parity = np.zeros(idx.size, dtype=bool)
            for k in range(s, e - 1):
                x1 = vx[k]
                y1 = vy[k]
                x2 = vx[k + 1]
                y2 = vy[k + 1]
                cross = (x2 - x1) * (py - y1) - (px - x1) * (y2 - y1)
                on_edge |= (
                    (cross == 0.0)
                    & (px >= min(x1, x2))
                    & (px <= max(x1, x2))
                    & (py >= min(y1, y2))
                    & (py <= max(y1, y2))
                )
                if y1 != y2:
                    crosses = (y1 > py) != (y2 > py)
                    xint = (x2 - x1) * (py - y1) / (y2 - y1) + x1
                    parity ^= crosses & (px < xint)
            odd_rings += parity
        hit = idx[on_edge | (odd_rings % 2 == 1)]
        out[hit] = ri
        open_mask[hit] = False
    return out


def _assign_regions_loop(lons, lats, vx, vy, ring_off, region_ring_off, bbox, use_bbox):
    n = lons.size
    out = np.full(n, -1, dtype=np.int64)
    nreg = region_ring_off.size - 1
    for i in range(n):
        px = lons[i]
        py = lats[i]
        for ri in range(nreg):
            if use_bbox and (
                px < bbox[ri, 0] or py < bbox[ri, 1] or px > bbox[ri, 2] or py > bbox[ri, 3]
            ):
                continue
            odd_rings = 0
            on_edge = False
            for rj in range(region_ring_off[ri], region_ring_off[ri + 1]):
                s = ring_off[rj]
                e = ring_off[rj + 1]
                parity = False
                for k in range(s, e - 1):
                    x1 = vx[k]
                    y1 = vy[k]
                    x2 = vx[k + 1]
                    y2 = vy[k + 1]
                    cross = (x2 - x1) * (py - y1) - (px - x1) * (y2 - y1)
                    if cross == 0.0:
                        lo = x1 if x1 < x2 else x2
                        hi = x1 if x1 > x2 else x2
                        if lo <= px and px <= hi:
                            lo = y1 if y1 < y2 else y2
                            hi = y1 if y1 > y2 else y2
                            if lo <= py and py <= hi:
                                on_edge = True
                                break
                    if (y1 > py) != (y2 > py):
                        xint = (x2 - x1) * (py - y1) / (y2 - y1) + x1
                        if px < xint:
                            parity = not parity
                if on_edge:
                    break
                if parity:
                    odd_rings += 1
            if on_edge or odd_rings % 2 == 1:
                out[i] = ri
                break
    return out


# ---------------------------------------------------------------------------
# hex binning
#
# Pointy-top hexes on a local equirectangular projection about the grid
# origin: x = R*dlon*cos(ref_lat) east, y = R*dlat north. Axial columns q
# grow eastward and rows r grow southward, so a hex center sits at
# x = sqrt(3)*size*(q - r/2), y = -1.5*size*r. Fractional axial coordinates
# are resolved by cube rounding in the standard north-growing frame and the
# row index flipped afterwards; rounding in the reflected frame would pick
# the wrong hex near cell boundaries.


def _hex_axial_numpy(lons, lats, origin_lon, origin_lat, cos_ref, size_m):
    x = EARTH_RADIUS_M * ((lons - origin_lon) * DEG) * cos_ref
    y = EARTH_RADIUS_M * ((lats - origin_lat) * DEG)
    rf = -y / (1.5 * size_m)
    qf = x / (SQRT3 * size_m) + 0.5 * rf
    # cube rounding must run in the standard frame (r growing north): our
    # southward r is a reflection, which swaps the cube diagonals
    cx = qf
    cz = -rf
    cy = -cx - cz
    rx = np.floor(cx + 0.5)
    ry = np.floor(cy + 0.5)
    rz = np.floor(cz + 0.5)
    dx = np.abs(rx - cx)
    dy = np.abs(ry - cy)
    dz = np.abs(rz - cz)
    fix_x = (dx > dy) & (dx > dz)
    fix_z = ~fix_x & (dz > dy)
    rx = np.where(fix_x, -ry - rz, rx)
    rz = np.where(fix_z, -rx - ry, rz)
    return rx.astype(np.int64), (-rz).astype(np.int64)


def _hex_axial_loop(lons, lats, origin_lon, origin_lat, cos_ref, size_m):
    n = lons.size
    q = np.empty(n, dtype=np.int64)
    r = np.empty(n, dtype=np.int64)
    for i in range(n):
        x = EARTH_RADIUS_M * ((lons[i] - origin_lon) * DEG) * cos_ref
        y = EARTH_RADIUS_M * ((lats[i] - origin_lat) * DEG)
        rf = -y / (1.5 * size_m)
        qf = x / (SQRT3 * size_m) + 0.5 * rf
        cx = qf
        cz = -rf
        cy = -cx - cz
        rx = math.floor(cx + 0.5)
        ry = math.floor(cy + 0.5)
        rz = math.floor(cz + 0.5)
        dx = abs(rx - cx)
        dy = abs(ry - cy)
        dz = abs(rz - cz)
        if dx > dy and dx > dz:
            rx = -ry - rz
        elif dz > dy:
            rz = -rx - ry
        q[i] = rx
        r[i] = -rz
    return q, r


if _HAS_NUMBA:
    _assign_regions_numba = njit(cache=True)(_assign_regions_loop)
    _hex_axial_numba = njit(cache=True)(_hex_axial_loop)


def assign_regions(lons, lats, vx, vy, ring_off, region_ring_off, bbox, use_bbox=True):
    """Index of the first region containing each point, -1 where none does.

    ``vx``/``vy`` hold all ring vertices (closing vertex repeated), sliced by
    ``ring_off``; ``region_ring_off`` groups rings per region; ``bbox`` rows
    are (min_lon, min_lat, max_lon, max_lat). ``use_bbox=False`` disables the
    prefilter (brute-force scan, kept for the benchmark and equivalence
    tests).
    """
    lons = np.ascontiguousarray(lons, dtype=np.float64)
    lats = np.ascontiguousarray(lats, dtype=np.float64)
    if _ACTIVE == "numba":
        return _assign_regions_numba(lons, lats, vx, vy, ring_off, region_ring_off, bbox, use_bbox)
    return _assign_regions_numpy(lons, lats, vx, vy, ring_off, region_ring_off, bbox, use_bbox)


def hex_axial(lons, lats, origin_lon, origin_lat, ref_lat, size_m):
    """Axial (q, r) hex coordinates for each point (r grows southward)."""
    lons = np.ascontiguousarray(lons, dtype=np.float64)
    lats = np.ascontiguousarray(lats, dtype=np.float64)
    cos_ref = math.cos(ref_lat * DEG)
    if _ACTIVE == "numba":
        return _hex_axial_numba(lons, lats, origin_lon, origin_lat, cos_ref, size_m)
    return _hex_axial_numpy(lons, lats, origin_lon, origin_lat, cos_ref, size_m)


def warmup() -> None:
    """Force JIT compilation of the numba kernels (no-op on numpy backend)."""
    if _ACTIVE != "numba":
        return
    lons = np.array([0.0, 0.5])
    lats = np.array([0.0, 0.5])
    vx = np.array([0.0, 1.0, 1.0, 0.0, 0.0])
    vy = np.array([0.0, 0.0, 1.0, 1.0, 0.0])
    ring_off = np.array([0, 5], dtype=np.int64)
    region_ring_off = np.array([0, 1], dtype=np.int64)
    bbox = np.array([[0.0, 0.0, 1.0, 1.0]])
    _assign_regions_numba(lons, lats, vx, vy, ring_off, region_ring_off, bbox, True)
    _hex_axial_numba(lons, lats, 0.0, 0.0, 1.0, 150.0)
