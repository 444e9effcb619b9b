"""Backend equivalence and selection for the hot kernels."""

from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from safety_dash import kernels
from safety_dash.geo import GeoPoint, GeoRegion, RegionKind, build_region_index

from .conftest import rect_region


def _random_points(n, seed=0):
    rng = np.random.default_rng(seed)
    lons = rng.uniform(-84.6, -84.2, n)
    lats = rng.uniform(33.5, 34.0, n)
    return lons, lats


def _index_with_holes():
    regions = [
        rect_region("npu-a", "npu", -84.50, 33.60, -84.40, 33.75),
        rect_region("npu-b", "npu", -84.40, 33.60, -84.30, 33.75),
        rect_region("npu-c", "npu", -84.45, 33.75, -84.32, 33.95),
    ]
    # concave ring plus a square hole, to exercise multi-ring regions
    outer = [
        GeoPoint(33.60, -84.30),
        GeoPoint(33.60, -84.22),
        GeoPoint(33.72, -84.22),
        GeoPoint(33.72, -84.26),
        GeoPoint(33.66, -84.26),
        GeoPoint(33.66, -84.30),
        GeoPoint(33.60, -84.30),
    ]
    hole = [
        GeoPoint(33.61, -84.25),
        GeoPoint(33.61, -84.23),
        GeoPoint(33.63, -84.23),
        GeoPoint(33.63, -84.25),
        GeoPoint(33.61, -84.25),
    ]
    regions.append(GeoRegion(id="npu-d", kind=RegionKind.NPU, name="d", rings=(tuple(outer), tuple(hole))))
    return build_region_index(regions)


def test_active_backend_is_valid():
    assert kernels.active_backend() in ("numba", "numpy")


def test_assign_backends_agree():
    index = _index_with_holes()
    lons, lats = _random_points(5000, seed=1)
    args = (lons, lats, index.vx, index.vy, index.ring_off, index.region_ring_off, index.bbox)
    got_numpy = kernels._assign_regions_numpy(*args, True)
    got_loop = kernels._assign_regions_loop(*args, True)
    assert np.array_equal(got_numpy, got_loop)
    if kernels._HAS_NUMBA:
        got_numba = kernels._assign_regions_numba(*args, True)
        assert np.array_equal(got_numpy, got_numba)


def test_assign_backends_agree_without_bbox_prefilter():
    index = _index_with_holes()
    lons, lats = _random_points(2000, seed=2)
    args = (lons, lats, index.vx, index.vy, index.ring_off, index.region_ring_off, index.bbox)
    assert np.array_equal(
        kernels._assign_regions_numpy(*args, False), kernels._assign_regions_loop(*args, False)
    )
    assert np.array_equal(
        kernels._assign_regions_numpy(*args, False), kernels._assign_regions_numpy(*args, True)
    )


def test_hex_backends_agree_bit_for_bit():
    lons, lats = _random_points(20000, seed=3)
    cos_ref = np.cos(33.749 * kernels.DEG)
    qa, ra = kernels._hex_axial_numpy(lons, lats, -84.388, 33.749, cos_ref, 150.0)
    qb, rb = kernels._hex_axial_loop(lons, lats, -84.388, 33.749, cos_ref, 150.0)
    assert np.array_equal(qa, qb)
    assert np.array_equal(ra, rb)
    if kernels._HAS_NUMBA:
        qc, rc = kernels._hex_axial_numba(lons, lats, -84.388, 33.749, cos_ref, 150.0)
        assert np.array_equal(qa, qc)
        assert np.array_equal(ra, rc)


def test_hex_dispatch_matches_direct_call():
    lons, lats = _random_points(500, seed=4)
    q, r = kernels.hex_axial(lons, lats, -84.388, 33.749, 33.749, 150.0)
    cos_ref = np.cos(33.749 * kernels.DEG)
    q2, r2 = kernels._hex_axial_numpy(lons, lats, -84.388, 33.749, cos_ref, 150.0)
    assert np.array_equal(q, q2)
    assert np.array_equal(r, r2)


def test_warmup_is_idempotent():
    kernels.warmup()
    kernels.warmup()


def _backend_in_subprocess(env_value):
    env = dict(os.environ)
    if env_value is None:
        env.pop("SAFETY_DASH_BACKEND", None)
    else:
        env["SAFETY_DASH_BACKEND"] = env_value
    code = "import safety_dash.kernels as k; print(k.active_backend())"
    proc = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True
    )
    return proc.stdout.strip(), proc.stderr


def test_env_flag_selects_numpy():
    backend, _ = _backend_in_subprocess("numpy")
    assert backend == "numpy"


def test_env_flag_selects_numba():
    pytest.importorskip("numba")
    backend, _ = _backend_in_subprocess("numba")
    assert backend == "numba"


def test_env_flag_default_prefers_numba():
    pytest.importorskip("numba")
    backend, _ = _backend_in_subprocess(None)
    assert backend == "numba"


def test_env_flag_unrecognized_warns_and_falls_back():
    env = dict(os.environ)
    env["SAFETY_DASH_BACKEND"] = "bogus"
    code = "import safety_dash.kernels as k; print(k.active_backend())"
    proc = subprocess.run(
        [sys.executable, "-W", "default", "-c", code],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert proc.stdout.strip() in ("numba", "numpy")
    assert "SAFETY_DASH_BACKEND" in proc.stderr
