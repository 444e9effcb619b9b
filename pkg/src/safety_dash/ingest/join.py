"""Spatial join: tag located records with their containing NPU and neighborhood.

The batch path flattens regions once (bounding-box prefilter included) and
runs the kernel over all located records; results are merged back in input
order, so the join stays deterministic regardless of execution strategy.
"""

from __future__ import annotations

import dataclasses
from typing import Sequence, TypeVar

import numpy as np

from ..geo import GeoRegion, RegionKind, assign_points, build_region_index

R = TypeVar("R")


def _assign_ids(lons: np.ndarray, lats: np.ndarray, regions: Sequence[GeoRegion]) -> list[str | None]:
    if not regions:
        return [None] * lons.size
    index = build_region_index(regions)
    hits = assign_points(lons, lats, index)
    return [index.ids[h] if h >= 0 else None for h in hits]


def spatial_join(records: Sequence[R], regions: Sequence[GeoRegion]) -> tuple[list[R], int]:
    """Fill ``npu``/``neighborhood`` on located records; unlocated pass through.

    Returns (records in input order, count of located records with no NPU).
    """
    located = [(i, r) for i, r in enumerate(records) if r.location is not None]
    out = list(records)
    if not located:
        return out, 0
    lons = np.array([r.location.lon for _, r in located], dtype=np.float64)
    lats = np.array([r.location.lat for _, r in located], dtype=np.float64)
    npus = _assign_ids(lons, lats, [g for g in regions if g.kind is RegionKind.NPU])
    hoods = _assign_ids(lons, lats, [g for g in regions if g.kind is RegionKind.NEIGHBORHOOD])
    unjoined = 0
    for (i, record), npu, hood in zip(located, npus, hoods):
        if npu is None:
            unjoined += 1
        out[i] = dataclasses.replace(record, npu=npu, neighborhood=hood)
    return out, unjoined
