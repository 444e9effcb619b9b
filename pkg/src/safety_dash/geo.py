"""Planar geometry: polygon containment, region assignment, hex grid index.

Containment uses the even-odd rule per ring (a point inside an odd number
of a region's rings is inside, which supports holes) with boundary-inclusive
semantics: a point exactly on an edge or vertex counts as inside.

The hex grid is pointy-top on a local equirectangular projection about the
grid origin (adequate at city scale). Axial q grows eastward, r southward.
Batch paths live in :mod:`safety_dash.kernels`; the scalar functions here
use the same arithmetic so both agree exactly.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import ValidationError
from .kernels import DEG, EARTH_RADIUS_M, SQRT3


class RegionKind(enum.Enum):
    NPU = "npu"
    NEIGHBORHOOD = "neighborhood"
    CITY = "city"


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValidationError(f"non-finite coordinate ({self.lat}, {self.lon})")
        if not (-90.0 <= self.lat <= 90.0):
            raise ValidationError(f"latitude {self.lat} outside [-90, 90]")
        if not (-180.0 <= self.lon <= 180.0):
            raise ValidationError(f"longitude {self.lon} outside [-180, 180]")


Ring = tuple[GeoPoint, ...]


def _check_ring(ring: Sequence[GeoPoint]) -> Ring:
    if len(ring) < 4:
        raise ValidationError(f"ring has {len(ring)} points, need at least 4")
    first, last = ring[0], ring[-1]
    if first.lat != last.lat or first.lon != last.lon:
        raise ValidationError("ring is not closed (first point != last point)")
    return tuple(ring)


@dataclass(frozen=True)
class GeoRegion:
    id: str
    kind: RegionKind
    name: str
    rings: tuple[Ring, ...]
    population: int = 0

    def __post_init__(self):
        if not self.rings:
            raise ValidationError(f"region {self.id!r} has no rings")
        object.__setattr__(self, "rings", tuple(_check_ring(r) for r in self.rings))
        if self.population < 0:
            raise ValidationError(f"region {self.id!r} has negative population")

    def bbox(self) -> tuple[float, float, float, float]:
        """(min_lon, min_lat, max_lon, max_lat) over all rings."""
        lons = [p.lon for ring in self.rings for p in ring]
        lats = [p.lat for ring in self.rings for p in ring]
        return min(lons), min(lats), max(lons), max(lats)


@dataclass(frozen=True)
class HexGridConfig:
    origin: GeoPoint
    hex_size_m: float = 150.0
    ref_lat: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.ref_lat is None:
            object.__setattr__(self, "ref_lat", self.origin.lat)
        if not (self.hex_size_m > 0):
            raise ValidationError(f"hex_size_m must be > 0, got {self.hex_size_m}")
        if self.ref_lat != self.origin.lat:
            raise ValidationError("ref_lat must equal origin.lat")


@dataclass(frozen=True)
class HexCoord:
    q: int
    r: int


# --- scalar containment -----------------------------------------------------


def _on_segment(px, py, x1, y1, x2, y2) -> bool:
    cross = (x2 - x1) * (py - y1) - (px - x1) * (y2 - y1)
    if cross != 0.0:
        return False
    return min(x1, x2) <= px <= max(x1, x2) and min(y1, y2) <= py <= max(y1, y2)


def _ring_crossing_parity(px: float, py: float, ring: Ring) -> bool:
    """Even-odd crossing test for one ring, ignoring boundary cases."""
    parity = False
    for a, b in zip(ring, ring[1:]):
        x1, y1, x2, y2 = a.lon, a.lat, b.lon, b.lat
        if (y1 > py) != (y2 > py):
            xint = (x2 - x1) * (py - y1) / (y2 - y1) + x1
            if px < xint:
                parity = not parity
    return parity


def point_in_polygon(p: GeoPoint, region: GeoRegion) -> bool:
    """True iff ``p`` is inside ``region`` (boundary points count as inside)."""
    px, py = p.lon, p.lat
    odd = 0
    for ring in region.rings:
        for a, b in zip(ring, ring[1:]):
            if _on_segment(px, py, a.lon, a.lat, b.lon, b.lat):
                return True
        if _ring_crossing_parity(px, py, ring):
            odd += 1
    return odd % 2 == 1


def assign_region(p: GeoPoint, regions: Sequence[GeoRegion]) -> str | None:
    """Id of the containing region, smallest id on overlap, None if no match."""
    kinds = {r.kind for r in regions}
    if len(kinds) > 1:
        raise ValidationError(f"assign_region expects one region kind, got {sorted(k.value for k in kinds)}")
    for region in sorted(regions, key=lambda r: r.id):
        if point_in_polygon(p, region):
            return region.id
    return None


# --- hex grid ----------------------------------------------------------------


def project_local(p: GeoPoint, cfg: HexGridConfig) -> tuple[float, float]:
    """Meters east/north of the grid origin (equirectangular)."""
    cos_ref = math.cos(cfg.ref_lat * DEG)
    x = EARTH_RADIUS_M * ((p.lon - cfg.origin.lon) * DEG) * cos_ref
    y = EARTH_RADIUS_M * ((p.lat - cfg.origin.lat) * DEG)
    return x, y


def unproject_local(x: float, y: float, cfg: HexGridConfig) -> GeoPoint:
    cos_ref = math.cos(cfg.ref_lat * DEG)
    lat = cfg.origin.lat + (y / EARTH_RADIUS_M) / DEG
    lon = cfg.origin.lon + (x / (EARTH_RADIUS_M * cos_ref)) / DEG
    return GeoPoint(lat, lon)


def hex_index(p: GeoPoint, cfg: HexGridConfig) -> HexCoord:
    """Axial coordinate of the hex whose center is nearest ``p``."""
    q, r = kernels.hex_axial(
        np.array([p.lon]), np.array([p.lat]), cfg.origin.lon, cfg.origin.lat, cfg.ref_lat, cfg.hex_size_m
    )
    return HexCoord(int(q[0]), int(r[0]))


def hex_center(h: HexCoord, cfg: HexGridConfig) -> tuple[float, float]:
    """Center of hex ``h`` in local meters."""
    s = cfg.hex_size_m
    x = SQRT3 * s * (h.q - 0.5 * h.r)
    y = -1.5 * s * h.r
    return x, y


def hex_polygon(h: HexCoord, cfg: HexGridConfig) -> Ring:
    """The hex's 6 vertices counter-clockwise, first repeated as last."""
    cx, cy = hex_center(h, cfg)
    s = cfg.hex_size_m
    pts = []
    for i in range(6):
        angle = DEG * (30.0 + 60.0 * i)
        pts.append(unproject_local(cx + s * math.cos(angle), cy + s * math.sin(angle), cfg))
    pts.append(pts[0])
    return tuple(pts)


def ring_centroid(ring: Ring) -> GeoPoint:
    """Arithmetic mean of the ring's distinct vertices."""
    pts = ring[:-1]
    return GeoPoint(
        sum(p.lat for p in pts) / len(pts),
        sum(p.lon for p in pts) / len(pts),
    )


# --- GeoJSON loading / serialization -----------------------------------------


def _ring_from_coords(coords: Iterable[Sequence[float]]) -> Ring:
    # GeoJSON coordinate order is (lon, lat)
    return tuple(GeoPoint(lat=c[1], lon=c[0]) for c in coords)


def region_from_feature(feature: dict) -> GeoRegion:
    props = feature.get("properties") or {}
    geom = feature.get("geometry") or {}
    gtype = geom.get("type")
    coords = geom.get("coordinates") or []
    if gtype == "Polygon":
        rings = [_ring_from_coords(r) for r in coords]
    elif gtype == "MultiPolygon":
        # flatten: even-odd containment over the combined ring set preserves
        # part/hole semantics for disjoint parts
        rings = [_ring_from_coords(r) for poly in coords for r in poly]
    else:
        raise ValidationError(f"unsupported geometry type {gtype!r}")
    try:
        kind = RegionKind(props.get("kind"))
    except ValueError:
        raise ValidationError(f"unknown region kind {props.get('kind')!r}") from None
    population = int(props.get("population") or 0)
    return GeoRegion(
        id=str(props.get("id")),
        kind=kind,
        name=str(props.get("name", props.get("id"))),
        rings=tuple(rings),
        population=population,
    )


def load_regions(source) -> tuple[GeoRegion, ...]:
    """Load regions from a GeoJSON FeatureCollection (path, file, or dict)."""
    if isinstance(source, dict):
        doc = source
    elif hasattr(source, "read"):
        doc = json.load(source)
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if doc.get("type") != "FeatureCollection":
        raise ValidationError("regions file is not a GeoJSON FeatureCollection")
    regions = tuple(region_from_feature(f) for f in doc.get("features", []))
    seen: set[tuple[RegionKind, str]] = set()
    for r in regions:
        key = (r.kind, r.id)
        if key in seen:
            raise ValidationError(f"duplicate region id {r.id!r} for kind {r.kind.value}")
        seen.add(key)
    return regions


def region_feature(region: GeoRegion) -> dict:
    return {
        "type": "Feature",
        "geometry": {
            "type": "Polygon",
            "coordinates": [[[p.lon, p.lat] for p in ring] for ring in region.rings],
        },
        "properties": {
            "id": region.id,
            "kind": region.kind.value,
            "name": region.name,
            "population": region.population,
        },
    }


def regions_feature_collection(regions: Iterable[GeoRegion]) -> dict:
    return {"type": "FeatureCollection", "features": [region_feature(r) for r in regions]}


# --- flat-array index for the batch kernels ----------------------------------


@dataclass(frozen=True)
class RegionIndex:
    """Regions flattened for :func:`safety_dash.kernels.assign_regions`.

    Regions are ordered by id so "first containing region" implements the
    smallest-id tie-break.
    """

    ids: tuple[str, ...]
    vx: np.ndarray
    vy: np.ndarray
    ring_off: np.ndarray
    region_ring_off: np.ndarray
    bbox: np.ndarray


def build_region_index(regions: Sequence[GeoRegion]) -> RegionIndex:
    ordered = sorted(regions, key=lambda r: r.id)
    xs: list[float] = []
    ys: list[float] = []
    ring_off = [0]
    region_ring_off = [0]
    boxes = []
    for region in ordered:
        for ring in region.rings:
            xs.extend(p.lon for p in ring)
            ys.extend(p.lat for p in ring)
            ring_off.append(len(xs))
        region_ring_off.append(len(ring_off) - 1)
        boxes.append(region.bbox())
    return RegionIndex(
        ids=tuple(r.id for r in ordered),
        vx=np.array(xs, dtype=np.float64),
        vy=np.array(ys, dtype=np.float64),
        ring_off=np.array(ring_off, dtype=np.int64),
        region_ring_off=np.array(region_ring_off, dtype=np.int64),
        bbox=np.array(boxes, dtype=np.float64).reshape(len(boxes), 4),
    )


def assign_points(lons: np.ndarray, lats: np.ndarray, index: RegionIndex, use_bbox: bool = True) -> np.ndarray:
    """Region index position per point (-1 where unmatched)."""
    if len(index.ids) == 0:
        return np.full(np.asarray(lons).size, -1, dtype=np.int64)
    return kernels.assign_regions(
        lons, lats, index.vx, index.vy, index.ring_off, index.region_ring_off, index.bbox, use_bbox
    )
