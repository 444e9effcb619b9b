"""Map layers: hex-binned crime counts, clustered violation pins, asset pins.

The hex layer colors each cell with one of five classes on a logarithmic
count scale; the pin layer clusters points on a zoom-scaled square grid.
"""

from __future__ import annotations

import datetime as dt
import math
import threading
from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError
from .geo import GeoPoint, GeoRegion, HexCoord, HexGridConfig, hex_polygon
from .ingest.parsers import Asset, AssetKind, CrimeCategory, CrimeRecord
from .ingest.snapshot import DataSnapshot

MAX_CLUSTER_MEMBER_IDS = 100
CLUSTER_CELL_FRACTION = 0.125  # cell side as a fraction of a zoom-level tile


@dataclass(frozen=True)
class Span:
    """All time, one calendar year, or one calendar month."""

    kind: str
    year: int | None = None
    month: int | None = None

    def __post_init__(self):
        if self.kind not in ("all", "year", "month"):
            raise DomainError("bad_span", f"unknown span kind {self.kind!r}")
        if self.kind == "all" and (self.year is not None or self.month is not None):
            raise DomainError("bad_span", "all-time span takes no year or month")
        if self.kind == "year" and (self.year is None or self.month is not None):
            raise DomainError("bad_span", "year span takes a year only")
        if self.kind == "month" and (self.year is None or self.month is None):
            raise DomainError("bad_span", "month span takes a year and month")
        if self.month is not None and not 1 <= self.month <= 12:
            raise DomainError("bad_span", f"month must be 1..12, got {self.month}")

    @classmethod
    def all(cls) -> "Span":
        return cls("all")

    def matches(self, d: dt.date) -> bool:
        if self.kind == "all":
            return True
        if self.kind == "year":
            return d.year == self.year
        return d.year == self.year and d.month == self.month

    def label(self) -> str:
        if self.kind == "all":
            return "all"
        if self.kind == "year":
            return f"{self.year:04d}"
        return f"{self.year:04d}-{self.month:02d}"


def parse_span(text: str) -> Span:
    """Grammar: "all" | "YYYY" | "YYYY-MM"."""
    s = text.strip()
    if s.lower() == "all":
        return Span.all()
    parts = s.split("-")
    try:
        if len(parts) == 1:
            return Span("year", year=int(parts[0]))
        if len(parts) == 2:
            return Span("month", year=int(parts[0]), month=int(parts[1]))
    except ValueError:
        pass
    raise DomainError("bad_span", f"span must be all, YYYY, or YYYY-MM, got {text!r}")


@dataclass(frozen=True)
class CrimeFilter:
    categories: frozenset[CrimeCategory] | None = None
    ucr_codes: frozenset[str] | None = None
    span: Span = field(default_factory=Span.all)

    def __post_init__(self):
        if self.categories is not None and self.ucr_codes is not None:
            raise DomainError("bad_filter", "categories and ucr_codes are mutually exclusive")

    def matches(self, record: CrimeRecord) -> bool:
        if self.categories is not None and record.category not in self.categories:
            return False
        if self.ucr_codes is not None and record.ucr_code not in self.ucr_codes:
            return False
        return self.span.matches(record.occurrence_date)


@dataclass(frozen=True)
class HexCell:
    coord: HexCoord
    count: int
    color_class: int


@dataclass(frozen=True)
class PinCluster:
    centroid: GeoPoint
    count: int
    member_ids: tuple[str, ...] | None


def color_class(count: int) -> int:
    """Five-class log scale: 1, 2-10, 11-100, 101-1000, 1001+."""
    if count < 1:
        raise DomainError("bad_count", f"count must be >= 1, got {count}")
    if count == 1:
        return 1
    if count <= 10:
        return 2
    if count <= 100:
        return 3
    if count <= 1000:
        return 4
    return 5


def filter_crimes(snapshot: DataSnapshot, f: CrimeFilter) -> list[CrimeRecord]:
    return [record for record in snapshot.crimes if f.matches(record)]


def build_hexmap(snapshot: DataSnapshot, f: CrimeFilter, cfg: HexGridConfig) -> list[HexCell]:
    """Count filtered, located crimes per hex; cells ordered by (q, r)."""
    located = [record for record in filter_crimes(snapshot, f) if record.location is not None]
    if not located:
        return []
    lons = np.array([record.location.lon for record in located])
    lats = np.array([record.location.lat for record in located])
    qs, rs = kernels.hex_axial(lons, lats, cfg.origin.lon, cfg.origin.lat, cfg.ref_lat, cfg.hex_size_m)
    counts = Counter(zip(qs.tolist(), rs.tolist()))
    return [
        HexCell(HexCoord(q, r), count, color_class(count))
        for (q, r), count in sorted(counts.items())
    ]


def cluster_pins(points: list[tuple[str, GeoPoint]], zoom: int) -> list[PinCluster]:
    """Grid-cluster points at a zoom level; one cluster per occupied cell.

    The cell is an eighth of a slippy-map tile at that zoom, so clusters
    split naturally as the user zooms in.
    """
    if not isinstance(zoom, int) or not 0 <= zoom <= 22:
        raise DomainError("bad_zoom", f"zoom must be an integer in 0..22, got {zoom!r}")
    side = 360.0 / (1 << zoom) * CLUSTER_CELL_FRACTION
    cells: dict[tuple[int, int], list[tuple[str, GeoPoint]]] = defaultdict(list)
    for pin_id, point in points:
        cell = (math.floor(point.lon / side), math.floor(point.lat / side))
        cells[cell].append((pin_id, point))
    clusters = []
    for cell in sorted(cells):
        members = cells[cell]
        lat = sum(p.lat for _, p in members) / len(members)
        lon = sum(p.lon for _, p in members) / len(members)
        member_ids = tuple(pin_id for pin_id, _ in members) if len(members) <= MAX_CLUSTER_MEMBER_IDS else None
        clusters.append(PinCluster(GeoPoint(lat, lon), len(members), member_ids))
    return clusters


def violation_pins(snapshot: DataSnapshot, span: Span, zoom: int) -> list[PinCluster]:
    """Clustered pins for located violations whose report date is in the span."""
    points = [
        (record.id, record.location)
        for record in snapshot.violations
        if record.location is not None and span.matches(record.report_date)
    ]
    return cluster_pins(points, zoom)


def asset_pins(snapshot: DataSnapshot, kinds: frozenset[AssetKind] | None = None) -> list[Asset]:
    if kinds is None:
        return list(snapshot.assets)
    return [asset for asset in snapshot.assets if asset.kind in kinds]


def default_grid_config(regions: tuple[GeoRegion, ...], hex_size_m: float = 150.0) -> HexGridConfig:
    """Grid anchored at the region bounding box center, rounded for stability."""
    if not regions:
        return HexGridConfig(GeoPoint(0.0, 0.0), hex_size_m)
    boxes = [region.bbox() for region in regions]
    min_lon = min(box[0] for box in boxes)
    min_lat = min(box[1] for box in boxes)
    max_lon = max(box[2] for box in boxes)
    max_lat = max(box[3] for box in boxes)
    origin = GeoPoint(round((min_lat + max_lat) / 2, 6), round((min_lon + max_lon) / 2, 6))
    return HexGridConfig(origin, hex_size_m)


def hexes_feature_collection(cells: list[HexCell], cfg: HexGridConfig) -> dict:
    """GeoJSON FeatureCollection of hex polygons with count and color_class."""
    features = []
    for cell in cells:
        ring = hex_polygon(cell.coord, cfg)
        features.append(
            {
                "type": "Feature",
                "properties": {
                    "q": cell.coord.q,
                    "r": cell.coord.r,
                    "count": cell.count,
                    "color_class": cell.color_class,
                },
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [[[p.lon, p.lat] for p in ring]],
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}


class HexmapCache:
    """Memoizes build_hexmap results for one snapshot.

    Bound to the snapshot at construction so a reloaded snapshot gets a fresh
    cache; safe for concurrent readers and writers.
    """

    def __init__(self, snapshot: DataSnapshot):
        self._snapshot = snapshot
        self._lock = threading.Lock()
        self._cells: dict[tuple[CrimeFilter, HexGridConfig], tuple[HexCell, ...]] = {}

    @property
    def snapshot(self) -> DataSnapshot:
        return self._snapshot

    def get(self, f: CrimeFilter, cfg: HexGridConfig) -> tuple[HexCell, ...]:
        key = (f, cfg)
        with self._lock:
            cached = self._cells.get(key)
        if cached is not None:
            return cached
        cells = tuple(build_hexmap(self._snapshot, f, cfg))
        with self._lock:
            return self._cells.setdefault(key, cells)
