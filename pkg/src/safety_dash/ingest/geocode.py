"""Pluggable geocoding: stub, null, and file-backed cache implementations.

The external geocoding service is deliberately behind an interface; the
deterministic stub (hash of the normalized address to a point inside a
bounding box) keeps ingestion offline-reproducible.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from typing import Protocol, Sequence, TypeVar

from ..geo import GeoPoint


def normalize_address(address: str) -> str:
    return " ".join(address.split()).upper()


class Geocoder(Protocol):
    def geocode(self, address: str) -> GeoPoint | None: ...


class NullGeocoder:
    """Always misses."""

    def geocode(self, address: str) -> GeoPoint | None:
        return None


class StubGeocoder:
    """Deterministic: sha256 of the normalized address picks a point in ``bbox``.

    ``bbox`` is (min_lat, min_lon, max_lat, max_lon).
    """

    def __init__(self, bbox: tuple[float, float, float, float]):
        min_lat, min_lon, max_lat, max_lon = bbox
        if not (min_lat <= max_lat and min_lon <= max_lon):
            raise ValueError(f"degenerate bbox {bbox}")
        self.bbox = (min_lat, min_lon, max_lat, max_lon)

    def geocode(self, address: str) -> GeoPoint | None:
        digest = hashlib.sha256(normalize_address(address).encode("utf-8")).digest()
        a = int.from_bytes(digest[:8], "big") / 2**64
        b = int.from_bytes(digest[8:16], "big") / 2**64
        min_lat, min_lon, max_lat, max_lon = self.bbox
        return GeoPoint(min_lat + a * (max_lat - min_lat), min_lon + b * (max_lon - min_lon))


class CachedGeocoder:
    """Wraps another geocoder with a persistent address -> point JSON cache."""

    def __init__(self, path: str, inner: Geocoder | None = None):
        self.path = path
        self.inner = inner if inner is not None else NullGeocoder()
        self._cache: dict[str, tuple[float, float] | None] = {}
        self._dirty = False
        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
            self._cache = {k: tuple(v) if v is not None else None for k, v in raw.items()}

    def geocode(self, address: str) -> GeoPoint | None:
        key = normalize_address(address)
        if key in self._cache:
            hit = self._cache[key]
            return GeoPoint(*hit) if hit is not None else None
        point = self.inner.geocode(address)
        self._cache[key] = (point.lat, point.lon) if point is not None else None
        self._dirty = True
        return point

    def save(self) -> None:
        if not self._dirty:
            return
        payload = {k: list(v) if v is not None else None for k, v in sorted(self._cache.items())}
        with open(self.path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=0, sort_keys=True)
        self._dirty = False


R = TypeVar("R")


def geocode_missing(records: Sequence[R], geocoder: Geocoder) -> tuple[list[R], int, int]:
    """Fill absent locations via ``geocoder``; never touches existing ones.

    Returns (records in input order, count geocoded, count still missing).
    """
    out: list[R] = []
    geocoded = 0
    failed = 0
    for record in records:
        if record.location is not None:
            out.append(record)
            continue
        point = geocoder.geocode(record.address)
        if point is None:
            failed += 1
            out.append(record)
        else:
            geocoded += 1
            out.append(dataclasses.replace(record, location=point))
    return out, geocoded, failed
