"""The immutable joined dataset and its versioned single-file JSON form.

Serialization is deterministic: fixed field order, floats quantized to 9
significant digits. Rebuilding from identical inputs yields a byte-identical
file except for ``built_at``.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field, fields
from typing import Sequence

from ..errors import ReferentialError, ValidationError
from ..geo import GeoPoint, GeoRegion, RegionKind
from .parsers import Asset, AssetKind, CensusProfile, CodeViolationRecord, CrimeCategory, CrimeRecord

FORMAT_VERSION = 1


@dataclass(frozen=True)
class DatasetReport:
    parsed: int = 0
    row_errors: int = 0
    located: int = 0
    geocoded: int = 0
    geocode_failed: int = 0
    unjoined: int = 0
    flag_unknowns: int = 0

    def reconciles(self) -> bool:
        return self.parsed == self.located + self.geocode_failed


@dataclass(frozen=True)
class IngestReport:
    crimes: DatasetReport = field(default_factory=DatasetReport)
    violations: DatasetReport = field(default_factory=DatasetReport)
    assets: DatasetReport = field(default_factory=DatasetReport)
    census: DatasetReport = field(default_factory=DatasetReport)

    def reconciles(self) -> bool:
        return all(r.reconciles() for r in (self.crimes, self.violations, self.assets, self.census))


@dataclass(frozen=True)
class DataSnapshot:
    crimes: tuple[CrimeRecord, ...]
    violations: tuple[CodeViolationRecord, ...]
    assets: tuple[Asset, ...]
    census: tuple[CensusProfile, ...]
    regions: tuple[GeoRegion, ...]
    built_at: str
    ingest_report: IngestReport

    def region_ids(self, kind: RegionKind) -> tuple[str, ...]:
        return tuple(sorted(r.id for r in self.regions if r.kind is kind))

    def census_population(self, region_id: str, kind: str) -> int | None:
        for profile in self.census:
            if profile.region_id == region_id and profile.region_kind == kind:
                return profile.population
        return None

    def factor_names(self) -> tuple[str, ...]:
        names = {name for profile in self.census for name, _ in profile.factors}
        return tuple(sorted(names))


def build_snapshot(
    crimes: Sequence[CrimeRecord],
    violations: Sequence[CodeViolationRecord],
    assets: Sequence[Asset],
    census: Sequence[CensusProfile],
    regions: Sequence[GeoRegion],
    ingest_report: IngestReport,
    built_at: str | None = None,
) -> DataSnapshot:
    """Freeze parsed-and-joined inputs into a snapshot, verifying the accounting."""
    known = {(r.kind.value, r.id) for r in regions}
    for profile in census:
        if (profile.region_kind, profile.region_id) not in known:
            raise ReferentialError(
                f"census row references unknown {profile.region_kind} region {profile.region_id!r}"
            )
    if not ingest_report.reconciles():
        raise ValidationError("ingest report does not reconcile (parsed != located + geocode_failed)")
    return DataSnapshot(
        crimes=tuple(crimes),
        violations=tuple(violations),
        assets=tuple(assets),
        census=tuple(census),
        regions=tuple(regions),
        built_at=built_at or dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        ingest_report=ingest_report,
    )


# --- JSON serialization -------------------------------------------------------


def _f9(x: float) -> float:
    """Quantize to 9 significant digits so serialization is compact and stable."""
    return float(format(x, ".9g"))


def _point(p: GeoPoint | None):
    return None if p is None else [_f9(p.lat), _f9(p.lon)]


def _crime_doc(r: CrimeRecord) -> dict:
    return {
        "id": r.id,
        "report_date": r.report_date.isoformat(),
        "occurrence_date": r.occurrence_date.isoformat(),
        "occurrence_time": r.occurrence_time.isoformat() if r.occurrence_time else None,
        "address": r.address,
        "ucr_code": r.ucr_code,
        "category": r.category.value,
        "location": _point(r.location),
        "npu": r.npu,
        "neighborhood": r.neighborhood,
    }


def _violation_doc(r: CodeViolationRecord) -> dict:
    return {
        "id": r.id,
        "report_date": r.report_date.isoformat(),
        "last_inspection_date": r.last_inspection_date.isoformat() if r.last_inspection_date else None,
        "address": r.address,
        "status": r.status,
        "open_and_vacant": r.open_and_vacant,
        "overgrowth": r.overgrowth,
        "active_utilities": r.active_utilities,
        "location": _point(r.location),
        "npu": r.npu,
        "neighborhood": r.neighborhood,
    }


def _asset_doc(r: Asset) -> dict:
    return {
        "id": r.id,
        "kind": r.kind.value,
        "name": r.name,
        "location": _point(r.location),
        "details": [[k, v] for k, v in r.details],
    }


def _census_doc(r: CensusProfile) -> dict:
    return {
        "region_id": r.region_id,
        "region_kind": r.region_kind,
        "population": r.population,
        "factors": [[name, _f9(value)] for name, value in r.factors],
    }


def _region_doc(r: GeoRegion) -> dict:
    return {
        "id": r.id,
        "kind": r.kind.value,
        "name": r.name,
        "population": r.population,
        "rings": [[[_f9(p.lat), _f9(p.lon)] for p in ring] for ring in r.rings],
    }


def _report_doc(report: IngestReport) -> dict:
    return {
        name: {f.name: getattr(getattr(report, name), f.name) for f in fields(DatasetReport)}
        for name in ("crimes", "violations", "assets", "census")
    }


def snapshot_to_doc(snapshot: DataSnapshot) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "built_at": snapshot.built_at,
        "ingest_report": _report_doc(snapshot.ingest_report),
        "regions": [_region_doc(r) for r in snapshot.regions],
        "census": [_census_doc(r) for r in snapshot.census],
        "crimes": [_crime_doc(r) for r in snapshot.crimes],
        "violations": [_violation_doc(r) for r in snapshot.violations],
        "assets": [_asset_doc(r) for r in snapshot.assets],
    }


def save_snapshot(snapshot: DataSnapshot, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(snapshot_to_doc(snapshot), fh, separators=(",", ":"), ensure_ascii=False)
        fh.write("\n")


def _load_point(doc) -> GeoPoint | None:
    return None if doc is None else GeoPoint(doc[0], doc[1])


def _load_date(text: str | None) -> dt.date | None:
    return dt.date.fromisoformat(text) if text else None


def snapshot_from_doc(doc: dict) -> DataSnapshot:
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported snapshot format_version {version!r}")
    regions = tuple(
        GeoRegion(
            id=r["id"],
            kind=RegionKind(r["kind"]),
            name=r["name"],
            population=r["population"],
            rings=tuple(tuple(GeoPoint(lat, lon) for lat, lon in ring) for ring in r["rings"]),
        )
        for r in doc["regions"]
    )
    census = tuple(
        CensusProfile(
            region_id=c["region_id"],
            region_kind=c["region_kind"],
            population=c["population"],
            factors=tuple((name, value) for name, value in c["factors"]),
        )
        for c in doc["census"]
    )
    crimes = tuple(
        CrimeRecord(
            id=c["id"],
            report_date=dt.date.fromisoformat(c["report_date"]),
            occurrence_date=dt.date.fromisoformat(c["occurrence_date"]),
            occurrence_time=dt.time.fromisoformat(c["occurrence_time"]) if c["occurrence_time"] else None,
            address=c["address"],
            ucr_code=c["ucr_code"],
            category=CrimeCategory(c["category"]),
            location=_load_point(c["location"]),
            npu=c["npu"],
            neighborhood=c["neighborhood"],
        )
        for c in doc["crimes"]
    )
    violations = tuple(
        CodeViolationRecord(
            id=v["id"],
            report_date=dt.date.fromisoformat(v["report_date"]),
            last_inspection_date=_load_date(v["last_inspection_date"]),
            address=v["address"],
            status=v["status"],
            open_and_vacant=v["open_and_vacant"],
            overgrowth=v["overgrowth"],
            active_utilities=v["active_utilities"],
            location=_load_point(v["location"]),
            npu=v["npu"],
            neighborhood=v["neighborhood"],
        )
        for v in doc["violations"]
    )
    assets = tuple(
        Asset(
            id=a["id"],
            kind=AssetKind(a["kind"]),
            name=a["name"],
            location=_load_point(a["location"]),
            details=tuple((k, v) for k, v in a["details"]),
        )
        for a in doc["assets"]
    )
    report = IngestReport(
        **{name: DatasetReport(**doc["ingest_report"][name]) for name in ("crimes", "violations", "assets", "census")}
    )
    return DataSnapshot(
        crimes=crimes,
        violations=violations,
        assets=assets,
        census=census,
        regions=regions,
        built_at=doc["built_at"],
        ingest_report=report,
    )


def load_snapshot(path: str) -> DataSnapshot:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"snapshot file is not valid JSON: {exc}") from None
    return snapshot_from_doc(doc)
