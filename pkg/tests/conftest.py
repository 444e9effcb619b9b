import datetime as dt

import pytest

from safety_dash.fixtures import CITY_LAT_MAX, CITY_LAT_MIN, CITY_LON_MAX, CITY_LON_MIN, generate_fixture
from safety_dash.geo import GeoPoint, GeoRegion, RegionKind
from safety_dash.ingest import StubGeocoder, ingest_sources
from safety_dash.ingest.parsers import (
    Asset,
    AssetKind,
    CensusProfile,
    CodeViolationRecord,
    CrimeCategory,
    CrimeRecord,
)
from safety_dash.ingest.snapshot import DataSnapshot, DatasetReport, IngestReport, build_snapshot

FIXTURE_SEED = 1234
FIXTURE_CRIMES = 10000
FIXTURE_VIOLATIONS = 2000
CITY_BBOX = (CITY_LAT_MIN, CITY_LON_MIN, CITY_LAT_MAX, CITY_LON_MAX)


def rect_region(region_id, kind, lon_w, lat_s, lon_e, lat_n, name=None, population=0):
    ring = (
        GeoPoint(lat_s, lon_w),
        GeoPoint(lat_s, lon_e),
        GeoPoint(lat_n, lon_e),
        GeoPoint(lat_n, lon_w),
        GeoPoint(lat_s, lon_w),
    )
    return GeoRegion(region_id, RegionKind(kind), name or region_id, (ring,), population)


def make_crime(i, occurrence, lat=None, lon=None, category=CrimeCategory.THEFT,
               ucr="0640", npu=None, neighborhood=None, time=None):
    if isinstance(occurrence, str):
        occurrence = dt.date.fromisoformat(occurrence)
    location = GeoPoint(lat, lon) if lat is not None else None
    return CrimeRecord(
        id=f"C{i}",
        report_date=occurrence,
        occurrence_date=occurrence,
        occurrence_time=time,
        address=f"{i} TEST ST",
        ucr_code=ucr,
        category=category,
        location=location,
        npu=npu,
        neighborhood=neighborhood,
    )


def make_violation(i, report, lat=None, lon=None, status="open", npu=None):
    if isinstance(report, str):
        report = dt.date.fromisoformat(report)
    location = GeoPoint(lat, lon) if lat is not None else None
    return CodeViolationRecord(
        id=f"V{i}",
        report_date=report,
        last_inspection_date=None,
        address=f"{i} TEST AVE",
        status=status,
        open_and_vacant=False,
        overgrowth=False,
        active_utilities=False,
        location=location,
        npu=npu,
        neighborhood=None,
    )


def make_snapshot(crimes=(), violations=(), assets=(), census=(), regions=()):
    """A snapshot straight from records; the report is made to reconcile."""
    def report_for(records):
        located = sum(1 for r in records if getattr(r, "location", None) is not None)
        return DatasetReport(parsed=len(records), located=located,
                             geocode_failed=len(records) - located)

    report = IngestReport(
        crimes=report_for(tuple(crimes)),
        violations=report_for(tuple(violations)),
        assets=DatasetReport(parsed=len(tuple(assets)), located=len(tuple(assets))),
        census=DatasetReport(parsed=len(tuple(census)), located=len(tuple(census))),
    )
    return build_snapshot(
        tuple(crimes), tuple(violations), tuple(assets), tuple(census), tuple(regions),
        report, built_at="2026-01-01T00:00:00+00:00",
    )


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fixture")
    generate_fixture(out, crimes=FIXTURE_CRIMES, violations=FIXTURE_VIOLATIONS, seed=FIXTURE_SEED)
    return out


@pytest.fixture(scope="session")
def ingest_result(fixture_dir):
    streams = {
        name: open(fixture_dir / filename, encoding="utf-8")
        for name, filename in [
            ("crimes", "crimes.csv"), ("violations", "violations.csv"),
            ("assets", "assets.csv"), ("census", "census.csv"),
            ("regions", "regions.geojson"),
        ]
    }
    try:
        return ingest_sources(
            streams["crimes"], streams["violations"], streams["assets"],
            streams["census"], streams["regions"],
            geocoder=StubGeocoder(CITY_BBOX),
        )
    finally:
        for stream in streams.values():
            stream.close()


@pytest.fixture(scope="session")
def snapshot(ingest_result) -> DataSnapshot:
    return ingest_result.snapshot
