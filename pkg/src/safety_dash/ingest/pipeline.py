"""End-to-end ingestion: parse CSVs, geocode, join to regions, freeze a snapshot."""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

from ..geo import load_regions
from .geocode import Geocoder, NullGeocoder, geocode_missing
from .join import spatial_join
from .parsers import (
    CrimeCategory,
    RowError,
    load_ucr_table,
    parse_assets,
    parse_census,
    parse_crimes,
    parse_violations,
)
from .snapshot import DataSnapshot, DatasetReport, IngestReport, build_snapshot


@dataclass(frozen=True)
class IngestResult:
    snapshot: DataSnapshot
    report: IngestReport
    row_errors: dict[str, tuple[RowError, ...]]


def ingest_sources(
    crimes_csv: IO[str],
    violations_csv: IO[str],
    assets_csv: IO[str],
    census_csv: IO[str],
    regions_geojson: IO[str],
    geocoder: Geocoder | None = None,
    ucr_table: dict[str, CrimeCategory] | None = None,
) -> IngestResult:
    """Run the full pipeline over open text streams and return the frozen result.

    Ordering is deliberate: regions load first so a malformed region file fails
    before any row work, and geocoding runs before the spatial join so newly
    located records participate in it.
    """
    regions = load_regions(regions_geojson)
    geocoder = geocoder if geocoder is not None else NullGeocoder()
    table = ucr_table if ucr_table is not None else load_ucr_table()

    crimes, crime_errors = parse_crimes(crimes_csv, table)
    violations, violation_errors, unknown_flags = parse_violations(violations_csv)
    assets, asset_errors = parse_assets(assets_csv)
    census, census_errors = parse_census(census_csv)

    crimes, crimes_geocoded, crimes_failed = geocode_missing(crimes, geocoder)
    violations, violations_geocoded, violations_failed = geocode_missing(violations, geocoder)

    crimes, crimes_unjoined = spatial_join(crimes, regions)
    violations, violations_unjoined = spatial_join(violations, regions)

    report = IngestReport(
        crimes=DatasetReport(
            parsed=len(crimes),
            row_errors=len(crime_errors),
            located=sum(1 for r in crimes if r.location is not None),
            geocoded=crimes_geocoded,
            geocode_failed=crimes_failed,
            unjoined=crimes_unjoined,
        ),
        violations=DatasetReport(
            parsed=len(violations),
            row_errors=len(violation_errors),
            located=sum(1 for r in violations if r.location is not None),
            geocoded=violations_geocoded,
            geocode_failed=violations_failed,
            unjoined=violations_unjoined,
            flag_unknowns=unknown_flags,
        ),
        assets=DatasetReport(
            parsed=len(assets),
            row_errors=len(asset_errors),
            located=len(assets),
        ),
        census=DatasetReport(
            parsed=len(census),
            row_errors=len(census_errors),
            located=len(census),
        ),
    )
    snapshot = build_snapshot(crimes, violations, assets, census, regions, report)
    return IngestResult(
        snapshot=snapshot,
        report=report,
        row_errors={
            "crimes": tuple(crime_errors),
            "violations": tuple(violation_errors),
            "assets": tuple(asset_errors),
            "census": tuple(census_errors),
        },
    )
