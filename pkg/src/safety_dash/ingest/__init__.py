"""Dataset ingestion: CSV parsing, geocoding, spatial join, snapshot build."""

from .geocode import (
    CachedGeocoder,
    Geocoder,
    NullGeocoder,
    StubGeocoder,
    geocode_missing,
    normalize_address,
)
from .parsers import (
    Asset,
    AssetKind,
    CensusProfile,
    CodeViolationRecord,
    CrimeCategory,
    CrimeRecord,
    RowError,
    load_ucr_table,
    parse_assets,
    parse_census,
    parse_crimes,
    parse_datetime,
    parse_violations,
)
from .join import spatial_join
from .snapshot import (
    DataSnapshot,
    DatasetReport,
    IngestReport,
    build_snapshot,
    load_snapshot,
    save_snapshot,
    snapshot_from_doc,
    snapshot_to_doc,
)
from .pipeline import IngestResult, ingest_sources

__all__ = [
    "Asset",
    "AssetKind",
    "CachedGeocoder",
    "CensusProfile",
    "CodeViolationRecord",
    "CrimeCategory",
    "CrimeRecord",
    "DataSnapshot",
    "DatasetReport",
    "Geocoder",
    "IngestReport",
    "IngestResult",
    "NullGeocoder",
    "RowError",
    "StubGeocoder",
    "build_snapshot",
    "geocode_missing",
    "ingest_sources",
    "load_snapshot",
    "load_ucr_table",
    "normalize_address",
    "parse_assets",
    "parse_census",
    "parse_crimes",
    "parse_datetime",
    "parse_violations",
    "save_snapshot",
    "snapshot_from_doc",
    "snapshot_to_doc",
    "spatial_join",
]
