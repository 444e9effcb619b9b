"""Parsers, geocoding, spatial join, and snapshot round-trips."""

from __future__ import annotations

import datetime as dt
import io
import json

import pytest

from safety_dash.errors import ReferentialError, SchemaError, ValidationError
from safety_dash.geo import GeoPoint, RegionKind, regions_feature_collection
from safety_dash.ingest import (
    CachedGeocoder,
    CensusProfile,
    CrimeCategory,
    DatasetReport,
    IngestReport,
    NullGeocoder,
    StubGeocoder,
    build_snapshot,
    geocode_missing,
    ingest_sources,
    load_snapshot,
    load_ucr_table,
    normalize_address,
    parse_assets,
    parse_census,
    parse_crimes,
    parse_datetime,
    parse_violations,
    save_snapshot,
    snapshot_from_doc,
    snapshot_to_doc,
    spatial_join,
)

from .conftest import make_crime, make_snapshot, rect_region

UCR = load_ucr_table()


# --- date parsing ---------------------------------------------------------


def test_parse_datetime_us_with_meridian():
    date, time = parse_datetime("3/07/2014 11:30:00 PM")
    assert date == dt.date(2014, 3, 7)
    assert time == dt.time(23, 30, 0)


def test_parse_datetime_us_noon_and_midnight():
    assert parse_datetime("1/1/2010 12:00 PM")[1] == dt.time(12, 0)
    assert parse_datetime("1/1/2010 12:00 AM")[1] == dt.time(0, 0)


def test_parse_datetime_iso_date_only():
    date, time = parse_datetime("2014-03-07")
    assert date == dt.date(2014, 3, 7)
    assert time is None


def test_parse_datetime_rejects_garbage():
    for bad in ("", "13/40/2014", "2014-13-01", "soon"):
        with pytest.raises(ValueError):
            parse_datetime(bad)


# --- crimes ---------------------------------------------------------------


CRIME_HEADER = "id,report_date,occurrence_date,address,ucr_code,lat,lon\n"


def test_parse_crimes_happy_path():
    csv_text = CRIME_HEADER + (
        "C1,01/05/2014,01/04/2014 10:15 PM,12 MAIN ST,0630,33.75,-84.39\n"
        "C2,2014-02-01,2014-01-31,50 OAK AVE,0110,,\n"
    )
    records, errors = parse_crimes(io.StringIO(csv_text), UCR)
    assert errors == []
    assert [r.id for r in records] == ["C1", "C2"]
    assert records[0].category is CrimeCategory.THEFT
    assert records[0].occurrence_time == dt.time(22, 15)
    assert records[0].location == GeoPoint(33.75, -84.39)
    assert records[1].category is CrimeCategory.VIOLENT
    assert records[1].location is None


def test_parse_crimes_unmapped_ucr_is_other():
    csv_text = CRIME_HEADER + "C1,01/05/2014,01/04/2014,12 MAIN ST,9999,33.75,-84.39\n"
    records, errors = parse_crimes(io.StringIO(csv_text), UCR)
    assert errors == []
    assert records[0].category is CrimeCategory.OTHER


def test_parse_crimes_collects_row_errors():
    csv_text = CRIME_HEADER + (
        "C1,notadate,01/04/2014,12 MAIN ST,0630,33.75,-84.39\n"
        "C2,01/05/2014,01/04/2014,50 OAK AVE,0110,33.7,\n"
        "C3,01/05/2014,01/04/2014,9 ELM RD,0630,33.75,-84.39\n"
    )
    records, errors = parse_crimes(io.StringIO(csv_text), UCR)
    assert [r.id for r in records] == ["C3"]
    assert sorted(e.line for e in errors) == [2, 3]


def test_parse_crimes_missing_column_names_it():
    csv_text = "id,report_date,address,ucr_code\nC1,01/05/2014,12 MAIN ST,0630\n"
    with pytest.raises(SchemaError) as exc_info:
        parse_crimes(io.StringIO(csv_text), UCR)
    assert exc_info.value.column == "occurrence_date"
    assert "occurrence_date" in str(exc_info.value)


# --- violations -----------------------------------------------------------


VIOLATION_HEADER = (
    "id,report_date,last_inspection_date,address,status,"
    "open_and_vacant,overgrowth,active_utilities\n"
)


def test_parse_violations_flags_and_unknowns():
    csv_text = VIOLATION_HEADER + (
        "V1,2014-01-05,2014-02-01,12 MAIN ST,open,Y,no,TRUE\n"
        "V2,2014-01-06,,50 OAK AVE,closed,U,,false\n"
    )
    records, errors, unknown = parse_violations(io.StringIO(csv_text))
    assert errors == []
    assert unknown == 1
    v1, v2 = records
    assert (v1.open_and_vacant, v1.overgrowth, v1.active_utilities) == (True, False, True)
    assert v1.last_inspection_date == dt.date(2014, 2, 1)
    assert (v2.open_and_vacant, v2.overgrowth, v2.active_utilities) == (False, False, False)
    assert v2.last_inspection_date is None
    assert v2.location is None


def test_parse_violations_missing_column():
    with pytest.raises(SchemaError) as exc_info:
        parse_violations(io.StringIO("id,report_date,address,status\n"))
    assert exc_info.value.column in ("open_and_vacant", "overgrowth", "active_utilities")


# --- assets ----------------------------------------------------------------


def test_parse_assets_details_and_errors():
    csv_text = (
        "id,kind,name,lat,lon,capacity,info\n"
        "A1,school,Brown Middle,33.75,-84.42,900,\n"
        "A2,park,Rose Circle,33.74,-84.43,,playground\n"
        "A3,castle,Keep,33.74,-84.43,,\n"
        "A4,park,Lost,,,,\n"
    )
    records, errors = parse_assets(io.StringIO(csv_text))
    assert [r.id for r in records] == ["A1", "A2"]
    assert dict(records[0].details) == {"capacity": "900"}
    assert dict(records[1].details) == {"info": "playground"}
    assert len(errors) == 2


# --- census -----------------------------------------------------------------


def test_parse_census_factors_and_blanks():
    csv_text = (
        "region_id,region_kind,population,economic.poverty_rate,housing.pct_vacant\n"
        "NPU-K,npu,4200,22.5,\n"
        "k-west,neighborhood,2100,31.0,12.5\n"
    )
    records, errors = parse_census(io.StringIO(csv_text))
    assert errors == []
    npu, hood = records
    assert npu.population == 4200
    assert npu.factor("economic.poverty_rate") == 22.5
    assert npu.factor("housing.pct_vacant") is None
    assert hood.factor("housing.pct_vacant") == 12.5


def test_parse_census_rejects_bad_rows():
    csv_text = (
        "region_id,region_kind,population,economic.poverty_rate\n"
        "NPU-K,city,4200,22.5\n"
        "NPU-L,npu,nope,22.5\n"
        "NPU-T,npu,4200,very\n"
    )
    records, errors = parse_census(io.StringIO(csv_text))
    assert records == []
    assert len(errors) == 3


# --- ucr table ---------------------------------------------------------------


def test_default_ucr_table_covers_known_codes():
    assert UCR["0110"] is CrimeCategory.VIOLENT
    assert UCR["0630"] is CrimeCategory.THEFT
    assert UCR["2110"] is CrimeCategory.DRUGS_ALCOHOL
    assert len(UCR) >= 30


def test_ucr_table_from_stream():
    table = load_ucr_table(io.StringIO("# comment\n0110 = violent\n\n0630 = theft\n"))
    assert table == {"0110": CrimeCategory.VIOLENT, "0630": CrimeCategory.THEFT}


def test_ucr_table_rejects_bad_lines():
    with pytest.raises(SchemaError):
        load_ucr_table(io.StringIO("0110 violent\n"))
    with pytest.raises(SchemaError):
        load_ucr_table(io.StringIO("0110 = felony\n"))


# --- geocoders ----------------------------------------------------------------


def test_normalize_address_collapses_spacing_and_case():
    assert normalize_address("  12  main   st ") == "12 MAIN ST"


def test_stub_geocoder_is_deterministic_and_in_bbox():
    bbox = (33.62, -84.55, 33.90, -84.28)
    geocoder = StubGeocoder(bbox)
    a = geocoder.geocode("12 Main St")
    b = geocoder.geocode("12  main ST")
    assert a == b
    assert bbox[0] <= a.lat <= bbox[2]
    assert bbox[1] <= a.lon <= bbox[3]
    assert geocoder.geocode("13 Main St") != a


class CountingGeocoder:
    def __init__(self, inner):
        self.inner = inner
        self.calls = 0

    def geocode(self, address):
        self.calls += 1
        return self.inner.geocode(address)


def test_cached_geocoder_persists_hits_and_misses(tmp_path):
    path = str(tmp_path / "cache.json")
    counting = CountingGeocoder(StubGeocoder((33.0, -85.0, 34.0, -84.0)))
    cache = CachedGeocoder(path, counting)
    first = cache.geocode("12 Main St")
    again = cache.geocode("12 MAIN  ST")
    assert first == again
    assert counting.calls == 1
    cache.save()

    counting2 = CountingGeocoder(NullGeocoder())
    cache2 = CachedGeocoder(path, counting2)
    assert cache2.geocode("12 Main St") == first
    assert counting2.calls == 0


def test_cached_geocoder_remembers_misses(tmp_path):
    path = str(tmp_path / "cache.json")
    counting = CountingGeocoder(NullGeocoder())
    cache = CachedGeocoder(path, counting)
    assert cache.geocode("nowhere") is None
    assert cache.geocode("nowhere") is None
    assert counting.calls == 1


def test_geocode_missing_only_touches_unlocated():
    located = make_crime(1, "2014-01-05", lat=33.75, lon=-84.39)
    missing = make_crime(2, "2014-01-06")
    out, geocoded, failed = geocode_missing(
        [located, missing], StubGeocoder((33.0, -85.0, 34.0, -84.0))
    )
    assert out[0].location == located.location
    assert out[1].location is not None
    assert (geocoded, failed) == (1, 0)

    out2, geocoded2, failed2 = geocode_missing([missing], NullGeocoder())
    assert out2[0].location is None
    assert (geocoded2, failed2) == (0, 1)


# --- spatial join ---------------------------------------------------------------


def test_spatial_join_tags_npu_and_neighborhood():
    regions = [
        rect_region("NPU-K", "npu", -84.46, 33.70, -84.40, 33.80),
        rect_region("k-west", "neighborhood", -84.46, 33.70, -84.43, 33.80),
    ]
    inside = make_crime(1, "2014-01-05", lat=33.75, lon=-84.44)
    outside = make_crime(2, "2014-01-05", lat=33.60, lon=-84.44)
    unlocated = make_crime(3, "2014-01-05")
    joined, unjoined = spatial_join([inside, outside, unlocated], regions)
    assert joined[0].npu == "NPU-K"
    assert joined[0].neighborhood == "k-west"
    assert joined[1].npu is None
    assert joined[2].location is None and joined[2].npu is None
    assert unjoined == 1


# --- snapshot ---------------------------------------------------------------------


def _tiny_snapshot():
    regions = (
        rect_region("NPU-K", "npu", -84.46, 33.70, -84.40, 33.80),
        rect_region("k-west", "neighborhood", -84.46, 33.70, -84.43, 33.80),
    )
    census = (
        CensusProfile("NPU-K", "npu", 1000, (("economic.poverty_rate", 22.5),)),
        CensusProfile("k-west", "neighborhood", 400, ()),
    )
    crimes = (
        make_crime(1, "2014-01-05", lat=33.75, lon=-84.44, npu="NPU-K", neighborhood="k-west"),
        make_crime(2, "2014-02-05"),
    )
    return make_snapshot(crimes=crimes, census=census, regions=regions)


def test_snapshot_roundtrip_is_byte_identical():
    snapshot = _tiny_snapshot()
    doc = snapshot_to_doc(snapshot)
    again = snapshot_to_doc(snapshot_from_doc(doc))
    assert json.dumps(doc, sort_keys=True) == json.dumps(again, sort_keys=True)


def test_snapshot_file_roundtrip(tmp_path):
    snapshot = _tiny_snapshot()
    path = str(tmp_path / "snap.json")
    save_snapshot(snapshot, path)
    loaded = load_snapshot(path)
    assert loaded == snapshot


def test_save_twice_identical_modulo_built_at(tmp_path):
    snapshot = _tiny_snapshot()
    doc_a = snapshot_to_doc(snapshot)
    doc_b = snapshot_to_doc(
        build_snapshot(
            snapshot.crimes,
            snapshot.violations,
            snapshot.assets,
            snapshot.census,
            snapshot.regions,
            snapshot.ingest_report,
            built_at="2030-06-01T00:00:00+00:00",
        )
    )
    doc_a.pop("built_at")
    doc_b.pop("built_at")
    assert doc_a == doc_b


def test_snapshot_rejects_unknown_census_region():
    regions = (rect_region("NPU-K", "npu", -84.46, 33.70, -84.40, 33.80),)
    report = IngestReport(
        crimes=DatasetReport(0, 0, 0, 0, 0, 0),
        violations=DatasetReport(0, 0, 0, 0, 0, 0),
        assets=DatasetReport(0, 0, 0, 0, 0, 0),
        census=DatasetReport(1, 0, 1, 0, 0, 0),
    )
    census = parse_census(io.StringIO("region_id,region_kind,population\nNPU-Z,npu,10\n"))[0]
    with pytest.raises(ReferentialError):
        build_snapshot((), (), (), census, regions, report)


def test_snapshot_rejects_non_reconciling_report():
    report = IngestReport(
        crimes=DatasetReport(parsed=5, row_errors=0, located=3, geocoded=0, geocode_failed=1, unjoined=0),
        violations=DatasetReport(0, 0, 0, 0, 0, 0),
        assets=DatasetReport(0, 0, 0, 0, 0, 0),
        census=DatasetReport(0, 0, 0, 0, 0, 0),
    )
    with pytest.raises(ValidationError):
        build_snapshot((), (), (), (), (), report)


def test_snapshot_rejects_wrong_format_version():
    doc = snapshot_to_doc(_tiny_snapshot())
    doc["format_version"] = 99
    with pytest.raises(ValidationError):
        snapshot_from_doc(doc)


def test_load_snapshot_rejects_bad_json(tmp_path):
    path = tmp_path / "snap.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ValidationError):
        load_snapshot(str(path))


def test_snapshot_lookups():
    snapshot = _tiny_snapshot()
    assert snapshot.region_ids(RegionKind.NPU) == ("NPU-K",)
    assert snapshot.region_ids(RegionKind.NEIGHBORHOOD) == ("k-west",)
    assert snapshot.census_population("NPU-K", "npu") == 1000
    assert snapshot.census_population("NPU-Z", "npu") is None


# --- end-to-end over streams ------------------------------------------------------


def test_ingest_sources_end_to_end():
    regions = [
        rect_region("NPU-K", "npu", -84.46, 33.70, -84.40, 33.80),
        rect_region("k-west", "neighborhood", -84.46, 33.70, -84.43, 33.80, population=400),
    ]
    regions_text = json.dumps(regions_feature_collection(regions))
    crimes_text = CRIME_HEADER + (
        "C1,01/05/2014,01/04/2014 10:15 PM,12 MAIN ST,0630,33.75,-84.44\n"
        "C2,01/06/2014,01/05/2014,50 OAK AVE,0110,,\n"
    )
    violations_text = VIOLATION_HEADER + "V1,2014-01-05,,12 MAIN ST,open,Y,N,Y\n"
    assets_text = "id,kind,name,lat,lon\nA1,park,Rose Circle,33.75,-84.44\n"
    census_text = "region_id,region_kind,population\nk-west,neighborhood,400\n"

    result = ingest_sources(
        io.StringIO(crimes_text),
        io.StringIO(violations_text),
        io.StringIO(assets_text),
        io.StringIO(census_text),
        io.StringIO(regions_text),
        geocoder=StubGeocoder((33.70, -84.46, 33.80, -84.40)),
    )
    report = result.report
    assert report.crimes.parsed == 2
    assert report.crimes.geocoded == 1
    assert report.crimes.located == 2
    assert report.crimes.geocode_failed == 0
    assert report.violations.parsed == 1
    assert report.violations.geocoded == 1
    assert report.reconciles()
    assert result.snapshot.crimes[0].npu == "NPU-K"
    assert result.snapshot.crimes[0].neighborhood == "k-west"
    assert result.row_errors == {"crimes": (), "violations": (), "assets": (), "census": ()}


def test_ingest_sources_null_geocoder_leaves_missing():
    regions_text = json.dumps(
        regions_feature_collection([rect_region("NPU-K", "npu", -84.46, 33.70, -84.40, 33.80)])
    )
    crimes_text = CRIME_HEADER + "C1,01/05/2014,01/04/2014,12 MAIN ST,0630,,\n"
    result = ingest_sources(
        io.StringIO(crimes_text),
        io.StringIO(VIOLATION_HEADER),
        io.StringIO("id,kind,name,lat,lon\n"),
        io.StringIO("region_id,region_kind,population\n"),
        io.StringIO(regions_text),
    )
    assert result.report.crimes.geocode_failed == 1
    assert result.report.crimes.located == 0
    assert result.report.reconciles()
