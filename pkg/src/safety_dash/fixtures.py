"""Deterministic synthetic data: region polygons, crimes, violations, assets, census.

Real municipal exports are not redistributable, so the CLI can fabricate a
city with the same shape: a rectangular city split into a 4 x 3 grid of NPUs
(letters A-H, K, L, T, V), two neighborhoods per NPU, crime skewed toward
the westside NPUs, and roughly 1.1% of crime rows missing coordinates.
Identical arguments produce byte-identical files.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import random
from pathlib import Path

CITY_LON_MIN, CITY_LON_MAX = -84.55, -84.28
CITY_LAT_MIN, CITY_LAT_MAX = 33.62, 33.90
NPU_GRID = (
    ("A", "B", "C", "D"),
    ("E", "F", "G", "H"),
    ("K", "L", "T", "V"),
)
MISSING_COORD_RATE = 0.011
CRIME_DATE_RANGE = (dt.date(2008, 1, 1), dt.date(2015, 12, 31))
VIOLATION_DATE_RANGE = (dt.date(2011, 1, 1), dt.date(2015, 12, 31))

# (ucr code, sampling weight); codes match the packaged category table, with
# two deliberately unmapped codes so the OTHER fallback is exercised
_UCR_WEIGHTS = (
    ("0110", 2), ("0210", 2), ("0310", 6), ("0320", 4), ("0330", 3),
    ("0410", 4), ("0420", 3), ("0430", 3), ("0440", 2),
    ("0510", 10), ("0520", 6), ("0610", 4), ("0630", 8), ("0640", 12),
    ("0650", 5), ("0660", 4), ("0670", 7), ("0710", 9), ("0720", 2),
    ("1610", 1), ("1620", 1), ("1710", 2),
    ("1810", 4), ("1820", 7), ("2110", 3), ("2210", 1), ("2310", 2),
    ("0910", 1), ("1410", 3), ("2610", 2),
    ("7399", 1), ("9999", 1),
)

_STREETS = (
    "Peachtree St NW", "Joseph E Lowery Blvd NW", "Donald Lee Hollowell Pkwy NW",
    "Martin Luther King Jr Dr SW", "North Ave NW", "Simpson Rd NW",
    "Northside Dr NW", "West Lake Ave NW", "Cascade Rd SW", "Boone Blvd NW",
    "Howell Mill Rd NW", "Marietta St NW", "Metropolitan Pkwy SW",
    "Memorial Dr SE", "Piedmont Ave NE", "Chappell Rd NW",
)

_STATUSES = ("open", "closed", "in_court", "compliance")
_STATUS_WEIGHTS = (35, 40, 10, 15)
# tri-state flag spellings; the "U" share is what exercises unknown handling
_FLAG_VALUES = ("Y", "yes", "TRUE", "N", "no", "FALSE", "", "U")
_FLAG_WEIGHTS = (12, 8, 5, 30, 20, 10, 13, 2)

_SCHOOL_LEVELS = ("Elementary", "Middle", "High")
_DENOMINATIONS = ("Baptist", "Methodist", "Catholic", "AME", "Non-denominational")


def _rect_ring(lon_w: float, lat_s: float, lon_e: float, lat_n: float) -> list[list[float]]:
    """Closed counter-clockwise rectangle in GeoJSON (lon, lat) order."""
    return [
        [lon_w, lat_s],
        [lon_e, lat_s],
        [lon_e, lat_n],
        [lon_w, lat_n],
        [lon_w, lat_s],
    ]


def _feature(region_id: str, kind: str, name: str, ring: list[list[float]]) -> dict:
    return {
        "type": "Feature",
        "properties": {"id": region_id, "kind": kind, "name": name},
        "geometry": {"type": "Polygon", "coordinates": [ring]},
    }


def _build_regions() -> tuple[dict, dict[str, tuple[float, float, float, float]], list[str]]:
    """The GeoJSON document plus each neighborhood's (lon_w, lat_s, lon_e, lat_n)."""
    cols = len(NPU_GRID[0])
    rows = len(NPU_GRID)
    lon_step = (CITY_LON_MAX - CITY_LON_MIN) / cols
    lat_step = (CITY_LAT_MAX - CITY_LAT_MIN) / rows
    features = [
        _feature("atlanta", "city", "Atlanta", _rect_ring(CITY_LON_MIN, CITY_LAT_MIN, CITY_LON_MAX, CITY_LAT_MAX))
    ]
    hood_boxes: dict[str, tuple[float, float, float, float]] = {}
    hood_ids: list[str] = []
    for row_idx, row in enumerate(NPU_GRID):
        lat_s = CITY_LAT_MIN + row_idx * lat_step
        lat_n = lat_s + lat_step
        for col_idx, letter in enumerate(row):
            lon_w = CITY_LON_MIN + col_idx * lon_step
            lon_e = lon_w + lon_step
            features.append(_feature(f"NPU-{letter}", "npu", f"NPU {letter}", _rect_ring(lon_w, lat_s, lon_e, lat_n)))
            lon_mid = (lon_w + lon_e) / 2
            for suffix, box in (("west", (lon_w, lat_s, lon_mid, lat_n)), ("east", (lon_mid, lat_s, lon_e, lat_n))):
                hood_id = f"{letter.lower()}-{suffix}"
                features.append(_feature(hood_id, "neighborhood", f"{letter} {suffix.title()}", _rect_ring(*box)))
                hood_boxes[hood_id] = box
                hood_ids.append(hood_id)
    return {"type": "FeatureCollection", "features": features}, hood_boxes, hood_ids


def _random_date(rng: random.Random, lo: dt.date, hi: dt.date) -> dt.date:
    return lo + dt.timedelta(days=rng.randrange((hi - lo).days + 1))


def _us_date(d: dt.date) -> str:
    return f"{d.month:02d}/{d.day:02d}/{d.year:04d}"


def _us_time(minutes: int) -> str:
    hour24, minute = divmod(minutes, 60)
    half = "AM" if hour24 < 12 else "PM"
    hour12 = hour24 % 12 or 12
    return f"{hour12:02d}:{minute:02d} {half}"


def _address(rng: random.Random) -> str:
    return f"{rng.randrange(1, 4000)} {rng.choice(_STREETS)}"


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def generate_fixture(out_dir, crimes: int = 10000, violations: int = 2000, seed: int = 0) -> dict[str, Path]:
    """Write the five fixture files into ``out_dir`` and return their paths."""
    if crimes < 0 or violations < 0:
        raise ValueError("crimes and violations must be >= 0")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)

    regions_doc, hood_boxes, hood_ids = _build_regions()
    paths = {
        "regions": out / "regions.geojson",
        "crimes": out / "crimes.csv",
        "violations": out / "violations.csv",
        "assets": out / "assets.csv",
        "census": out / "census.csv",
    }
    with open(paths["regions"], "w", encoding="utf-8") as fh:
        json.dump(regions_doc, fh, indent=2, sort_keys=True)
        fh.write("\n")

    # per-neighborhood crime intensity, heavier on the westside NPUs like the
    # real data this mimics
    weights = {}
    for hood_id in hood_ids:
        base = rng.uniform(0.5, 3.0)
        if hood_id[0] in ("k", "l", "t"):
            base *= 2.5
        weights[hood_id] = base
    weight_list = [weights[h] for h in hood_ids]

    def point_in(hood_id: str) -> tuple[float, float]:
        lon_w, lat_s, lon_e, lat_n = hood_boxes[hood_id]
        return rng.uniform(lat_s, lat_n), rng.uniform(lon_w, lon_e)

    ucr_codes = [code for code, _ in _UCR_WEIGHTS]
    ucr_weights = [weight for _, weight in _UCR_WEIGHTS]

    crime_rows = []
    for i in range(crimes):
        occurrence = _random_date(rng, *CRIME_DATE_RANGE)
        report = occurrence + dt.timedelta(days=rng.randrange(4))
        code = rng.choices(ucr_codes, ucr_weights)[0]
        hood = rng.choices(hood_ids, weight_list)[0]
        lat, lon = point_in(hood)
        time_text = _us_time(rng.randrange(24 * 60))
        if rng.random() < MISSING_COORD_RATE:
            lat_text = lon_text = ""
        else:
            lat_text, lon_text = f"{lat:.6f}", f"{lon:.6f}"
        crime_rows.append([
            f"C{i:07d}",
            _us_date(report),
            f"{_us_date(occurrence)} {time_text}",
            _address(rng),
            code,
            lat_text,
            lon_text,
        ])
    _write_csv(paths["crimes"], ["id", "report_date", "occurrence_date", "address", "ucr_code", "lat", "lon"], crime_rows)

    # violations carry no coordinates at all; ingest must geocode every row
    violation_rows = []
    for i in range(violations):
        report = _random_date(rng, *VIOLATION_DATE_RANGE)
        inspected = ""
        if rng.random() < 0.7:
            inspected = (report + dt.timedelta(days=rng.randrange(91))).isoformat()
        violation_rows.append([
            f"V{i:06d}",
            report.isoformat(),
            inspected,
            _address(rng),
            rng.choices(_STATUSES, _STATUS_WEIGHTS)[0],
            rng.choices(_FLAG_VALUES, _FLAG_WEIGHTS)[0],
            rng.choices(_FLAG_VALUES, _FLAG_WEIGHTS)[0],
            rng.choices(_FLAG_VALUES, _FLAG_WEIGHTS)[0],
        ])
    _write_csv(
        paths["violations"],
        ["id", "report_date", "last_inspection_date", "address", "status",
         "open_and_vacant", "overgrowth", "active_utilities"],
        violation_rows,
    )

    def city_point() -> tuple[str, str]:
        lat = rng.uniform(CITY_LAT_MIN, CITY_LAT_MAX)
        lon = rng.uniform(CITY_LON_MIN, CITY_LON_MAX)
        return f"{lat:.6f}", f"{lon:.6f}"

    asset_rows = []
    serial = 0
    for _ in range(12):
        lat, lon = city_point()
        level = rng.choice(_SCHOOL_LEVELS)
        asset_rows.append([f"A{serial:03d}", "school", f"{rng.choice(_STREETS).split(' ')[0]} {level} School",
                           lat, lon, level, str(rng.randrange(200, 2001))])
        serial += 1
    for _ in range(10):
        lat, lon = city_point()
        denomination = rng.choice(_DENOMINATIONS)
        asset_rows.append([f"A{serial:03d}", "religious", f"{rng.choice(_STREETS).split(' ')[0]} Church",
                           lat, lon, denomination, ""])
        serial += 1
    for _ in range(8):
        lat, lon = city_point()
        asset_rows.append([f"A{serial:03d}", "park", f"{rng.choice(_STREETS).split(' ')[0]} Park",
                           lat, lon, "greenspace", str(rng.randrange(2, 120))])
        serial += 1
    for _ in range(12):
        lat, lon = city_point()
        asset_rows.append([f"A{serial:03d}", "transit_stop", f"Stop {serial}",
                           lat, lon, f"Route {rng.randrange(1, 100)}", ""])
        serial += 1
    _write_csv(paths["assets"], ["id", "kind", "name", "lat", "lon", "info", "capacity"], asset_rows)

    # census: factor values loosely track the crime weights so correlations
    # on fixture data are visibly nonzero; ~5% of neighborhood cells are blank
    factor_columns = [
        "population.density", "population.pct_under_18",
        "commute.pct_transit", "commute.mean_minutes",
        "economic.poverty_rate", "economic.median_income",
        "education.pct_bachelors", "housing.pct_vacant",
    ]
    census_rows = []
    for row in NPU_GRID:
        for letter in row:
            census_rows.append([
                f"NPU-{letter}", "npu", str(rng.randrange(8000, 35001)),
                f"{rng.uniform(800, 4000):.2f}", f"{rng.uniform(15, 35):.2f}",
                f"{rng.uniform(2, 30):.2f}", f"{rng.uniform(15, 45):.2f}",
                f"{rng.uniform(5, 40):.2f}", f"{rng.uniform(22000, 95000):.2f}",
                f"{rng.uniform(8, 60):.2f}", f"{rng.uniform(3, 30):.2f}",
            ])
    for hood_id in hood_ids:
        weight = weights[hood_id]
        values = [
            f"{rng.uniform(800, 4000):.2f}",
            f"{rng.uniform(15, 35):.2f}",
            f"{6 + 4 * weight + rng.uniform(-2, 2):.2f}",
            f"{rng.uniform(15, 45):.2f}",
            f"{8 + 6 * weight + rng.uniform(-2, 2):.2f}",
            f"{max(18000.0, 80000 - 8000 * weight + rng.uniform(-4000, 4000)):.2f}",
            f"{rng.uniform(8, 60):.2f}",
            f"{5 + 8 * weight + rng.uniform(-1, 1):.2f}",
        ]
        values = [("" if rng.random() < 0.05 else value) for value in values]
        census_rows.append([hood_id, "neighborhood", str(rng.randrange(1500, 9001))] + values)
    _write_csv(paths["census"], ["region_id", "region_kind", "population"] + factor_columns, census_rows)

    return paths
