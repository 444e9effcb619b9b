"""CSV parsers for the four source datasets.

Parsing never aborts on a bad row: malformed dates or coordinates land in
the row-error list with the file line number, and the remaining rows parse
normally. Only a missing required column is fatal (SchemaError naming it).

Dates accept ISO-8601 and US "MM/DD/YYYY [hh:mm[:ss] [AM|PM]]" forms, the
two conventions found in municipal exports.
"""

from __future__ import annotations

import csv
import datetime as dt
import enum
import math
import re
from dataclasses import dataclass
from importlib import resources
from typing import IO, Iterable

from ..errors import SchemaError, ValidationError
from ..geo import GeoPoint


class CrimeCategory(enum.Enum):
    DRUGS_ALCOHOL = "drugs_alcohol"
    SEX_CRIME = "sex_crime"
    THEFT = "theft"
    VIOLENT = "violent"
    OTHER = "other"


class AssetKind(enum.Enum):
    SCHOOL = "school"
    RELIGIOUS = "religious"
    PARK = "park"
    TRANSIT_STOP = "transit_stop"


@dataclass(frozen=True)
class CrimeRecord:
    id: str
    report_date: dt.date
    occurrence_date: dt.date
    occurrence_time: dt.time | None
    address: str
    ucr_code: str
    category: CrimeCategory
    location: GeoPoint | None = None
    npu: str | None = None
    neighborhood: str | None = None


@dataclass(frozen=True)
class CodeViolationRecord:
    id: str
    report_date: dt.date
    last_inspection_date: dt.date | None
    address: str
    status: str
    open_and_vacant: bool
    overgrowth: bool
    active_utilities: bool
    location: GeoPoint | None = None
    npu: str | None = None
    neighborhood: str | None = None


@dataclass(frozen=True)
class Asset:
    id: str
    kind: AssetKind
    name: str
    location: GeoPoint
    details: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class CensusProfile:
    region_id: str
    region_kind: str  # "npu" | "neighborhood"
    population: int
    factors: tuple[tuple[str, float], ...] = ()

    def factor(self, name: str) -> float | None:
        for key, value in self.factors:
            if key == name:
                return value
        return None


@dataclass(frozen=True)
class RowError:
    line: int
    reason: str


_US_DATETIME = re.compile(
    r"^(?P<m>\d{1,2})/(?P<d>\d{1,2})/(?P<y>\d{4})"
    r"(?:\s+(?P<hh>\d{1,2}):(?P<mm>\d{2})(?::(?P<ss>\d{2}))?(?:\s*(?P<ampm>[AP]M))?)?$",
    re.IGNORECASE,
)


def parse_datetime(text: str) -> tuple[dt.date, dt.time | None]:
    """Parse a date with optional time-of-day; raises ValueError when malformed."""
    s = text.strip()
    if not s:
        raise ValueError("empty date")
    m = _US_DATETIME.match(s)
    if m:
        date = dt.date(int(m["y"]), int(m["m"]), int(m["d"]))
        if m["hh"] is None:
            return date, None
        hour = int(m["hh"])
        ampm = (m["ampm"] or "").upper()
        if ampm:
            if not 1 <= hour <= 12:
                raise ValueError(f"bad 12-hour value in {text!r}")
            hour = hour % 12 + (12 if ampm == "PM" else 0)
        return date, dt.time(hour, int(m["mm"]), int(m["ss"] or 0))
    try:
        return dt.date.fromisoformat(s), None
    except ValueError:
        pass
    d = dt.datetime.fromisoformat(s)  # raises ValueError when not ISO
    return d.date(), d.time()


def parse_date(text: str) -> dt.date:
    return parse_datetime(text)[0]


def _parse_location(lat_text: str | None, lon_text: str | None) -> GeoPoint | None:
    """Blank pair -> None; one blank or a bad number -> ValueError."""
    lat_s = (lat_text or "").strip()
    lon_s = (lon_text or "").strip()
    if not lat_s and not lon_s:
        return None
    if not lat_s or not lon_s:
        raise ValueError("one of lat/lon is blank")
    lat = float(lat_s)
    lon = float(lon_s)
    try:
        return GeoPoint(lat, lon)
    except ValidationError as exc:
        raise ValueError(str(exc)) from None


def _reader(stream: IO[str], required: Iterable[str]) -> csv.DictReader:
    reader = csv.DictReader(stream)
    header = reader.fieldnames or []
    for column in required:
        if column not in header:
            raise SchemaError(f"required column {column!r} is missing", column=column)
    return reader


def load_ucr_table(source=None) -> dict[str, CrimeCategory]:
    """Read the ucr_code -> category mapping (one "code = category" per line).

    Blank lines and "#" comments are ignored. With no source, the packaged
    default table is used.
    """
    if source is None:
        text = resources.files("safety_dash").joinpath("data/ucr_categories.txt").read_text("utf-8")
    elif hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    table: dict[str, CrimeCategory] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaError(f"ucr mapping line {lineno}: expected 'code = category', got {raw!r}")
        code, _, category = line.partition("=")
        try:
            table[code.strip()] = CrimeCategory(category.strip())
        except ValueError:
            raise SchemaError(f"ucr mapping line {lineno}: unknown category {category.strip()!r}") from None
    return table


def categorize(ucr_code: str, table: dict[str, CrimeCategory]) -> CrimeCategory:
    return table.get(ucr_code.strip(), CrimeCategory.OTHER)


def parse_crimes(
    stream: IO[str], ucr_table: dict[str, CrimeCategory]
) -> tuple[list[CrimeRecord], list[RowError]]:
    reader = _reader(stream, ["id", "report_date", "occurrence_date", "address", "ucr_code"])
    records: list[CrimeRecord] = []
    errors: list[RowError] = []
    for row in reader:
        line = reader.line_num
        try:
            report_date = parse_date(row["report_date"])
            occ_date, occ_time = parse_datetime(row["occurrence_date"])
            location = _parse_location(row.get("lat"), row.get("lon"))
        except (ValueError, TypeError) as exc:
            errors.append(RowError(line, str(exc)))
            continue
        ucr = (row["ucr_code"] or "").strip()
        records.append(
            CrimeRecord(
                id=(row["id"] or "").strip(),
                report_date=report_date,
                occurrence_date=occ_date,
                occurrence_time=occ_time,
                address=(row["address"] or "").strip(),
                ucr_code=ucr,
                category=categorize(ucr, ucr_table),
                location=location,
            )
        )
    return records, errors


_TRUE_FLAGS = {"y", "yes", "true"}
_KNOWN_FLAGS = _TRUE_FLAGS | {"n", "no", "false", ""}


def _flag(value: str | None) -> tuple[bool, bool]:
    """Collapse a tri-state flag column to bool; returns (value, was_unknown)."""
    s = (value or "").strip().lower()
    return s in _TRUE_FLAGS, s not in _KNOWN_FLAGS


def parse_violations(stream: IO[str]) -> tuple[list[CodeViolationRecord], list[RowError], int]:
    """Returns (records, row errors, count of unknown flag values coerced to false)."""
    reader = _reader(
        stream, ["id", "report_date", "address", "status", "open_and_vacant", "overgrowth", "active_utilities"]
    )
    records: list[CodeViolationRecord] = []
    errors: list[RowError] = []
    unknown_flags = 0
    for row in reader:
        line = reader.line_num
        try:
            report_date = parse_date(row["report_date"])
            inspection_text = (row.get("last_inspection_date") or "").strip()
            last_inspection = parse_date(inspection_text) if inspection_text else None
            location = _parse_location(row.get("lat"), row.get("lon"))
        except (ValueError, TypeError) as exc:
            errors.append(RowError(line, str(exc)))
            continue
        flags = []
        for column in ("open_and_vacant", "overgrowth", "active_utilities"):
            value, unknown = _flag(row[column])
            flags.append(value)
            unknown_flags += unknown
        records.append(
            CodeViolationRecord(
                id=(row["id"] or "").strip(),
                report_date=report_date,
                last_inspection_date=last_inspection,
                address=(row["address"] or "").strip(),
                status=(row["status"] or "").strip(),
                open_and_vacant=flags[0],
                overgrowth=flags[1],
                active_utilities=flags[2],
                location=location,
            )
        )
    return records, errors, unknown_flags


_ASSET_CORE_COLUMNS = ("id", "kind", "name", "lat", "lon")


def parse_assets(stream: IO[str]) -> tuple[list[Asset], list[RowError]]:
    reader = _reader(stream, _ASSET_CORE_COLUMNS)
    detail_columns = [c for c in (reader.fieldnames or []) if c not in _ASSET_CORE_COLUMNS]
    records: list[Asset] = []
    errors: list[RowError] = []
    for row in reader:
        line = reader.line_num
        try:
            kind = AssetKind((row["kind"] or "").strip())
        except ValueError:
            errors.append(RowError(line, f"unknown asset kind {row['kind']!r}"))
            continue
        try:
            location = _parse_location(row.get("lat"), row.get("lon"))
            if location is None:
                raise ValueError("asset rows require lat and lon")
        except ValueError as exc:
            errors.append(RowError(line, str(exc)))
            continue
        details = tuple(
            (c, (row.get(c) or "").strip()) for c in detail_columns if (row.get(c) or "").strip()
        )
        records.append(
            Asset(
                id=(row["id"] or "").strip(),
                kind=kind,
                name=(row["name"] or "").strip(),
                location=location,
                details=details,
            )
        )
    return records, errors


def parse_census(stream: IO[str]) -> tuple[list[CensusProfile], list[RowError]]:
    reader = _reader(stream, ["region_id", "region_kind", "population"])
    factor_columns = [
        c for c in (reader.fieldnames or []) if c not in ("region_id", "region_kind", "population")
    ]
    records: list[CensusProfile] = []
    errors: list[RowError] = []
    for row in reader:
        line = reader.line_num
        kind = (row["region_kind"] or "").strip()
        if kind not in ("npu", "neighborhood"):
            errors.append(RowError(line, f"unknown region kind {row['region_kind']!r}"))
            continue
        try:
            population = int((row["population"] or "").strip() or "0")
            if population < 0:
                raise ValueError("population must be >= 0")
        except ValueError as exc:
            errors.append(RowError(line, f"bad population: {exc}"))
            continue
        factors = []
        bad_factor = None
        for column in factor_columns:
            text = (row.get(column) or "").strip()
            if not text:
                continue  # missing value: factor absent for this region
            try:
                value = float(text)
                if not math.isfinite(value):
                    raise ValueError("not finite")
            except ValueError:
                bad_factor = column
                break
            factors.append((column, value))
        if bad_factor is not None:
            errors.append(RowError(line, f"bad factor value in column {bad_factor!r}"))
            continue
        records.append(
            CensusProfile(
                region_id=(row["region_id"] or "").strip(),
                region_kind=kind,
                population=population,
                factors=tuple(factors),
            )
        )
    return records, errors
