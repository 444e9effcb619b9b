"""Time-bucketed counts, per-NPU totals, and type shares over a snapshot.

Every operation is a pure read: callers in any number of threads may share
one snapshot. Crimes bucket on their occurrence date, code violations on
their report date.
"""

from __future__ import annotations

import datetime as dt
import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .errors import DomainError, ValidationError
from .geo import RegionKind
from .ingest.snapshot import DataSnapshot

WESTSIDE_LETTERS = frozenset({"K", "L", "T"})


class TimeGranularity(enum.Enum):
    YEAR = "year"
    QUARTER = "quarter"
    MONTH = "month"
    WEEK = "week"
    WEEKDAY = "weekday"
    DAY = "day"


class DatasetSelector(enum.Enum):
    CRIMES = "crimes"
    VIOLATIONS = "violations"
    BOTH = "both"


@dataclass(frozen=True)
class Scope:
    """city, one NPU, or the three-NPU Westside."""

    kind: str
    npu_id: str | None = None

    def __post_init__(self):
        if self.kind not in ("city", "npu", "westside"):
            raise ValidationError(f"unknown scope kind {self.kind!r}")
        if self.kind == "npu" and not self.npu_id:
            raise DomainError("bad_scope", "npu scope requires an NPU id")
        if self.kind != "npu" and self.npu_id is not None:
            raise ValidationError(f"{self.kind} scope takes no NPU id")

    @classmethod
    def city(cls) -> "Scope":
        return cls("city")

    @classmethod
    def npu(cls, npu_id: str) -> "Scope":
        return cls("npu", npu_id)

    @classmethod
    def westside(cls) -> "Scope":
        return cls("westside")


@dataclass(frozen=True)
class TimeSeries:
    granularity: TimeGranularity
    points: tuple[tuple[str, int], ...]

    def total(self) -> int:
        return sum(count for _, count in self.points)

    def as_dict(self) -> dict[str, int]:
        return dict(self.points)


@dataclass(frozen=True)
class NpuCount:
    npu: str
    value: int | float
    westside: bool


def npu_letter(npu_id: str) -> str:
    """The NPU letter with any "NPU-" prefix stripped."""
    text = npu_id.strip()
    if text.upper().startswith("NPU-"):
        text = text[4:]
    return text.upper()


def is_westside_npu(npu_id: str) -> bool:
    return npu_letter(npu_id) in WESTSIDE_LETTERS


# --- parsing helpers shared with the service and CLI ---------------------------


def parse_granularity(text: str) -> TimeGranularity:
    try:
        return TimeGranularity(text.strip().lower())
    except ValueError:
        raise DomainError("bad_granularity", f"unknown granularity {text!r}") from None


def parse_dataset(text: str) -> DatasetSelector:
    try:
        return DatasetSelector(text.strip().lower())
    except ValueError:
        raise DomainError("bad_dataset", f"unknown dataset {text!r}") from None


def parse_scope(text: str) -> Scope:
    """Grammar: "city" | "westside" | "npu:<id>"."""
    s = text.strip()
    low = s.lower()
    if low == "city":
        return Scope.city()
    if low == "westside":
        return Scope.westside()
    if low.startswith("npu:"):
        return Scope.npu(s[4:].strip())
    raise DomainError("bad_scope", f"unknown scope {text!r}")


def parse_date_param(text: str, name: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError:
        raise DomainError("bad_range", f"{name} must be an ISO date, got {text!r}") from None


def resolve_npu(snapshot: DataSnapshot, raw: str) -> str:
    """Canonical NPU region id for a user-supplied id ("K" or "NPU-K")."""
    known = snapshot.region_ids(RegionKind.NPU)
    wanted = npu_letter(raw)
    for npu_id in known:
        if npu_letter(npu_id) == wanted or npu_id == raw.strip():
            return npu_id
    raise DomainError("unknown_npu", f"no NPU {raw!r} in this snapshot")


# --- calendar bucketing ---------------------------------------------------------

_WEEKDAY_NAMES = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")


def bucket_key(t: dt.date, g: TimeGranularity) -> str:
    if g is TimeGranularity.YEAR:
        return f"{t.year:04d}"
    if g is TimeGranularity.QUARTER:
        return f"{t.year:04d}-Q{(t.month - 1) // 3 + 1}"
    if g is TimeGranularity.MONTH:
        return f"{t.year:04d}-{t.month:02d}"
    if g is TimeGranularity.WEEK:
        iso_year, iso_week, _ = t.isocalendar()
        return f"{iso_year:04d}-W{iso_week:02d}"
    if g is TimeGranularity.WEEKDAY:
        n = t.isoweekday()
        return f"{n}-{_WEEKDAY_NAMES[n - 1]}"
    return t.isoformat()


def next_bucket(label: str, g: TimeGranularity) -> str:
    """The immediate successor bucket label. Used to materialize zero counts."""
    if g is TimeGranularity.YEAR:
        return f"{int(label) + 1:04d}"
    if g is TimeGranularity.QUARTER:
        year, q = label.split("-Q")
        return f"{int(year) + 1:04d}-Q1" if q == "4" else f"{year}-Q{int(q) + 1}"
    if g is TimeGranularity.MONTH:
        year, month = (int(part) for part in label.split("-"))
        return f"{year + 1:04d}-01" if month == 12 else f"{year:04d}-{month + 1:02d}"
    if g is TimeGranularity.WEEK:
        year, week = label.split("-W")
        monday = dt.date.fromisocalendar(int(year), int(week), 1)
        return bucket_key(monday + dt.timedelta(days=7), g)
    if g is TimeGranularity.WEEKDAY:
        n = int(label.split("-")[0]) % 7  # cyclic: Sunday wraps to Monday
        return f"{n + 1}-{_WEEKDAY_NAMES[n]}"
    return (dt.date.fromisoformat(label) + dt.timedelta(days=1)).isoformat()


def _fill_series(counts: Counter, g: TimeGranularity) -> tuple[tuple[str, int], ...]:
    """Dense (label, count) points from the min to the max occupied bucket."""
    if not counts:
        return ()
    first, last = min(counts), max(counts)
    points = []
    label = first
    while True:
        points.append((label, counts.get(label, 0)))
        if label == last:
            return tuple(points)
        label = next_bucket(label, g)
        # a successor bug would loop forever; the densest real span is days
        if len(points) > 1_000_000:
            raise RuntimeError("bucket successor failed to reach series end")


# --- record streams --------------------------------------------------------------

DateRange = tuple[dt.date | None, dt.date | None]


def _in_range(d: dt.date, date_range: DateRange | None) -> bool:
    if date_range is None:
        return True
    lo, hi = date_range
    if lo is not None and d < lo:
        return False
    if hi is not None and d > hi:
        return False
    return True


def _dated(snapshot: DataSnapshot, ds: DatasetSelector) -> Iterator[tuple[dt.date, str | None]]:
    """(event date, npu tag) for every record the selector covers."""
    if ds in (DatasetSelector.CRIMES, DatasetSelector.BOTH):
        for crime in snapshot.crimes:
            yield crime.occurrence_date, crime.npu
    if ds in (DatasetSelector.VIOLATIONS, DatasetSelector.BOTH):
        for violation in snapshot.violations:
            yield violation.report_date, violation.npu


def _typed(snapshot: DataSnapshot, ds: DatasetSelector, fine: bool) -> Iterator[tuple[str, str | None]]:
    """(type label, npu tag): crime category (or UCR code), violation status."""
    if ds in (DatasetSelector.CRIMES, DatasetSelector.BOTH):
        for crime in snapshot.crimes:
            yield (crime.ucr_code if fine else crime.category.value), crime.npu
    if ds in (DatasetSelector.VIOLATIONS, DatasetSelector.BOTH):
        for violation in snapshot.violations:
            yield violation.status, violation.npu


def _scope_test(snapshot: DataSnapshot, scope: Scope):
    if scope.kind == "city":
        return lambda npu: True
    if scope.kind == "westside":
        return lambda npu: npu is not None and is_westside_npu(npu)
    target = resolve_npu(snapshot, scope.npu_id)
    return lambda npu: npu == target


# --- the three figure computations ------------------------------------------------


def timeseries(
    snapshot: DataSnapshot,
    ds: DatasetSelector,
    scope: Scope,
    g: TimeGranularity,
    date_range: DateRange | None = None,
) -> tuple[TimeSeries, TimeSeries]:
    """Bucketed counts for the scope and, for comparison, the whole city."""
    in_scope = _scope_test(snapshot, scope)
    scope_counts: Counter = Counter()
    city_counts: Counter = Counter()
    for date, npu in _dated(snapshot, ds):
        if not _in_range(date, date_range):
            continue
        label = bucket_key(date, g)
        city_counts[label] += 1
        if in_scope(npu):
            scope_counts[label] += 1
    return (
        TimeSeries(g, _fill_series(scope_counts, g)),
        TimeSeries(g, _fill_series(city_counts, g)),
    )


def counts_by_npu(
    snapshot: DataSnapshot,
    ds: DatasetSelector,
    date_range: DateRange | None = None,
    per_capita: bool = False,
) -> tuple[NpuCount, ...]:
    """Per-NPU totals, alphabetical, optionally per 1,000 residents."""
    counts: Counter = Counter()
    for date, npu in _dated(snapshot, ds):
        if npu is not None and _in_range(date, date_range):
            counts[npu] += 1
    rows = []
    for npu_id in snapshot.region_ids(RegionKind.NPU):
        count = counts.get(npu_id, 0)
        if per_capita:
            population = snapshot.census_population(npu_id, "npu")
            if population is None or population <= 0:
                if count > 0:
                    raise DomainError(
                        "missing_population",
                        f"per-capita needs a census population for {npu_id}",
                    )
                value: int | float = 0.0
            else:
                value = count * 1000 / population
        else:
            value = count
        rows.append(NpuCount(npu_id, value, is_westside_npu(npu_id)))
    return tuple(rows)


def type_share(
    snapshot: DataSnapshot,
    ds: DatasetSelector,
    scope: Scope,
    fine: bool = False,
) -> tuple[tuple[str, float], ...]:
    """Percent of the scope total per type, largest share first."""
    in_scope = _scope_test(snapshot, scope)
    counts: Counter = Counter()
    for type_label, npu in _typed(snapshot, ds, fine):
        if in_scope(npu):
            counts[type_label] += 1
    total = sum(counts.values())
    if total == 0:
        return ()
    shares = [(name, 100.0 * count / total) for name, count in counts.items()]
    shares.sort(key=lambda item: (-item[1], item[0]))
    return tuple(shares)
