"""Pearson correlation of census factors against crime measures, per neighborhood."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .aggregate import is_westside_npu
from .errors import DomainError, UndefinedCorrelationError
from .geo import RegionKind, assign_region, ring_centroid
from .ingest.parsers import CrimeCategory
from .ingest.snapshot import DataSnapshot

CAVEAT = "correlation does not necessarily imply causation"


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample correlation coefficient, clamped to [-1, 1] against rounding."""
    n = len(xs)
    if n != len(ys):
        raise DomainError("bad_vectors", f"length mismatch: {n} vs {len(ys)}")
    if n < 2:
        raise DomainError("bad_vectors", f"need at least 2 pairs, got {n}")
    if not all(map(math.isfinite, xs)) or not all(map(math.isfinite, ys)):
        raise DomainError("bad_vectors", "inputs must be finite")
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    sxx = math.fsum((x - mean_x) ** 2 for x in xs)
    syy = math.fsum((y - mean_y) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("a vector with zero variance has no correlation")
    sxy = math.fsum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    return max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))


@dataclass(frozen=True)
class CrimeMeasure:
    """violent_pct, total_per_1000, or category_per_1000 for one category."""

    kind: str
    category: CrimeCategory | None = None

    def __post_init__(self):
        if self.kind not in ("violent_pct", "total_per_1000", "category_per_1000"):
            raise DomainError("bad_measure", f"unknown measure {self.kind!r}")
        if (self.kind == "category_per_1000") != (self.category is not None):
            raise DomainError("bad_measure", "category_per_1000 takes a category, others do not")

    def label(self) -> str:
        if self.category is not None:
            return f"{self.kind}:{self.category.value}"
        return self.kind

    @classmethod
    def violent_pct(cls) -> "CrimeMeasure":
        return cls("violent_pct")

    @classmethod
    def total_per_1000(cls) -> "CrimeMeasure":
        return cls("total_per_1000")

    @classmethod
    def category_per_1000(cls, category: CrimeCategory | str) -> "CrimeMeasure":
        if isinstance(category, str):
            try:
                category = CrimeCategory(category)
            except ValueError:
                raise DomainError("bad_measure", f"unknown crime category {category!r}") from None
        return cls("category_per_1000", category)


def parse_measure(text: str) -> CrimeMeasure:
    """Grammar: "violent_pct" | "total_per_1000" | "category_per_1000:<category>"."""
    s = text.strip().lower()
    if s == "violent_pct":
        return CrimeMeasure.violent_pct()
    if s == "total_per_1000":
        return CrimeMeasure.total_per_1000()
    if s.startswith("category_per_1000:"):
        return CrimeMeasure.category_per_1000(s.split(":", 1)[1])
    raise DomainError("bad_measure", f"unknown measure {text!r}")


@dataclass(frozen=True)
class CorrelationResult:
    factor: str
    measure: CrimeMeasure
    scope: str
    r: float | None
    n: int
    excluded: int


def crime_measure(snapshot: DataSnapshot, neighborhood_id: str, m: CrimeMeasure) -> float | None:
    """The measure's value for one neighborhood, or None when undefined there."""
    if neighborhood_id not in snapshot.region_ids(RegionKind.NEIGHBORHOOD):
        raise DomainError("unknown_neighborhood", f"no neighborhood {neighborhood_id!r} in this snapshot")
    crimes = [c for c in snapshot.crimes if c.neighborhood == neighborhood_id]
    if m.kind == "violent_pct":
        if not crimes:
            return None
        violent = sum(1 for c in crimes if c.category is CrimeCategory.VIOLENT)
        return 100.0 * violent / len(crimes)
    population = snapshot.census_population(neighborhood_id, "neighborhood")
    if population is None or population <= 0:
        return None
    if m.kind == "total_per_1000":
        return len(crimes) * 1000 / population
    return sum(1 for c in crimes if c.category is m.category) * 1000 / population


def westside_neighborhood_ids(snapshot: DataSnapshot) -> tuple[str, ...]:
    """Neighborhoods whose outer-ring centroid falls in NPU K, L, or T."""
    npus = [r for r in snapshot.regions if r.kind is RegionKind.NPU]
    ids = []
    for region in snapshot.regions:
        if region.kind is not RegionKind.NEIGHBORHOOD:
            continue
        npu_id = assign_region(ring_centroid(region.rings[0]), npus)
        if npu_id is not None and is_westside_npu(npu_id):
            ids.append(region.id)
    return tuple(sorted(ids))


def _scope_neighborhoods(snapshot: DataSnapshot, scope: str) -> tuple[str, ...]:
    if scope == "city":
        return snapshot.region_ids(RegionKind.NEIGHBORHOOD)
    if scope == "westside":
        return westside_neighborhood_ids(snapshot)
    raise DomainError("bad_scope", f"correlation scope must be city or westside, got {scope!r}")


def correlate_factors(
    snapshot: DataSnapshot,
    factors: Sequence[str] | None,
    m: CrimeMeasure,
    scope: str = "city",
) -> list[CorrelationResult]:
    """One result per factor, strongest |r| first; undefined factors sort last.

    Neighborhoods missing the factor or the measure are excluded pairwise and
    counted, so a reader can see how much data each coefficient rests on.
    """
    neighborhoods = _scope_neighborhoods(snapshot, scope)
    measure_by_hood = {
        hood: value
        for hood in neighborhoods
        if (value := crime_measure(snapshot, hood, m)) is not None
    }
    if len(measure_by_hood) < 2:
        raise DomainError(
            "insufficient_neighborhoods",
            f"{scope} scope has {len(measure_by_hood)} neighborhood(s) with a defined measure; need 2",
        )
    profiles = {
        p.region_id: p for p in snapshot.census if p.region_kind == "neighborhood"
    }
    names = tuple(factors) if factors is not None else snapshot.factor_names()
    results = []
    for name in names:
        xs, ys = [], []
        for hood, measure_value in measure_by_hood.items():
            profile = profiles.get(hood)
            factor_value = profile.factor(name) if profile is not None else None
            if factor_value is None:
                continue
            xs.append(factor_value)
            ys.append(measure_value)
        r: float | None
        if len(xs) < 2:
            r = None
        else:
            try:
                r = pearson(xs, ys)
            except UndefinedCorrelationError:
                r = None
        results.append(
            CorrelationResult(
                factor=name,
                measure=m,
                scope=scope,
                r=r,
                n=len(xs),
                excluded=len(neighborhoods) - len(xs),
            )
        )
    results.sort(key=lambda res: (res.r is None, -abs(res.r) if res.r is not None else 0.0, res.factor))
    return results
