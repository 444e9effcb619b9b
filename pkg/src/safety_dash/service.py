"""Read-only HTTP JSON/GeoJSON API over one immutable snapshot.

Every endpoint body is produced by a module-level builder function that the
CLI export command calls too, so the HTTP façade and offline exports cannot
drift apart. Handlers never mutate the snapshot; the only mutable state is
the hexmap memoization cache, which is bound to the snapshot identity.
"""

from __future__ import annotations

import datetime as dt

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import aggregate as agg
from . import correlate as corr
from . import maplayer as ml
from .errors import DomainError, UndefinedCorrelationError
from .geo import RegionKind, regions_feature_collection
from .ingest.parsers import AssetKind, CrimeCategory
from .ingest.snapshot import FORMAT_VERSION, DataSnapshot

# one HTTP status per domain error code; anything unlisted is a caller error
STATUS_BY_CODE = {
    "bad_count": 400,
    "bad_dataset": 400,
    "bad_filter": 400,
    "bad_flag": 400,
    "bad_granularity": 400,
    "bad_hex_size": 400,
    "bad_kind": 400,
    "bad_measure": 400,
    "bad_range": 400,
    "bad_scope": 400,
    "bad_span": 400,
    "bad_vectors": 400,
    "bad_zoom": 400,
    "unknown_neighborhood": 404,
    "unknown_npu": 404,
    "insufficient_neighborhoods": 422,
    "missing_population": 422,
    "undefined_correlation": 422,
    "no_snapshot": 503,
}

_TRUE_WORDS = {"1", "true", "yes", "on"}
_FALSE_WORDS = {"0", "false", "no", "off", ""}


def _parse_bool(text: str, name: str) -> bool:
    s = text.strip().lower()
    if s in _TRUE_WORDS:
        return True
    if s in _FALSE_WORDS:
        return False
    raise DomainError("bad_flag", f"{name} must be true or false, got {text!r}")


def _parse_range(from_: str | None, to: str | None) -> agg.DateRange | None:
    lo = agg.parse_date_param(from_, "from") if from_ else None
    hi = agg.parse_date_param(to, "to") if to else None
    if lo is None and hi is None:
        return None
    if lo is not None and hi is not None and lo > hi:
        raise DomainError("bad_range", f"from {lo} is after to {hi}")
    return (lo, hi)


def _scope_label(snapshot: DataSnapshot, scope: agg.Scope) -> str:
    if scope.kind == "npu":
        return f"npu:{agg.resolve_npu(snapshot, scope.npu_id)}"
    return scope.kind


def _series_doc(series: agg.TimeSeries) -> dict:
    return {
        "granularity": series.granularity.value,
        "points": [[label, count] for label, count in series.points],
        "total": series.total(),
    }


# --- endpoint body builders (shared by HTTP handlers and CLI export) -----------


def meta_body(snapshot: DataSnapshot) -> dict:
    def date_range(dates: list[dt.date]) -> list[str] | None:
        if not dates:
            return None
        return [min(dates).isoformat(), max(dates).isoformat()]

    return {
        "format_version": FORMAT_VERSION,
        "built_at": snapshot.built_at,
        "counts": {
            "crimes": len(snapshot.crimes),
            "violations": len(snapshot.violations),
            "assets": len(snapshot.assets),
            "census": len(snapshot.census),
            "regions": len(snapshot.regions),
        },
        "npus": list(snapshot.region_ids(RegionKind.NPU)),
        "neighborhoods": list(snapshot.region_ids(RegionKind.NEIGHBORHOOD)),
        "factors": list(snapshot.factor_names()),
        "date_ranges": {
            "crimes": date_range([c.occurrence_date for c in snapshot.crimes]),
            "violations": date_range([v.report_date for v in snapshot.violations]),
        },
    }


def timeseries_body(
    snapshot: DataSnapshot,
    dataset: str = "crimes",
    scope: str = "city",
    granularity: str = "month",
    from_: str | None = None,
    to: str | None = None,
) -> dict:
    parsed_scope = agg.parse_scope(scope)
    scope_series, city_series = agg.timeseries(
        snapshot,
        agg.parse_dataset(dataset),
        parsed_scope,
        agg.parse_granularity(granularity),
        _parse_range(from_, to),
    )
    return {
        "dataset": agg.parse_dataset(dataset).value,
        "scope": _scope_label(snapshot, parsed_scope),
        "scope_series": _series_doc(scope_series),
        "city_series": _series_doc(city_series),
    }


def npus_body(
    snapshot: DataSnapshot,
    dataset: str = "crimes",
    from_: str | None = None,
    to: str | None = None,
    per_capita: str = "false",
) -> dict:
    per_capita_flag = _parse_bool(per_capita, "per_capita")
    rows = agg.counts_by_npu(
        snapshot, agg.parse_dataset(dataset), _parse_range(from_, to), per_capita_flag
    )
    return {
        "dataset": agg.parse_dataset(dataset).value,
        "per_capita": per_capita_flag,
        "npus": [{"npu": row.npu, "value": row.value, "westside": row.westside} for row in rows],
    }


def type_share_body(
    snapshot: DataSnapshot,
    dataset: str = "crimes",
    scope: str = "city",
    fine: str = "false",
) -> dict:
    parsed_scope = agg.parse_scope(scope)
    shares = agg.type_share(
        snapshot, agg.parse_dataset(dataset), parsed_scope, _parse_bool(fine, "fine")
    )
    return {
        "dataset": agg.parse_dataset(dataset).value,
        "scope": _scope_label(snapshot, parsed_scope),
        "shares": [[name, pct] for name, pct in shares],
    }


def correlations_body(
    snapshot: DataSnapshot,
    measure: str = "violent_pct",
    scope: str = "city",
    factors: str | None = None,
) -> dict:
    if scope.strip().lower() not in ("city", "westside"):
        raise DomainError("bad_scope", f"correlation scope must be city or westside, got {scope!r}")
    names = [name.strip() for name in factors.split(",") if name.strip()] if factors else None
    parsed = corr.parse_measure(measure)
    results = corr.correlate_factors(snapshot, names, parsed, scope.strip().lower())
    return {
        "measure": parsed.label(),
        "scope": scope.strip().lower(),
        "caveat": corr.CAVEAT,
        "results": [
            {"factor": r.factor, "r": r.r, "n": r.n, "excluded": r.excluded} for r in results
        ],
    }


def _parse_categories(text: str) -> frozenset[CrimeCategory]:
    names = [name.strip().lower() for name in text.split(",") if name.strip()]
    try:
        return frozenset(CrimeCategory(name) for name in names)
    except ValueError:
        raise DomainError("bad_filter", f"unknown crime category in {text!r}") from None


def crime_filter_from_params(
    span: str = "all", categories: str | None = None, ucr: str | None = None
) -> ml.CrimeFilter:
    return ml.CrimeFilter(
        categories=_parse_categories(categories) if categories else None,
        ucr_codes=frozenset(c.strip() for c in ucr.split(",") if c.strip()) if ucr else None,
        span=ml.parse_span(span),
    )


def hexes_body(
    snapshot: DataSnapshot,
    span: str = "all",
    categories: str | None = None,
    ucr: str | None = None,
    hex_size: str | None = None,
    cache: ml.HexmapCache | None = None,
) -> dict:
    crime_filter = crime_filter_from_params(span, categories, ucr)
    size = 150.0
    if hex_size is not None:
        try:
            size = float(hex_size)
        except ValueError:
            raise DomainError("bad_hex_size", f"hex_size must be a number, got {hex_size!r}") from None
        if not size > 0:
            raise DomainError("bad_hex_size", f"hex_size must be positive, got {hex_size!r}")
    cfg = ml.default_grid_config(snapshot.regions, size)
    if cache is not None and cache.snapshot is snapshot:
        cells = list(cache.get(crime_filter, cfg))
    else:
        cells = ml.build_hexmap(snapshot, crime_filter, cfg)
    return ml.hexes_feature_collection(cells, cfg)


def violations_map_body(snapshot: DataSnapshot, span: str = "all", zoom: str = "12") -> dict:
    try:
        zoom_level = int(zoom)
    except ValueError:
        raise DomainError("bad_zoom", f"zoom must be an integer, got {zoom!r}") from None
    parsed_span = ml.parse_span(span)
    clusters = ml.violation_pins(snapshot, parsed_span, zoom_level)
    docs = []
    for cluster in clusters:
        doc = {
            "lat": cluster.centroid.lat,
            "lon": cluster.centroid.lon,
            "count": cluster.count,
        }
        if cluster.member_ids is not None:
            doc["member_ids"] = list(cluster.member_ids)
        docs.append(doc)
    return {"span": parsed_span.label(), "zoom": zoom_level, "clusters": docs}


def assets_body(snapshot: DataSnapshot, kinds: str | None = None) -> dict:
    kind_set = None
    if kinds:
        names = [name.strip().lower() for name in kinds.split(",") if name.strip()]
        try:
            kind_set = frozenset(AssetKind(name) for name in names)
        except ValueError:
            raise DomainError("bad_kind", f"unknown asset kind in {kinds!r}") from None
    return {
        "assets": [
            {
                "id": asset.id,
                "kind": asset.kind.value,
                "name": asset.name,
                "lat": asset.location.lat,
                "lon": asset.location.lon,
                "details": {key: value for key, value in asset.details},
            }
            for asset in ml.asset_pins(snapshot, kind_set)
        ]
    }


def regions_body(snapshot: DataSnapshot, kind: str | None = None) -> dict:
    regions = snapshot.regions
    if kind:
        try:
            wanted = RegionKind(kind.strip().lower())
        except ValueError:
            raise DomainError("bad_kind", f"unknown region kind {kind!r}") from None
        regions = tuple(region for region in regions if region.kind is wanted)
    return regions_feature_collection(regions)


# --- the FastAPI application ----------------------------------------------------


def create_app(
    snapshot: DataSnapshot | None,
    cors_origins: list[str] | None = None,
) -> FastAPI:
    app = FastAPI(title="safety-dash", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.snapshot = snapshot
    app.state.hex_cache = ml.HexmapCache(snapshot) if snapshot is not None else None
    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=cors_origins,
            allow_methods=["GET"],
            allow_headers=["*"],
        )

    @app.exception_handler(DomainError)
    async def _domain_error(request: Request, exc: DomainError):
        status = STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(status_code=status, content={"error": {"code": exc.code, "message": str(exc)}})

    @app.exception_handler(UndefinedCorrelationError)
    async def _undefined_corr(request: Request, exc: UndefinedCorrelationError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "undefined_correlation", "message": str(exc)}},
        )

    def _snapshot() -> DataSnapshot:
        if app.state.snapshot is None:
            raise DomainError("no_snapshot", "no snapshot loaded")
        return app.state.snapshot

    @app.get("/api/meta")
    def get_meta():
        return meta_body(_snapshot())

    @app.get("/api/aggregate/timeseries")
    def get_timeseries(
        dataset: str = "crimes",
        scope: str = "city",
        granularity: str = "month",
        from_: str | None = Query(default=None, alias="from"),
        to: str | None = None,
    ):
        return timeseries_body(_snapshot(), dataset, scope, granularity, from_, to)

    @app.get("/api/aggregate/npus")
    def get_npus(
        dataset: str = "crimes",
        from_: str | None = Query(default=None, alias="from"),
        to: str | None = None,
        per_capita: str = "false",
    ):
        return npus_body(_snapshot(), dataset, from_, to, per_capita)

    @app.get("/api/aggregate/type-share")
    def get_type_share(dataset: str = "crimes", scope: str = "city", fine: str = "false"):
        return type_share_body(_snapshot(), dataset, scope, fine)

    @app.get("/api/correlations")
    def get_correlations(
        measure: str = "violent_pct", scope: str = "city", factors: str | None = None
    ):
        return correlations_body(_snapshot(), measure, scope, factors)

    @app.get("/api/map/hexes")
    def get_hexes(
        span: str = "all",
        categories: str | None = None,
        ucr: str | None = None,
        hex_size: str | None = None,
    ):
        return hexes_body(_snapshot(), span, categories, ucr, hex_size, cache=app.state.hex_cache)

    @app.get("/api/map/violations")
    def get_violations(span: str = "all", zoom: str = "12"):
        return violations_map_body(_snapshot(), span, zoom)

    @app.get("/api/map/assets")
    def get_assets(kinds: str | None = None):
        return assets_body(_snapshot(), kinds)

    @app.get("/api/regions")
    def get_regions(kind: str | None = None):
        return regions_body(_snapshot(), kind)

    return app
