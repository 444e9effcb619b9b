"""Operator commands: ingest, serve, export, genfixture.

Exit codes: 0 success, 2 usage or data error, 1 unexpected failure.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import socket
import sys
from pathlib import Path

from .errors import DomainError, SafetyDashError
from .fixtures import generate_fixture
from .ingest import (
    CachedGeocoder,
    NullGeocoder,
    StubGeocoder,
    ingest_sources,
    load_snapshot,
    load_ucr_table,
    save_snapshot,
)
from .ingest.snapshot import DatasetReport
from .service import (
    correlations_body,
    create_app,
    hexes_body,
    npus_body,
    timeseries_body,
    type_share_body,
)

DEFAULT_ADDR = "127.0.0.1:8000"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="safety-dash", description="Public-safety data dashboard engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="parse sources, geocode, join, write a snapshot")
    ingest.add_argument("--crimes", required=True)
    ingest.add_argument("--violations", required=True)
    ingest.add_argument("--assets", required=True)
    ingest.add_argument("--census", required=True)
    ingest.add_argument("--regions", required=True)
    ingest.add_argument("--ucr-map", help="override the packaged UCR code table")
    ingest.add_argument("--geocode-cache", help="JSON cache file for geocoder results")
    ingest.add_argument("--geocoder", choices=["stub", "none"], default="stub",
                        help="stub: deterministic in-bbox points; none: leave unlocated")
    ingest.add_argument("--out", required=True, help="snapshot file to write")

    serve = sub.add_parser("serve", help="serve the HTTP API for a snapshot")
    serve.add_argument("--snapshot", required=True)
    serve.add_argument("--addr", help=f"HOST:PORT (default $SAFETY_DASH_ADDR or {DEFAULT_ADDR}); port 0 picks one")
    serve.add_argument("--cors", nargs="*", help="allowed CORS origins")

    export = sub.add_parser("export", help="write one computation's result to a file")
    export.add_argument("--snapshot", required=True)
    export.add_argument("--what", required=True,
                        choices=["timeseries", "npus", "type-share", "correlations", "hexes"])
    export.add_argument("--format", choices=["json", "csv"], default="json")
    export.add_argument("--out", required=True)
    export.add_argument("--dataset", default="crimes")
    export.add_argument("--scope", default="city")
    export.add_argument("--granularity", default="month")
    export.add_argument("--from", dest="from_", default=None)
    export.add_argument("--to", default=None)
    export.add_argument("--per-capita", default="false")
    export.add_argument("--fine", default="false")
    export.add_argument("--measure", default="violent_pct")
    export.add_argument("--factors", default=None)
    export.add_argument("--span", default="all")
    export.add_argument("--categories", default=None)
    export.add_argument("--ucr", default=None)
    export.add_argument("--hex-size", default=None)

    genfixture = sub.add_parser("genfixture", help="write deterministic synthetic source files")
    genfixture.add_argument("--crimes", type=int, default=10000)
    genfixture.add_argument("--violations", type=int, default=2000)
    genfixture.add_argument("--seed", type=int, default=0)
    genfixture.add_argument("--out", required=True, help="directory for the generated files")

    return parser


def _report_lines(name: str, report: DatasetReport) -> str:
    parts = [f"parsed={report.parsed}", f"row_errors={report.row_errors}", f"located={report.located}",
             f"geocoded={report.geocoded}", f"geocode_failed={report.geocode_failed}",
             f"unjoined={report.unjoined}"]
    if name == "violations":
        parts.append(f"flag_unknowns={report.flag_unknowns}")
    return f"{name:<11} " + " ".join(parts)


def _regions_bbox(regions_text: str) -> tuple[float, float, float, float]:
    doc = json.loads(regions_text)
    lats, lons = [], []
    for feature in doc.get("features", []):
        geometry = feature.get("geometry") or {}
        coords = geometry.get("coordinates") or []
        polygons = coords if geometry.get("type") == "MultiPolygon" else [coords]
        for polygon in polygons:
            for ring in polygon:
                for lon, lat in ring:
                    lats.append(lat)
                    lons.append(lon)
    if not lats:
        return (-90.0, -180.0, 90.0, 180.0)
    return (min(lats), min(lons), max(lats), max(lons))


def _cmd_ingest(args: argparse.Namespace) -> int:
    regions_text = Path(args.regions).read_text(encoding="utf-8")
    if args.geocoder == "none":
        geocoder = NullGeocoder()
    else:
        geocoder = StubGeocoder(_regions_bbox(regions_text))
    cache = None
    if args.geocode_cache:
        cache = CachedGeocoder(args.geocode_cache, inner=geocoder)
        geocoder = cache
    ucr_table = load_ucr_table(args.ucr_map) if args.ucr_map else None
    with open(args.crimes, encoding="utf-8") as crimes_fh, \
            open(args.violations, encoding="utf-8") as violations_fh, \
            open(args.assets, encoding="utf-8") as assets_fh, \
            open(args.census, encoding="utf-8") as census_fh:
        result = ingest_sources(
            crimes_fh, violations_fh, assets_fh, census_fh,
            io.StringIO(regions_text), geocoder=geocoder, ucr_table=ucr_table,
        )
    if cache is not None:
        cache.save()
    save_snapshot(result.snapshot, args.out)
    report = result.report
    for name in ("crimes", "violations", "assets", "census"):
        print(_report_lines(name, getattr(report, name)))
    print(f"snapshot written to {args.out}")
    return 0


def _parse_addr(text: str) -> tuple[str, int]:
    host, sep, port_text = text.rpartition(":")
    if not sep:
        raise DomainError("bad_addr", f"address must be HOST:PORT, got {text!r}")
    try:
        port = int(port_text)
    except ValueError:
        raise DomainError("bad_addr", f"port must be an integer, got {port_text!r}") from None
    return host or "127.0.0.1", port


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    snapshot = load_snapshot(args.snapshot)
    host, port = _parse_addr(args.addr or os.environ.get("SAFETY_DASH_ADDR") or DEFAULT_ADDR)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as exc:
        sock.close()
        print(f"cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return 2
    bound_port = sock.getsockname()[1]
    print(f"serving on http://{host}:{bound_port}", flush=True)
    app = create_app(snapshot, cors_origins=args.cors)
    server = uvicorn.Server(uvicorn.Config(app, log_level="info", access_log=True))
    server.run(sockets=[sock])
    return 0


def _export_body(args: argparse.Namespace, snapshot) -> dict:
    if args.what == "timeseries":
        return timeseries_body(snapshot, args.dataset, args.scope, args.granularity, args.from_, args.to)
    if args.what == "npus":
        return npus_body(snapshot, args.dataset, args.from_, args.to, args.per_capita)
    if args.what == "type-share":
        return type_share_body(snapshot, args.dataset, args.scope, args.fine)
    if args.what == "correlations":
        return correlations_body(snapshot, args.measure, args.scope, args.factors)
    return hexes_body(snapshot, args.span, args.categories, args.ucr, args.hex_size)


def _csv_rows(what: str, body: dict) -> tuple[list[str], list[list]]:
    if what == "timeseries":
        scope_counts = dict(map(tuple, body["scope_series"]["points"]))
        rows = [[label, scope_counts.get(label, 0), count] for label, count in body["city_series"]["points"]]
        return ["bucket", "scope_count", "city_count"], rows
    if what == "npus":
        return ["npu", "value", "westside"], [
            [row["npu"], row["value"], "true" if row["westside"] else "false"] for row in body["npus"]
        ]
    if what == "type-share":
        return ["type", "percent"], [list(pair) for pair in body["shares"]]
    if what == "correlations":
        return ["factor", "r", "n", "excluded"], [
            [row["factor"], "" if row["r"] is None else row["r"], row["n"], row["excluded"]]
            for row in body["results"]
        ]
    # hexes
    return ["q", "r", "count", "color_class"], [
        [f["properties"]["q"], f["properties"]["r"], f["properties"]["count"], f["properties"]["color_class"]]
        for f in body["features"]
    ]


def _cmd_export(args: argparse.Namespace) -> int:
    import csv

    snapshot = load_snapshot(args.snapshot)
    body = _export_body(args, snapshot)
    if args.format == "json":
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(body, fh, indent=2)
            fh.write("\n")
    else:
        header, rows = _csv_rows(args.what, body)
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    print(f"wrote {args.what} ({args.format}) to {args.out}")
    return 0


def _cmd_genfixture(args: argparse.Namespace) -> int:
    if args.crimes < 0 or args.violations < 0:
        print("--crimes and --violations must be >= 0", file=sys.stderr)
        return 2
    paths = generate_fixture(args.out, args.crimes, args.violations, args.seed)
    for name in ("regions", "crimes", "violations", "assets", "census"):
        print(f"{name}: {paths[name]}")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "serve": _cmd_serve,
    "export": _cmd_export,
    "genfixture": _cmd_genfixture,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SafetyDashError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - last-resort guard
        print(f"unexpected error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
