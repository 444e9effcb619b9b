"""Public-safety analytics engine: ingest, spatial join, aggregates, correlations, hex heat map, read-only API."""

__version__ = "0.1.0"
