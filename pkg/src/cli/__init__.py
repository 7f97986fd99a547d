"""Batch front-end: source documents, argument parsing, dispatch and run reports."""

from .dispatch import build_payload, dispatch, resolve_settings, run
from .parser import build_parser
from .report import RunReport, convert_units, emit, to_nats
from .schemes import SchemeDocument, build_scheme, build_u_channel, parse_scheme, s_preset, u_preset
from .source_file import SUM_TOL, SourceDocument, parse_source

__all__ = [
    "RunReport",
    "SUM_TOL",
    "SchemeDocument",
    "SourceDocument",
    "build_parser",
    "build_payload",
    "build_scheme",
    "build_u_channel",
    "convert_units",
    "dispatch",
    "emit",
    "parse_scheme",
    "parse_source",
    "resolve_settings",
    "run",
    "s_preset",
    "to_nats",
    "u_preset",
]
