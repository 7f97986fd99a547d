from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, ValidationError

from ..errors import UsageError
from ..probkit import Channel
from ..regions import AuxScheme, SourceSpec

logger = logging.getLogger(__name__)

_X_PRESET = re.compile(r"^x(\d+)$")


class SchemeDocument(BaseModel):
    """
    Row tables of an auxiliary scheme.

    `u_given_z` has one row per z; `s_given_uz[l]` has one row per (u, z),
    u-major. Omitting `s_given_uz` means every S_l is constant.
    """

    model_config = ConfigDict(extra="forbid")

    u_given_z: List[List[float]]
    s_given_uz: Optional[List[List[List[float]]]] = None


def u_preset(source: SourceSpec, name: str) -> Channel:
    """Q_{U|Z} for the presets `z`, `const` and `x<j>` (omniscient sources only)."""
    name = name.strip().lower()
    if name == "z":
        return Channel.identity(source.z_size)
    if name == "const":
        return Channel.constant((source.z_size,))
    match = _X_PRESET.match(name)
    if match:
        j = int(match.group(1))
        if not 1 <= j <= source.m:
            raise UsageError(f"preset {name!r} names receiver {j}, source has m = {source.m}")
        if not source.omniscient:
            raise UsageError(f"preset {name!r} needs an omniscient source")
        sizes = source.x_sizes
        return Channel.from_function(
            (source.z_size,), sizes[j - 1], lambda z: np.unravel_index(z, sizes)[j - 1]
        )
    raise UsageError(f"unknown U preset {name!r}; expected z, const or x<j>")


def s_preset(source: SourceSpec, u_card: int, name: str) -> Channel:
    """Q_{S_l|UZ} for the presets `const` and `z`."""
    name = name.strip().lower()
    if name == "const":
        return Channel.constant((u_card, source.z_size))
    if name == "z":
        return Channel.from_function((u_card, source.z_size), source.z_size, lambda u, z: z)
    raise UsageError(f"unknown S preset {name!r}; expected const or z")


def _s_names(spec: str, m: int) -> List[str]:
    names = [part for part in spec.split(",") if part.strip()]
    if len(names) == 1:
        return names * m
    if len(names) != m:
        raise UsageError(f"--s lists {len(names)} presets for m = {m} receivers")
    return names


def _load_document(document: Union[str, Path, Dict[str, Any]]) -> SchemeDocument:
    if isinstance(document, (str, Path)):
        path = Path(document)
        if not path.exists():
            raise UsageError(f"scheme file not found: {path}")
        try:
            document = yaml.safe_load(path.read_text(encoding="utf-8"))
        except yaml.YAMLError as e:
            raise UsageError(f"scheme file {path} is not valid YAML/JSON: {e}") from e
    try:
        return SchemeDocument.model_validate(document)
    except ValidationError as ve:
        raise UsageError(f"malformed scheme document: {ve}") from ve


def _channel(input_sizes: Sequence[int], rows: List[List[float]], what: str) -> Channel:
    if not rows or len({len(r) for r in rows}) != 1:
        raise UsageError(f"{what} rows must be non-empty and of equal length")
    return Channel(tuple(input_sizes), len(rows[0]), np.asarray(rows, dtype=float))


def parse_scheme(document: Union[str, Path, Dict[str, Any]], source: SourceSpec) -> AuxScheme:
    doc = _load_document(document)
    q_u = _channel((source.z_size,), doc.u_given_z, "u_given_z")
    if doc.s_given_uz is None:
        q_s = tuple(Channel.constant((q_u.output_size, source.z_size)) for _ in source.receivers)
    else:
        q_s = tuple(
            _channel((q_u.output_size, source.z_size), rows, f"s_given_uz[{l}]")
            for l, rows in enumerate(doc.s_given_uz)
        )
    aux = AuxScheme(q_u, q_s)
    aux.check(source)
    return aux


def build_scheme(
    source: SourceSpec,
    *,
    document: Union[str, Path, Dict[str, Any], None] = None,
    u: str = "z",
    s: str = "const",
) -> AuxScheme:
    """Scheme from a document when given, otherwise from the presets."""
    if document is not None:
        return parse_scheme(document, source)
    q_u = u_preset(source, u)
    q_s = tuple(s_preset(source, q_u.output_size, name) for name in _s_names(s, source.m))
    aux = AuxScheme(q_u, q_s)
    aux.check(source)
    logger.info("built scheme from presets u=%s s=%s", u, s)
    return aux


def build_u_channel(
    source: SourceSpec,
    *,
    document: Union[str, Path, Dict[str, Any], None] = None,
    u: str = "z",
) -> Channel:
    """Q_{U|Z} alone, for the regions that need no S_l."""
    if document is not None:
        return parse_scheme(document, source).q_u_given_z
    return u_preset(source, u)
