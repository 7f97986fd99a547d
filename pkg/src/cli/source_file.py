from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..errors import MassSumError, NegativeMassError, SourceFormatError
from ..probkit import JointPmf
from ..regions import SourceSpec
from ..regions.source import check_omniscient

logger = logging.getLogger(__name__)

# Totals within this distance of 1 are renormalized; anything further is rejected.
SUM_TOL = 1e-9

_SUFFIXES = (".yaml", ".yml", ".json")


class SourceDocument(BaseModel):
    """
    On-disk description of a joint source over (Z, X_1, ..., X_m).

    `pmf` is the row-major table over (Z, X_1, ..., X_m). For omniscient sources
    it may instead hold only the law of (X_1, ..., X_m); `z_size` may then be omitted.
    """

    model_config = ConfigDict(extra="forbid")

    m: int = Field(..., ge=1)
    z_size: int | None = Field(None, ge=1)
    x_sizes: List[int]
    pmf: List[float]
    omniscient: bool = False
    name: str = ""


def _load(document: Union[str, Path, Dict[str, Any]]) -> Dict[str, Any]:
    if isinstance(document, dict):
        return document
    text = document
    if isinstance(document, Path) or ("\n" not in document and Path(document).suffix in _SUFFIXES):
        path = Path(document)
        if not path.exists():
            raise SourceFormatError(f"source file not found: {path}")
        text = path.read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise SourceFormatError(f"source document is not valid YAML/JSON: {e}") from e
    if not isinstance(data, dict):
        raise SourceFormatError("source document must be a mapping")
    return data


def parse_source(document: Union[str, Path, Dict[str, Any]]) -> SourceSpec:
    """
    Validated SourceSpec from a path, a YAML/JSON string or an already-loaded mapping.

    Each failure mode raises its own error type: malformed documents
    (SourceFormatError), negative entries (NegativeMassError), totals outside
    1 +- 1e-9 (MassSumError) and omniscient flags contradicted by the table
    (OmniscientMismatchError).
    """
    try:
        doc = SourceDocument.model_validate(_load(document))
    except ValidationError as ve:
        raise SourceFormatError(f"malformed source document: {ve}") from ve
    if len(doc.x_sizes) != doc.m or any(s < 1 for s in doc.x_sizes):
        raise SourceFormatError(f"x_sizes must list {doc.m} positive alphabet sizes, got {doc.x_sizes}")

    probs = np.asarray(doc.pmf, dtype=float)
    if not np.all(np.isfinite(probs)):
        raise SourceFormatError("pmf entries must be finite numbers")
    if np.any(probs < 0):
        raise NegativeMassError(f"pmf has negative entry {float(probs.min())!r} at index {int(np.argmin(probs))}")
    total = float(probs.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise MassSumError(f"pmf sums to {total!r}, not 1 within {SUM_TOL}", total=total)
    probs = probs / total

    x_sizes = tuple(doc.x_sizes)
    n_x = math.prod(x_sizes)
    if doc.omniscient and probs.size == n_x and doc.z_size in (None, n_x):
        source = SourceSpec.from_receivers(JointPmf(x_sizes, probs.reshape(x_sizes)), name=doc.name)
        logger.info("parsed omniscient source %r from the law of X^m", doc.name)
        return source

    if doc.z_size is None:
        raise SourceFormatError("z_size is required unless an omniscient source gives only the law of X^m")
    shape = (doc.z_size,) + x_sizes
    if probs.size != math.prod(shape):
        raise SourceFormatError(f"pmf has {probs.size} entries, alphabets {shape} need {math.prod(shape)}")
    pmf = JointPmf(shape, probs.reshape(shape))
    if doc.omniscient:
        check_omniscient(pmf)
    source = SourceSpec(pmf, omniscient=doc.omniscient, name=doc.name)
    logger.info("parsed source %r: |Z|=%d, |X|=%s", doc.name, doc.z_size, x_sizes)
    return source
