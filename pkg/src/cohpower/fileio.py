"""JSON files for channels and states.

Channel file::

    {"dim": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}

Each matrix is a list of rows and each entry an ``[re, im]`` pair. A flat
row-major list of ``dim_out * dim`` pairs is accepted too. ``dim_out`` is
optional and defaults to ``dim``.

State file::

    {"dim": 2, "matrix": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]}

Floats are written with ``repr`` precision, so a write followed by a read
gives back bit-identical values.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .channels import KrausChannel
from .linalg import DEFAULT_TOL, PRINTED_TOL
from .states import DensityMatrix


class FormatError(ValueError):
    """Malformed file. ``field`` is a JSON path such as ``kraus[1][0][2]``."""

    def __init__(self, message: str, source: str = "<input>", line: int | None = None, field: str | None = None):
        where = source
        if line is not None:
            where += f":{line}"
        if field is not None:
            where += f" ({field})"
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line
        self.field = field


def resolve_tol(tol: float | None = None, relaxed: bool = False) -> float:
    """Validation tolerance: explicit ``tol`` wins, else strict or relaxed default."""
    if tol is not None:
        return float(tol)
    return PRINTED_TOL if relaxed else DEFAULT_TOL


def _load(text: str, source: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, source, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise FormatError("top level must be a JSON object", source)
    return doc


def _count(doc: dict, key: str, source: str, required: bool = True) -> int | None:
    if key not in doc:
        if required:
            raise FormatError("missing field", source, field=key)
        return None
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise FormatError(f"expected a positive integer, got {v!r}", source, field=key)
    return v


def _entry(v: Any, source: str, field: str) -> complex:
    ok = (
        isinstance(v, (list, tuple))
        and len(v) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    )
    if not ok:
        raise FormatError(f"expected an [re, im] pair of numbers, got {v!r}", source, field=field)
    if not (math.isfinite(v[0]) and math.isfinite(v[1])):
        raise FormatError("non-finite entry", source, field=field)
    return complex(float(v[0]), float(v[1]))


def _matrix(v: Any, rows: int, cols: int, source: str, field: str) -> np.ndarray:
    if not isinstance(v, list):
        raise FormatError("expected a list", source, field=field)
    out = np.empty((rows, cols), dtype=complex)
    # flat form: every element is itself an [re, im] pair rather than a row
    flat = len(v) == rows * cols and all(
        isinstance(e, list) and len(e) == 2 and not any(isinstance(x, list) for x in e) for e in v
    )
    if flat:
        for n, e in enumerate(v):
            out[divmod(n, cols)] = _entry(e, source, f"{field}[{n}]")
        return out
    if len(v) != rows:
        raise FormatError(f"expected {rows} rows, got {len(v)}", source, field=field)
    for i, row in enumerate(v):
        if not isinstance(row, list) or len(row) != cols:
            n = len(row) if isinstance(row, list) else "a non-list"
            raise FormatError(f"expected {cols} entries, got {n}", source, field=f"{field}[{i}]")
        for j, e in enumerate(row):
            out[i, j] = _entry(e, source, f"{field}[{i}][{j}]")
    return out


def channel_from_json(text: str, tol: float | None = None, relaxed: bool = False, source: str = "<input>") -> KrausChannel:
    doc = _load(text, source)
    dim = _count(doc, "dim", source)
    dim_out = _count(doc, "dim_out", source, required=False) or dim
    kraus = doc.get("kraus")
    if not isinstance(kraus, list) or not kraus:
        raise FormatError("expected a non-empty list of matrices", source, field="kraus")
    ops = [_matrix(k, dim_out, dim, source, f"kraus[{n}]") for n, k in enumerate(kraus)]
    return KrausChannel(ops, tol=resolve_tol(tol, relaxed))


def state_from_json(text: str, tol: float | None = None, relaxed: bool = False, source: str = "<input>") -> DensityMatrix:
    doc = _load(text, source)
    dim = _count(doc, "dim", source)
    if "matrix" not in doc:
        raise FormatError("missing field", source, field="matrix")
    return DensityMatrix(_matrix(doc["matrix"], dim, dim, source, "matrix"), tol=resolve_tol(tol, relaxed))


def parse_channel_file(path, tol: float | None = None, relaxed: bool = False) -> KrausChannel:
    p = Path(path)
    return channel_from_json(p.read_text(encoding="utf-8"), tol, relaxed, source=str(p))


def parse_state_file(path, tol: float | None = None, relaxed: bool = False) -> DensityMatrix:
    p = Path(path)
    return state_from_json(p.read_text(encoding="utf-8"), tol, relaxed, source=str(p))


def matrix_to_pairs(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def channel_to_json(phi: KrausChannel) -> str:
    doc: dict = {"dim": phi.dim_in}
    if phi.dim_out != phi.dim_in:
        doc["dim_out"] = phi.dim_out
    doc["kraus"] = [matrix_to_pairs(k) for k in phi.ops]
    return json.dumps(doc, indent=1)


def state_to_json(rho) -> str:
    m = np.asarray(rho)
    return json.dumps({"dim": m.shape[0], "matrix": matrix_to_pairs(m)}, indent=1)


def write_channel_file(path, phi: KrausChannel) -> None:
    Path(path).write_text(channel_to_json(phi) + "\n", encoding="utf-8")


def write_state_file(path, rho) -> None:
    Path(path).write_text(state_to_json(rho) + "\n", encoding="utf-8")
