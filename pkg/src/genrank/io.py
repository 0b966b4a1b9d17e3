"""JSON and CSV encodings.

Complex entries are ``[re, im]`` pairs (a bare number means a real entry),
matrices are row-major lists of rows and a tuple is a list of matrices.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Mapping

import numpy as np

from .errors import SizeMismatch
from .matalg import MatrixTuple, validate_tuple


def _entry(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise SizeMismatch(f"complex entry must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    return complex(float(x))


def matrix_from_json(rows) -> np.ndarray:
    try:
        return np.array([[_entry(x) for x in row] for row in rows], dtype=complex)
    except TypeError as exc:
        raise SizeMismatch(f"malformed matrix: {exc}") from None


def tuple_from_json(mats) -> MatrixTuple:
    if not isinstance(mats, list):
        raise SizeMismatch("a tuple must be a list of matrices")
    raw = [matrix_from_json(m) for m in mats]
    shapes = {m.shape for m in raw}
    if len(shapes) > 1 or any(len(s) != 2 for s in shapes):
        raise SizeMismatch(f"matrices of differing shapes {sorted(shapes)}")
    return validate_tuple(raw)


def matrix_to_json(a: np.ndarray) -> list:
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(a, dtype=complex)]


def tuple_to_json(t: MatrixTuple) -> list:
    return [matrix_to_json(a) for a in t.entries]


def _clean(obj):
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, fixed indentation."""
    return json.dumps(_clean(obj), sort_keys=True, indent=2)


def to_csv(rows: Iterable[Mapping], columns: list[str] | None = None) -> str:
    rows = list(rows)
    if columns is None:
        columns = list(rows[0]) if rows else []
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\r\n",
                            quoting=csv.QUOTE_MINIMAL, extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _clean(v) for k, v in row.items()})
    return buf.getvalue()


def to_table(rows: Iterable[Mapping], columns: list[str] | None = None) -> str:
    rows = list(rows)
    if columns is None:
        columns = list(rows[0]) if rows else []
    cells = [[str(_clean(r.get(c, ""))) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)
