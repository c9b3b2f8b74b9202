"""Matrix files and JSON report serialization.

Matrix JSON: ``{"n": <int>, "rows": [[...], ...]}``. CSV: n lines of n
comma-separated values. Floats in reports are written with 17 significant
digits so every double round-trips exactly.
"""

from __future__ import annotations

import csv
import io
import json
import json.encoder
from pathlib import Path

import numpy as np

from .errors import MatrixFormatError


def _check_rows(rows, n=None) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise MatrixFormatError("rows must be a non-empty list")
    width = len(rows)
    for k, row in enumerate(rows):
        if not isinstance(row, (list, tuple)):
            raise MatrixFormatError(f"row {k + 1} is not a list")
        if len(row) != width:
            raise MatrixFormatError(f"ragged row {k + 1}: {len(row)} values, expected {width}")
    if n is not None and n != width:
        raise MatrixFormatError(f"declared n={n} but found {width} rows")
    try:
        a = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"non-numeric entry: {exc}") from None
    if not np.all(np.isfinite(a)):
        raise MatrixFormatError("entries must be finite")
    return a


def matrix_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "rows" not in obj or "n" not in obj:
        raise MatrixFormatError('matrix object needs "n" and "rows"')
    n = obj["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise MatrixFormatError('"n" must be an integer')
    return _check_rows(obj["rows"], n)


def matrix_to_obj(A) -> dict:
    a = np.asarray(A, dtype=float)
    return {"n": int(a.shape[0]), "rows": [[float(x) for x in row] for row in a]}


def parse_json_matrix(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON: {exc}") from None
    return matrix_from_obj(obj)


def parse_csv_matrix(text: str) -> np.ndarray:
    rows = [row for row in csv.reader(io.StringIO(text)) if any(c.strip() for c in row)]
    try:
        values = [[float(c) for c in row] for row in rows]
    except ValueError as exc:
        raise MatrixFormatError(f"non-numeric entry: {exc}") from None
    return _check_rows(values)


def load_matrix(path) -> np.ndarray:
    """Read a matrix file; ``.csv`` is parsed as CSV, everything else as JSON."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return parse_csv_matrix(text)
    return parse_json_matrix(text)


def save_matrix(path, A) -> None:
    Path(path).write_text(dumps(matrix_to_obj(A)) + "\n")


def _floatstr(x, _inf=json.encoder.INFINITY):
    if x != x:
        return "NaN"
    if x == _inf:
        return "Infinity"
    if x == -_inf:
        return "-Infinity"
    return format(x, ".17g")


class _Encoder(json.JSONEncoder):
    # The C encoder ignores float formatting hooks, so build the pure-Python one.
    def iterencode(self, o, _one_shot=False):
        markers = {} if self.check_circular else None
        return json.encoder._make_iterencode(
            markers,
            self.default,
            json.encoder.encode_basestring_ascii,
            self.indent,
            _floatstr,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )(o, 0)

    def default(self, o):
        if isinstance(o, np.generic):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        return super().default(o)


def _plain(obj):
    """Convert numpy scalars/arrays into builtin containers before encoding."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _is_flat(v) -> bool:
    return isinstance(v, list) and not any(isinstance(x, (list, dict)) for x in v)


def _pretty(obj, indent: int, level: int) -> str:
    # Like json.dumps(indent=...), but lists of scalars (matrix rows) stay on one line.
    if _is_flat(obj) or not isinstance(obj, (list, dict)) or not obj:
        return json.dumps(obj, cls=_Encoder, separators=(", ", ": "))
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if isinstance(obj, list):
        items = [inner + _pretty(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    items = [inner + json.dumps(k) + ": " + _pretty(v, indent, level + 1) for k, v in obj.items()]
    return "{\n" + ",\n".join(items) + "\n" + pad + "}"


def dumps(obj, indent=2) -> str:
    return _pretty(_plain(obj), indent, 0)
