"""File formats and deterministic text rendering for the CLI.

Matrices travel as JSON objects {"dim": n, "rows": [[[re, im], ...]]}
and vectors as {"dim": n, "entries": [[re, im], ...]}. All numeric
output is rendered through format_float so that repeated runs produce
byte-identical text: 17 significant digits, lowercase scientific
notation, negative zero collapsed to zero.
"""

from __future__ import annotations

import json
from typing import IO, Any

import numpy as np

from .errors import ParseError, ValidationError


def format_float(x: float) -> str:
    x = float(x)
    if not np.isfinite(x):
        raise ValidationError(f"cannot render non-finite value {x!r}")
    if x == 0.0:
        x = 0.0
    return f"{x:.16e}"


def _entry_to_complex(entry, where: str) -> complex:
    if (not isinstance(entry, (list, tuple)) or len(entry) != 2
            or not all(isinstance(p, (int, float)) and not isinstance(p, bool)
                       for p in entry)):
        raise ValidationError(f"{where}: expected a [re, im] number pair, got {entry!r}")
    z = complex(float(entry[0]), float(entry[1]))
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValidationError(f"{where}: non-finite entry {entry!r}")
    return z


def _load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def load_matrix_file(path: str) -> np.ndarray:
    data = _load_json(path)
    if not isinstance(data, dict) or "dim" not in data or "rows" not in data:
        raise ValidationError(f"{path}: expected an object with 'dim' and 'rows'")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ValidationError(f"{path}: 'dim' must be a positive integer")
    rows = data["rows"]
    if not isinstance(rows, list) or len(rows) != dim:
        raise ValidationError(f"{path}: expected {dim} rows")
    out = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ValidationError(f"{path}: row {i} must have {dim} entries")
        for j, entry in enumerate(row):
            out[i, j] = _entry_to_complex(entry, f"{path}: row {i}, column {j}")
    return out


def load_vector_file(path: str) -> np.ndarray:
    data = _load_json(path)
    if not isinstance(data, dict) or "dim" not in data or "entries" not in data:
        raise ValidationError(f"{path}: expected an object with 'dim' and 'entries'")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ValidationError(f"{path}: 'dim' must be a positive integer")
    entries = data["entries"]
    if not isinstance(entries, list) or len(entries) != dim:
        raise ValidationError(f"{path}: expected {dim} entries")
    return np.array([_entry_to_complex(e, f"{path}: entry {i}")
                     for i, e in enumerate(entries)], dtype=complex)


def matrix_to_rows(a: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(a)]


def render_json(value: Any) -> str:
    """Deterministic JSON text: insertion-order keys, compact
    separators, all floats rendered through format_float."""
    pieces: list[str] = []
    _render(value, pieces)
    return "".join(pieces)


def _render(value: Any, out: list) -> None:
    if isinstance(value, dict):
        out.append("{")
        for i, (k, v) in enumerate(value.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _render(v, out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, v in enumerate(value):
            if i:
                out.append(",")
            _render(v, out)
        out.append("]")
    elif isinstance(value, bool) or value is None:
        out.append(json.dumps(value))
    elif isinstance(value, (int, np.integer)):
        out.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        out.append(format_float(float(value)))
    elif isinstance(value, (complex, np.complexfloating)):
        _render([float(value.real), float(value.imag)], out)
    elif isinstance(value, np.ndarray):
        _render(value.tolist(), out)
    elif isinstance(value, str):
        out.append(json.dumps(value))
    else:
        raise TypeError(f"cannot render {type(value).__name__} deterministically")


def render_csv(header: list, rows: list) -> str:
    """CSV with LF endings; numbers go through format_float."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            else:
                cells.append(format_float(float(cell)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_text(stream: IO[str], text: str) -> None:
    stream.write(text)
    stream.flush()
