"""Versioned CSV tables: ``#schema=1``, ``#key=value`` metadata, 17-digit floats."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

SCHEMA = 1


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    return str(value)


def write_table(path, columns, rows, meta=None, footer=None) -> Path:
    """Write a header block, one row per record and optional ``#`` footer lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write(f"#schema={SCHEMA}\n")
        for key, value in (meta or {}).items():
            fh.write(f"#{key}={fmt(value)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(v) for v in row])
        for key, value in (footer or {}).items():
            fh.write(f"#{key}={fmt(value)}\n")
    return path


def _parse(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_table(path) -> tuple[dict, list[str], list[list]]:
    """Return (comment metadata, column names, parsed rows)."""
    meta, header, rows = {}, None, []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key] = _parse(value)
            elif header is None:
                header = next(csv.reader([line]))
            elif line:
                rows.append([_parse(v) for v in next(csv.reader([line]))])
    if meta.get("schema") != SCHEMA:
        raise ValueError(f"{path}: unsupported schema {meta.get('schema')!r}")
    return meta, header or [], rows
