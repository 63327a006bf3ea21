"""Deterministic JSON/CSV writers.

Floats are printed with 17 significant digits in JSON (lossless round trip)
and 12 in CSV (readability); identical inputs always produce byte-identical
files.
"""

from __future__ import annotations

import hashlib
import math
from pathlib import Path

JSON_FLOAT_FMT = ".17g"
CSV_FLOAT_FMT = ".12g"


def _format_float(x: float, fmt: str) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value {x} cannot be serialized")
    s = format(x, fmt)
    # Keep a float marker so round trips preserve the type.
    if "e" not in s and "." not in s and "inf" not in s and "nan" not in s:
        s += ".0"
    return s


def dumps_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _format_float(obj, JSON_FLOAT_FMT)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{out}"'
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [dumps_json(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(inner + it for it in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{inner}"{k}": {dumps_json(v, indent + 1)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    # numpy scalars and arrays fall back to their Python forms
    if hasattr(obj, "tolist"):
        return dumps_json(obj.tolist(), indent)
    if hasattr(obj, "item"):
        return dumps_json(obj.item(), indent)
    raise TypeError(f"cannot serialize {type(obj)}")


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps_json(obj) + "\n")
    return path


def format_csv_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _format_float(v, CSV_FLOAT_FMT)
    return str(v)


def write_csv(path, header: list[str], rows) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_csv_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path) -> tuple[list[str], list[list[float]]]:
    text = Path(path).read_text().strip()
    if not text:
        raise ValueError(f"empty CSV file: {path}")
    lines = text.splitlines()
    header = lines[0].split(",")
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    return header, rows


def sha256_of(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
