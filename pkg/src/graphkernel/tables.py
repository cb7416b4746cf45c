"""Delimited output shared by the library exporters and the CLI."""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Mapping, Sequence

from .errors import GraphError

SIG_DIGITS = 12


def fmt_number(x: Any) -> Any:
    """Render numbers with 12 significant digits; integral values print bare."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    try:
        xf = float(x)
    except (TypeError, ValueError):
        return str(x)
    if math.isnan(xf) or math.isinf(xf):
        return str(xf)
    if xf == 0.0:
        return "0"
    return f"{xf:.{SIG_DIGITS}g}"


def json_number(x: Any) -> Any:
    """JSON counterpart of :func:`fmt_number`: ints stay ints, floats round to 12 digits."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    try:
        xf = float(x)
    except (TypeError, ValueError):
        return str(x)
    if math.isnan(xf) or math.isinf(xf):
        return str(xf)
    if xf == int(xf) and abs(xf) < 2**53:
        return int(xf)
    return float(f"{xf:.{SIG_DIGITS}g}")


def _check(rows: Sequence[Sequence[Any]], columns: Sequence[str]):
    for i, row in enumerate(rows):
        if len(row) != len(columns):
            raise GraphError(
                f"row {i} has {len(row)} fields, expected {len(columns)}")


def emit_table(rows: Sequence[Sequence[Any] | Mapping[str, Any]], columns: Sequence[str],
               fmt: str = "csv") -> str:
    """Render rows as CSV (minimal quoting) or as a JSON array of objects.

    Rows may be sequences in column order or mappings keyed by column name.
    """
    rows = [[r[c] for c in columns] if isinstance(r, Mapping) else list(r) for r in rows]
    _check(rows, columns)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt_number(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        objs = [{c: json_number(v) for c, v in zip(columns, row)} for row in rows]
        return json.dumps(objs, ensure_ascii=False, indent=1) + "\n"
    raise GraphError(f"unknown table format {fmt!r}")


def parse_csv(text: str) -> list[list[str]]:
    return list(csv.reader(io.StringIO(text)))
