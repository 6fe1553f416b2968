"""Table serialization for the CLI: CSV (header row, LF) and JSON ({"meta", "data"}).

Floats are written with 17 significant digits so that reading a table back
reproduces every value bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Table", "format_float", "emit", "parse"]

_INT = re.compile(r"^-?\d+$")


def format_float(v: float) -> str:
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    s = "%.17g" % v
    if _INT.match(s):
        s += ".0"  # keep floats distinguishable from integers on the way back
    return s


@dataclass
class Table:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, **values):
        unknown = set(values) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown columns {sorted(unknown)}")
        self.rows.append(tuple(values.get(c) for c in self.columns))

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, r)) for r in self.rows]

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    return str(v)


def _json_value(v) -> str:
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    if isinstance(v, (bool, np.bool_)) or v is None:
        return json.dumps(v if v is None else bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    return json.dumps(str(v))


def emit(table: Table, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.columns)
        for r in table.rows:
            w.writerow([_cell(v) for v in r])
        return buf.getvalue()
    if fmt == "json":
        body = ",\n  ".join(_json_value(rec) for rec in table.records())
        data = f"[\n  {body}\n]" if table.rows else "[]"
        return '{"meta": ' + _json_value(table.meta) + ', "columns": ' + _json_value(table.columns) + \
            ', "data": ' + data + "}\n"
    raise ValueError(f"unknown format {fmt!r}")


def _parse_cell(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    if _INT.match(s):
        return int(s)
    try:
        return float(s)
    except ValueError:
        return s


def parse(text: str, fmt: str) -> Table:
    """Inverse of :func:`emit`."""
    if fmt == "csv":
        reader = csv.reader(io.StringIO(text))
        columns = next(reader)
        return Table(columns, [tuple(_parse_cell(c) for c in row) for row in reader])
    if fmt == "json":
        obj = json.loads(text)
        columns = obj["columns"]
        rows = [tuple(rec[c] for c in columns) for rec in obj["data"]]
        return Table(columns, rows, obj["meta"])
    raise ValueError(f"unknown format {fmt!r}")
