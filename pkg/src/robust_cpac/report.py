"""Deterministic JSON and CSV serialization of reports.

Rationals are {"num": n, "den": d} in JSON and "n/d" in CSV; the parameter
value infinity is the string "inf".  JSON keys are sorted.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
from fractions import Fraction
from typing import Any

from .core import FiniteDistribution, Predictor

__all__ = ["to_jsonable", "dumps_json", "dumps_csv", "fraction_from_json"]


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf"
        return obj
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Predictor):
        if obj.family is not None:
            return {"family": obj.family, "params": to_jsonable(obj.params)}
        return {"opaque": obj.label or "predictor"}
    if isinstance(obj, FiniteDistribution):
        return {"support": [{"point": x, "label": y, "mass": to_jsonable(m)} for x, y, m in obj.support]}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def fraction_from_json(value: dict) -> Fraction:
    return Fraction(value["num"], value["den"])


def dumps_json(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _csv_cell(value: Any) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, (list, tuple, dict)) or dataclasses.is_dataclass(value):
        return json.dumps(to_jsonable(value), sort_keys=True, separators=(",", ":"))
    if value is None:
        return ""
    if isinstance(value, enum.Enum):
        return str(value.value)
    return str(value)


def dumps_csv(rows: list[dict]) -> str:
    """One line per row; columns are the sorted union of the row keys."""
    columns = sorted({k for row in rows for k in row})
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buffer.getvalue()
