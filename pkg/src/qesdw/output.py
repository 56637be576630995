"""Deterministic JSON, CSV and aligned-table emitters."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

__all__ = ["canonical", "clean_float", "to_csv", "to_json", "to_table"]

SIG_DIGITS = 15


def clean_float(x: float) -> float | None:
    """Round to 15 significant digits; non-finite values become None.

    Example:
        >>> clean_float(0.1 + 0.2), clean_float(-0.0), clean_float(float("nan"))
        (0.3, 0.0, None)
    """
    x = float(x)
    if not math.isfinite(x):
        return None
    y = float(f"{x:.{SIG_DIGITS}g}")
    if not math.isfinite(y):    # rounding up past the largest double
        y = x
    return 0.0 if y == 0.0 else y


def canonical(obj: Any) -> Any:
    """Recursively convert numpy scalars/arrays and round every float."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return clean_float(obj)
    if isinstance(obj, np.ndarray):
        return [canonical(v) for v in obj.tolist()]
    if isinstance(obj, Mapping):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    return obj


def to_json(doc: Any) -> str:
    return json.dumps(canonical(doc), indent=2, allow_nan=False) + "\n"


def _cell(v: Any) -> str:
    v = canonical(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return ";".join(_cell(x) for x in v)
    return str(v)


def to_csv(rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def to_table(rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> str:
    body = [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(b[i]) for b in body]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(b, widths)).rstrip() for b in body]
    return "\n".join(lines) + "\n"
