"""Result rows and their json / csv / text renderings."""

import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional

import numpy as np

CSV_COLUMNS = ("quantity", "params", "value", "stderr", "lower_bound", "upper_bound", "provenance")


@dataclass
class ResultRow:
    """One numeric output row; every row names where its value comes from."""
    quantity: str
    params: dict
    value: Optional[float]
    provenance: str
    stderr: Optional[float] = None
    lower_bound: Optional[float] = None
    upper_bound: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "quantity": self.quantity,
            "params": self.params,
            "value": self.value,
            "stderr": self.stderr,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "provenance": self.provenance,
        }
        out.update(self.extra)
        return make_json_safe(out)


def make_json_safe(obj: Any) -> Any:
    """
    Recursively convert dataclasses, numpy values, fractions and paths into
    plain JSON-serializable Python types. Non-finite floats become strings.
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        obj = obj.to_dict() if hasattr(obj, "to_dict") else dataclasses.asdict(obj)
    if isinstance(obj, dict):
        return {str(k): make_json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [make_json_safe(v) for v in obj]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, Fraction)):
        obj = float(obj)
    if isinstance(obj, np.ndarray):
        return make_json_safe(obj.tolist())
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return json.dumps(make_json_safe(value), sort_keys=True, separators=(",", ":"))
    return str(value)


def render_json(payload: Any) -> str:
    return json.dumps(make_json_safe(payload), indent=2, sort_keys=True) + "\n"


def render_csv(rows: List[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow([_cell(getattr(row, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


def render_text(rows: List[ResultRow]) -> str:
    header = ("quantity", "params", "value", "stderr", "bounds", "provenance")
    body = []
    for r in rows:
        bounds = ""
        if r.lower_bound is not None or r.upper_bound is not None:
            bounds = f"[{_fmt(r.lower_bound)}, {_fmt(r.upper_bound)}]"
        body.append((r.quantity, _cell(r.params), _fmt(r.value), _fmt(r.stderr), bounds, r.provenance))
    widths = [max(len(line[i]) for line in body + [header]) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in [header] + body]
    return "\n".join(lines) + "\n"


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return f"{value:.12g}"


def render_rows(rows: List[ResultRow], fmt: str) -> str:
    if fmt == "csv":
        return render_csv(rows)
    if fmt == "text":
        return render_text(rows)
    if len(rows) == 1:
        return render_json(rows[0].to_dict())
    return render_json([r.to_dict() for r in rows])


def write_output(text: str, out: Optional[str]) -> None:
    """Data goes to --out or stdout; diagnostics never come through here."""
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
