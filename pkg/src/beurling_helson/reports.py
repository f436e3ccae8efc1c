"""CSV/JSON writers with fixed column orders and deterministic formatting."""

from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

CSV_SCHEMAS: dict[str, tuple[str, ...]] = {
    "spectrum": ("k", "re", "im"),
    "pipeline": ("n", "norm_phi_N", "norm_phi"),
    "growth": ("n", "norm", "grid", "converged"),
    "growth_long": ("n", "series", "value"),
    "sections": ("sweep", "instances", "violations", "worst_slack", "worst_ratio"),
    "littlewood": ("N", "strategy", "best_ratio", "envelope", "alt_envelope", "witness"),
    "operators": ("n", "power_norm", "support_width", "tail_mass"),
}


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dumps_json(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def dumps_csv(schema: str, rows: Iterable[Sequence[Any]]) -> str:
    header = CSV_SCHEMAS[schema]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"{schema}: row has {len(row)} cells, expected {len(header)}")
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def emit(text: str, out: str | Path | None) -> None:
    if out is None:
        print(text, end="")
    else:
        Path(out).write_text(text)


def load_schema(name: str) -> dict:
    ref = resources.files("beurling_helson") / "schemas" / f"{name}.schema.json"
    return json.loads(ref.read_text())
