"""Deterministic JSON encoding of experiment reports.

Floats are written with Python's shortest round-trip ``repr``; the
non-finite values ``inf``, ``-inf`` and ``nan`` (which JSON lacks) become
the strings ``"inf"``, ``"-inf"`` and ``"nan"``.  Complex numbers become
``{"re": .., "im": ..}``.  Arrays become ``{"shape": [...], "data": [...]}``
with ``data`` flattened in row-major order.
"""

from __future__ import annotations

import dataclasses
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .intervals import IntervalSet


def _float(v: float):
    if math.isfinite(v):
        return v
    if math.isnan(v):
        return "nan"
    return "inf" if v > 0 else "-inf"


def to_jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, np.bool_):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _float(float(obj.real)), "im": _float(float(obj.imag))}
    if isinstance(obj, np.ndarray):
        return {"shape": list(obj.shape), "data": [to_jsonable(v) for v in obj.ravel().tolist()]}
    if isinstance(obj, IntervalSet):
        return to_jsonable(obj.to_list())
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj):
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__} in a report")


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_report(path: Path, command: str, config: dict, result: Any, summary: str) -> Path:
    from . import __version__

    doc = {"command": command, "config": config, "result": result, "summary": summary,
           "version": __version__}
    path = Path(path)
    path.write_text(dumps(doc), encoding="utf-8")
    return path


def _decode(obj: Any) -> Any:
    if isinstance(obj, str) and obj in ("inf", "-inf", "nan"):
        return float(obj)
    if isinstance(obj, dict):
        if set(obj) == {"re", "im"}:
            return complex(_decode(obj["re"]), _decode(obj["im"]))
        if set(obj) == {"shape", "data"}:
            return np.array([_decode(v) for v in obj["data"]]).reshape(obj["shape"])
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def read_report(path: Path) -> dict:
    """Load a report, turning the encoded complex numbers and arrays back into values."""
    return _decode(json.loads(Path(path).read_text(encoding="utf-8")))
