"""Shared JSON emission rules for the CLI and scripts.

Numbers are serialized with 10 significant digits; consumers must compare
with tolerances, never string equality.
"""

from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass

import numpy as np


def round_sig(x: float, sig: int = 10) -> float:
    if x != x or x in (float("inf"), float("-inf")):
        return x
    return float(f"{x:.{sig}g}")


def jsonable(obj):
    """Recursively convert results into JSON-serializable structures."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return None if x != x else round_sig(x)
    if isinstance(obj, (np.integer, int)) or obj is None or isinstance(obj, (str, bool)):
        return int(obj) if isinstance(obj, np.integer) else obj
    if isinstance(obj, complex):
        return [round_sig(obj.real), round_sig(obj.imag)]
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _key(k) -> str:
    if isinstance(k, tuple):
        return ",".join(str(p) for p in k)
    return str(k)


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2)
