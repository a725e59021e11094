"""JSON interchange: lattices in, exact values out."""
from __future__ import annotations

import enum
import json
from fractions import Fraction
from pathlib import Path

from .lattice import Lattice, make_lattice

BIG = 2 ** 53


class BadInput(ValueError):
    """Input file missing, unreadable or not a lattice description."""


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise BadInput(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadInput(f"{path} is not valid JSON: {exc.msg}") from exc


def lattice_from_obj(obj) -> Lattice:
    """Accept ``{"gram": [[...]], "label": ...}`` or a bare list of rows."""
    label = None
    if isinstance(obj, dict):
        if "gram" not in obj:
            raise BadInput('expected an object with a "gram" field')
        label = obj.get("label")
        obj = obj["gram"]
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise BadInput("a Gram matrix must be a list of rows")
    return make_lattice(obj, label)


def read_lattice(path) -> Lattice:
    return lattice_from_obj(read_json(path))


def to_plain(obj, flags: list):
    """Convert results to JSON-ready values; large integers become strings."""
    if hasattr(obj, "to_json"):
        return to_plain(obj.to_json(), flags)
    if isinstance(obj, bool) or obj is None or isinstance(obj, float):
        return obj
    if isinstance(obj, int):
        if abs(obj) >= BIG:
            flags.append(True)
            return str(obj)
        return obj
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else to_plain(int(obj), flags)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_plain(v, flags) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_plain(v, flags) for v in items]
    return str(obj)


def dumps(obj) -> str:
    flags: list = []
    out = to_plain(obj, flags)
    if flags and isinstance(out, dict):
        out["bigint"] = True
    return json.dumps(out, sort_keys=True)
