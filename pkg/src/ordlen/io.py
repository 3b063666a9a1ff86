"""JSON readers and writers for posets, expressions, modules, maps and complexes."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .euclid import Ring, RingMatrix, ring_from_json
from .module import FgModule, ModuleMap, make_map
from .ordinal import parse_ordinal, format_ordinal
from .pwo import Chain, Explicit, FinitePoset, Product, PwoExpr, Sum, make_poset

__all__ = [
    "SchemaError",
    "load_json",
    "poset_from_json",
    "pwoexpr_from_json",
    "pwoexpr_to_json",
    "module_from_json",
    "map_from_json",
    "matrix_entries",
]


class SchemaError(ValueError):
    pass


def load_json(path: str | Path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def poset_from_json(obj: Any) -> FinitePoset:
    if not isinstance(obj, dict) or "n" not in obj:
        raise SchemaError('poset needs {"n": int, "le": [[i, j], ...]}')
    pairs = obj.get("le", [])
    if not all(isinstance(p, list) and len(p) == 2 for p in pairs):
        raise SchemaError("le must be a list of [i, j] pairs")
    return make_poset(int(obj["n"]), [(int(i), int(j)) for i, j in pairs])


def pwoexpr_from_json(obj: Any) -> PwoExpr:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise SchemaError(f"expression node must have exactly one key: {obj!r}")
    (key, val), = obj.items()
    if key == "chain":
        return Chain(parse_ordinal(str(val)))
    if key == "explicit":
        return Explicit(poset_from_json(val))
    if key in ("sum", "product"):
        if not isinstance(val, list) or len(val) != 2:
            raise SchemaError(f"{key} takes a list of two expressions")
        left, right = (pwoexpr_from_json(v) for v in val)
        return Sum(left, right) if key == "sum" else Product(left, right)
    raise SchemaError(f"unknown expression node {key!r}")


def pwoexpr_to_json(e: PwoExpr) -> Any:
    if isinstance(e, Chain):
        return {"chain": format_ordinal(e.alpha)}
    if isinstance(e, Explicit):
        return {"explicit": e.poset.to_json()}
    key = "sum" if isinstance(e, Sum) else "product"
    return {key: [pwoexpr_to_json(e.left), pwoexpr_to_json(e.right)]}


def matrix_entries(ring: Ring, entries: Any, rows: int, cols: int) -> RingMatrix:
    """Matrix from nested rows, a flat row-major list, or a full matrix object."""
    if isinstance(entries, dict):
        m = RingMatrix.from_json(entries, ring)
        if (m.rows, m.cols) != (rows, cols):
            raise SchemaError(f"matrix is {m.rows}x{m.cols}, expected {rows}x{cols}")
        return m
    try:
        return RingMatrix.from_json({"ring": None, "rows": rows, "cols": cols, "entries": entries}, ring)
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc)) from None


def module_from_json(obj: Any) -> FgModule:
    if not isinstance(obj, dict) or "ring" not in obj or "generators" not in obj:
        raise SchemaError('module needs {"ring", "generators", "relations"}')
    try:
        ring = ring_from_json(obj["ring"])
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    g = int(obj["generators"])
    rel = obj.get("relations", [])
    if isinstance(rel, dict):
        m = RingMatrix.from_json(rel, ring)
    else:
        if not isinstance(rel, list):
            raise SchemaError("relations must be a list of rows")
        if not rel:
            m = RingMatrix.zeros(ring, g, 0)
        elif isinstance(rel[0], list):
            m = matrix_entries(ring, rel, g, len(rel[0]))
        else:
            raise SchemaError("relations must be a list of rows")
    if m.rows != g:
        raise SchemaError(f"relations have {m.rows} rows for {g} generators")
    return FgModule(ring, g, m)


def _module_ref(ref: Any, base: Path | None) -> FgModule:
    if isinstance(ref, str):
        path = Path(ref) if base is None else base / ref
        return module_from_json(load_json(path))
    return module_from_json(ref)


def map_from_json(obj: Any, base: Path | None = None) -> ModuleMap:
    """``{"source": file-or-module, "target": file-or-module, "matrix": entries}``."""
    if not isinstance(obj, dict) or not {"source", "target", "matrix"} <= obj.keys():
        raise SchemaError('map needs {"source", "target", "matrix"}')
    src, dst = _module_ref(obj["source"], base), _module_ref(obj["target"], base)
    a = matrix_entries(src.ring, obj["matrix"], dst.generators, src.generators)
    return make_map(src, dst, a)
