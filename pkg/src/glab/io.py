"""JSON file formats for groupoids, actions, functions, multipliers and nets."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .algebra import ArrowFunction, from_coeffs
from .groupoid import FiniteGroupoid, GroupAction, GroupoidError, validate_groupoid
from .multipliers import FejerNet, MultiplierSymbol

__all__ = [
    "load_json",
    "load_groupoid",
    "load_action",
    "load_function",
    "load_multiplier",
    "load_net",
    "function_to_json",
    "dumps",
]


def load_json(source: str | Path | dict | list) -> Any:
    if isinstance(source, (dict, list)):
        return source
    with open(source, encoding="utf-8") as fh:
        return json.load(fh)


def load_groupoid(source) -> FiniteGroupoid:
    """Groupoid file, or an action file (turned into its transformation groupoid)."""
    raw = load_json(source)
    if not isinstance(raw, dict):
        raise GroupoidError(["groupoid file must hold a JSON object"])
    if "cayley" in raw:
        from .groupoid import transformation_groupoid

        return transformation_groupoid(GroupAction.from_dict(raw))
    return validate_groupoid(raw)


def load_action(source) -> GroupAction:
    return GroupAction.from_dict(load_json(source))


def _coeff_map(raw: dict, key: str) -> dict:
    try:
        return {str(a): complex(float(v[0]), float(v[1])) if isinstance(v, (list, tuple)) else complex(v)
                for a, v in raw[key].items()}
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        raise ValueError(f"malformed {key!r} table: {exc!r}") from None


def load_function(source, G: FiniteGroupoid | None = None) -> ArrowFunction:
    """``{"groupoid": path-or-inline, "coeffs": {arrow: [re, im]}}``.

    When ``G`` is given the embedded groupoid reference may be omitted; if
    present it must describe the same groupoid.
    """
    raw = load_json(source)
    ref = raw.get("groupoid")
    if ref is not None:
        if isinstance(ref, str) and isinstance(source, (str, Path)):
            ref = Path(source).parent / ref
        H = load_groupoid(ref)
        if G is not None and H != G:
            raise ValueError("function file refers to a different groupoid")
        G = H
    if G is None:
        raise ValueError("function file names no groupoid")
    return from_coeffs(G, _coeff_map(raw, "coeffs"))


def function_to_json(f: ArrowFunction, groupoid_ref: str | dict | None = None) -> dict:
    return {"groupoid": groupoid_ref if groupoid_ref is not None else f.groupoid.to_dict(), "coeffs": f.to_dict()}


def load_multiplier(source, G: FiniteGroupoid) -> MultiplierSymbol:
    """``{"h": {arrow: [re, im]}}``; arrows left out get the value 0."""
    return MultiplierSymbol.from_coeffs(G, _coeff_map(load_json(source), "h"))


def load_net(source, G: FiniteGroupoid) -> FejerNet:
    """``{"net": [multiplier, ...], "eps": real}`` or a bare list of multipliers."""
    raw = load_json(source)
    if isinstance(raw, list):
        items, eps = raw, 1e-6
    else:
        items, eps = raw.get("net"), float(raw.get("eps", 1e-6))
    if not isinstance(items, list) or not items:
        raise ValueError("net file must list at least one multiplier")
    return FejerNet(tuple(load_multiplier(m, G) for m in items), eps)


def dumps(obj: Any, digits: int = 12) -> str:
    """Deterministic JSON with every float printed to ``digits`` decimals."""
    marks: list[str] = []

    def walk(o):
        if isinstance(o, bool) or o is None or isinstance(o, (int, str)):
            return o
        if isinstance(o, float):
            if not math.isfinite(o):
                return str(o)
            marks.append(f"{o:.{digits}f}" if abs(o) < 1e15 else repr(o))
            return f"\x00{len(marks) - 1}\x00"
        if isinstance(o, dict):
            return {str(k): walk(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [walk(v) for v in o]
        if hasattr(o, "item"):
            return walk(o.item())
        raise TypeError(f"cannot serialize {type(o).__name__}")

    text = json.dumps(walk(obj), sort_keys=True, indent=2, ensure_ascii=False)
    for k, m in enumerate(marks):
        text = text.replace(f'"\\u0000{k}\\u0000"', m, 1)
    return text
