"""Bundled example groupoids and random desk-scale instances."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .groupoid import (
    FiniteGroupoid,
    GroupAction,
    cyclic_group,
    disjoint_union,
    equivalence_relation,
    symmetric_group,
    transformation_groupoid,
    trivial_groupoid,
    validate_groupoid,
)
from .io import load_json

__all__ = ["BUNDLED", "data_path", "bundled_groupoid", "bundled_groupoids", "bundled_action", "random_groupoid"]

# name -> (file, is_action)
BUNDLED = {
    "R2": ("r2.json", False),
    "Z2": ("z2.json", False),
    "Z3": ("z3.json", False),
    "Z2+Z3": ("z2_z3.json", False),
    "Z2-swap": ("z2_swap.action.json", True),
    "S3-points": ("s3_points.action.json", True),
}


def data_path(filename: str) -> Path:
    return Path(str(resources.files("glab") / "data" / filename))


def bundled_action(name: str) -> GroupAction:
    fname, is_action = BUNDLED[name]
    if not is_action:
        raise KeyError(f"{name} is not an action")
    return GroupAction.from_dict(load_json(data_path(fname)))


def bundled_groupoid(name: str) -> FiniteGroupoid:
    fname, is_action = BUNDLED[name]
    if is_action:
        return transformation_groupoid(bundled_action(name))
    return validate_groupoid(load_json(data_path(fname)))


def bundled_groupoids() -> dict[str, FiniteGroupoid]:
    """The six bundled instances, keyed by name."""
    return {name: bundled_groupoid(name) for name in BUNDLED}


def _components():
    return [
        cyclic_group(1),
        cyclic_group(2),
        cyclic_group(3),
        cyclic_group(4),
        symmetric_group(3),
        equivalence_relation([["p"]]),
        equivalence_relation([["p", "q"]]),
        equivalence_relation([["p", "q", "r"]]),
        equivalence_relation([["p", "q"], ["r"]]),
    ]


def random_groupoid(rng: np.random.Generator, max_arrows: int = 10) -> FiniteGroupoid:
    """Disjoint union of random small groups and equivalence relations."""
    pool = _components()
    G = None
    k = 0
    while True:
        room = max_arrows - (0 if G is None else len(G))
        fits = [c for c in pool if len(c) <= room]
        if not fits or (G is not None and rng.uniform() < 0.3):
            break
        c = fits[int(rng.integers(len(fits)))]
        if G is None:
            G = disjoint_union(c, trivial_groupoid([]), tags=(f"c{k}.", ""))
        else:
            G = disjoint_union(G, c, tags=("", f"c{k}."))
        k += 1
    return G
