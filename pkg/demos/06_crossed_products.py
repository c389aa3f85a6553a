"""
Multipliers on a crossed product
================================

Z/2 swaps two points.  Lifting a group multiplier and averaging a
groupoid multiplier against the invariant measure both keep cb norms
under control.
"""

import numpy as np

from glab import (
    MultiplierSymbol,
    UnitMeasure,
    average_multiplier,
    lift_group_multiplier,
    multiplier_cb_norm,
    transformation_groupoid,
)
from glab.corpus import bundled_action

A = bundled_action("Z2-swap")
G = transformation_groupoid(A)
print("arrows:", G.arrows)

k = lift_group_multiplier(A, {"e": 1.0, "a": 0.25})
print(f"lift: cb = {multiplier_cb_norm(G, k).value:.12f}")

rng = np.random.default_rng(3)
mu = UnitMeasure.uniform(A.space)
for _ in range(5):
    h = MultiplierSymbol(G, rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4))
    ht = average_multiplier(A, h, mu)
    print(f"cb(h) = {multiplier_cb_norm(G, h).value:.6f}   cb(h̃) = {multiplier_cb_norm(ht.groupoid, ht).value:.6f}")
