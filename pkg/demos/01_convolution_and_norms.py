"""
Convolution algebra of a finite groupoid
========================================

Builds the pair groupoid on two points, multiplies a few functions and
looks at the regular representation and the reduced norm.
"""

import numpy as np

from glab import adjoint, convolve, delta, pair_groupoid, reduced_norm, rep_blocks, sup_norm

# the pair groupoid on {p, q}: (a,b) goes from b to a
G = pair_groupoid(["p", "q"])
print("arrows:", G.arrows)
print("units: ", G.units)

# δ_(p,q) ∗ δ_(q,p) is the unit at p
print(convolve(delta(G, "(p,q)"), delta(G, "(q,p)")))

# a generic element and its blocks π_x(f), one per unit
f = delta(G, "(p,p)") + delta(G, "(p,q)") * (0.5 - 0.5j) + delta(G, "(q,p)") * 2
for x, blk in rep_blocks(G, f).items():
    print(x, blk.basis)
    print(np.round(blk.matrix, 3))

# reduced norm is the largest operator norm over the blocks
n = reduced_norm(G, f)
print(f"‖f‖_r = {n:.12f}, ‖f‖_∞ = {sup_norm(f):.12f}")
print(f"‖f*∗f‖_r − ‖f‖_r² = {reduced_norm(G, adjoint(f) @ f) - n**2:.2e}")
