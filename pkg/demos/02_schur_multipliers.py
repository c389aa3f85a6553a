"""
Completely bounded norms of Schur multipliers
==============================================

The multiplier f ↦ h·f acts on each block as an entrywise product with
H_x(γ, γ') = h(γγ'⁻¹).  Its cb norm is the largest γ₂ norm of these
symbols, computed here with primal and dual certificates.
"""

import numpy as np
from scipy.linalg import hadamard

from glab import MultiplierSymbol, gamma2, group_groupoid, multiplier_cb_norm

# γ₂ of a Hadamard matrix of order n is √n
for n in (2, 4, 8):
    res = gamma2(hadamard(n))
    print(f"n={n}: γ₂ = {res.value:.9f}  certified in [{res.lower:.12f}, {res.upper:.12f}]")

# a sign character of Z/4 gives a rank-one PSD symbol, cb norm 1
Z4 = group_groupoid(["e", "g", "g2", "g3"], (np.arange(4)[:, None] + np.arange(4)) % 4)
chi = MultiplierSymbol.from_coeffs(Z4, {"e": 1, "g": -1, "g2": 1, "g3": -1})
print("character:", f"{multiplier_cb_norm(Z4, chi).value:.12f}")

# an arbitrary symbol, with the unit attaining the maximum
rng = np.random.default_rng(0)
h = MultiplierSymbol(Z4, rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4))
cb = multiplier_cb_norm(Z4, h)
print(f"random symbol: cb = {cb.value:.12f} at unit {cb.unit}, gap {cb.upper - cb.lower:.1e}")
print(np.round(h.schur("e"), 3))
