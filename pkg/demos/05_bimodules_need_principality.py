"""
Bimodules over the diagonal
===========================

On a principal groupoid a bimodule is determined by its support.  On the
group Z/2 the diagonal is just the scalars and the statement fails.
"""

import warnings

from glab import (
    NonPrincipalWarning,
    bimodule_closure,
    bimodule_spectrum,
    delta,
    group_groupoid,
    pair_groupoid,
)

R2 = pair_groupoid(["p", "q"])
U, rep = bimodule_spectrum(R2, bimodule_closure(R2, [delta(R2, "(p,q)")]))
print("R2:", sorted(U), "pass", rep.passed)
for w in rep.witnesses:
    print("   normalizer on", w["bisection"], w["m"])

Z2 = group_groupoid(["e", "a"], [[0, 1], [1, 0]])
with warnings.catch_warnings():
    warnings.simplefilter("ignore", NonPrincipalWarning)
    U, rep = bimodule_spectrum(Z2, bimodule_closure(Z2, [delta(Z2, "e") + delta(Z2, "a")]))
inst = rep.instances[0]
print(f"Z/2: support {sorted(U)}, rank M = {inst['rank_M']}, rank A_U = {inst['rank_A_U']}")
print("expected failure:", rep.expected_failure)
