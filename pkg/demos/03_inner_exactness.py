"""
Exact sequences for invariant subsets
=====================================

For a disjoint union of two cyclic groups every invariant set of units
splits the algebra; the rank count below confirms exactness.
"""

from glab import check_inner_exact, cyclic_group, disjoint_union, invariant_subsets

G = disjoint_union(cyclic_group(2, "a"), cyclic_group(3, "b"))
print("invariant subsets:", [sorted(F) for F in invariant_subsets(G)])

rep = check_inner_exact(G)
for inst in rep.instances:
    print(f"F={inst['F']!s:16} dim ker π={inst['dim_kernel']}  dim im ι={inst['dim_image']}  pass={inst['pass']}")
print("inner exact:", rep.passed)
