"""
Intermediate algebras and subgroupoids
======================================

Random algebras between the diagonal and the full algebra of a principal
groupoid turn out to be spans of subgroupoids.  The census matches them
one to one.
"""

from glab import algebra_closure, check_galois, delta, galois_extract, pair_groupoid

G = pair_groupoid(["p", "q", "r"])

# one generator: the algebra it generates with the diagonal
B = algebra_closure(G, [delta(G, "(p,q)") + delta(G, "(q,r)") * 2])
print("rank", B.rank, "support", sorted(galois_extract(G, B)))

rep = check_galois(G, trials=32, seed=1)
census = rep.instances[-1]
print("trials pass:", all(i["pass"] for i in rep.instances[:-1]))
print("census:", census["algebras"], "algebras for", len(census["subgroupoids"]), "wide subgroupoids")
for H in census["subgroupoids"]:
    print("  ", H)
