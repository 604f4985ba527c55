"""The five groups of order p^3, their automorphisms and normal abelian subgroups.

Everything here is brute force over explicit multiplication tables: the
presentations are expanded to normal forms, automorphisms are found by
searching generator images, and the subgroup table is recomputed from scratch.
"""

from pcubed.groups import (
    FAMILIES,
    Family,
    build_group,
    center,
    enumerate_automorphisms,
    normal_abelian_subgroup_classes,
)

p = 3

print(f"== groups of order {p**3} ==")
for fam in FAMILIES:
    G = build_group(fam, p)
    auts = enumerate_automorphisms(G)
    print(f"{fam.value:<13} order {G.order:>3}  |Z| = {len(center(G)):>2}  |Aut| = {len(auts)}")

print()
H = build_group(Family.HEISENBERG, p)
a, b, c = (H.gen_names[x] for x in "ABC")
print("Heisenberg relation check: A*B*A^-1 =", H.word(H.multiply(H.multiply(a, b), H.inv[a])),
      " (B*C =", H.word(H.multiply(b, c)) + ")")

G = build_group(Family.GP, p)
ga, gb = G.gen_names["a"], G.gen_names["b"]
print("order-p^2 group relation:  a*b*a^-1 =", G.word(G.multiply(G.multiply(ga, gb), G.inv[ga])),
      f" (= b^{p+1})")

print()
print("== normal abelian subgroup classes (one line per Aut-class) ==")
for fam in FAMILIES:
    G = build_group(fam, p)
    for cls in normal_abelian_subgroup_classes(G):
        gens = ", ".join(cls.generator_words)
        print(f"{fam.value:<13} type {cls.isomorphism_type!s:<9} members {len(cls.members):>2}   <{gens}>")
