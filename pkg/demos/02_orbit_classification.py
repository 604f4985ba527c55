"""Orbits of the automorphism actions on H^4: the 6p+43 equivalence classes.

Each family's degree-4 cohomology is a small coefficient lattice; the
automorphism group acts through integer matrices and the orbits fall out of a
vectorized breadth-first closure.  Totals follow the 6p+43 pattern.
"""

from pcubed.groups import FAMILIES
from pcubed.h4_models import h4_model
from pcubed.orbits import enumerate_orbits

for p in (3, 5, 7):
    counts = {}
    for fam in FAMILIES:
        index = enumerate_orbits(h4_model(fam, p))
        counts[fam] = len(index.orbits)
    total = sum(counts.values())
    line = "  ".join(f"{fam.value}={n}" for fam, n in counts.items())
    print(f"p={p}:  {line}  total={total} (= 6*{p}+43)")

print()
p = 5
index = enumerate_orbits(h4_model(FAMILIES[1], p))  # Z/p^2 x Z/p
print(f"orbits of the rank-2 product group at p={p} (representative, size):")
for orbit in index.orbits:
    print(f"  {orbit.rep.label():<22} size {orbit.size}")
print("sizes sum to", sum(o.size for o in index.orbits), "=", p, "^4")
