"""Quadratic forms over F_p up to congruence: rank, discriminant class, and h.

Two invariants decide congruence in odd characteristic.  The h selection
picks, per prime, which rank-2 diagonal form avoids the hyperbolic class of
z1*z2 - the entry the merged Morita tables depend on.
"""

from pcubed.quadforms import (
    QuadForm,
    are_congruent,
    congruence_invariant,
    count_congruence_classes,
    representatives,
    select_h,
)

for p in (3, 5, 7):
    print(f"== F_{p} ==")
    for q in representatives(3, p):
        inv = congruence_invariant(q)
        diag = tuple(q.matrix[i][i] for i in range(3))
        print(f"  diag{diag}  rank {inv.rank}  disc {inv.disc_class}")
    print(f"  classes in dimension 3: {count_congruence_classes(3, p)}")
    z1z2 = QuadForm.from_poly(2, p, {(0, 1): 1})
    h = select_h(p)
    print(f"  z1*z2 ~ diag(1,1)? {are_congruent(z1z2, QuadForm.diagonal([1, 1], p))}"
          f"   ->  h = {h}")
    print()
