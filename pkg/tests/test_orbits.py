import numpy as np
import pytest

from pcubed.groups import FAMILIES, Family
from pcubed.h4_models import h4_model
from pcubed.orbits import enumerate_orbits, expected_orbit_count, orbit_rows

COUNTS = {
    Family.CYCLIC: lambda p: 7,
    Family.P2XP: lambda p: 16,
    Family.ELEM_ABELIAN: lambda p: p + 11,
    Family.HEISENBERG: lambda p: 2 * p + 9,
    Family.GP: lambda p: 3 * p,
}


@pytest.mark.parametrize("fam", FAMILIES)
@pytest.mark.parametrize("p", [3, 5, 7])
def test_orbit_counts(fam, p, indices_for):
    index = indices_for(p)[fam]
    assert len(index.orbits) == COUNTS[fam](p)
    assert expected_orbit_count(fam, p) == COUNTS[fam](p)


@pytest.mark.parametrize("p", [3, 5])
def test_partition_property(p, indices_for):
    for fam in FAMILIES:
        index = indices_for(p)[fam]
        assert sum(index.sizes()) == index.model.total_order


def test_zero_class_is_fixed(indices_for):
    for fam in FAMILIES:
        index = indices_for(3)[fam]
        orbit = index.orbit_of(index.model.zero())
        assert orbit.size == 1
        assert orbit.rep.is_zero()


@pytest.mark.parametrize("p", [3, 5, 7])
def test_named_orbit_sizes(p, indices_for):
    p2 = indices_for(p)[Family.P2XP]
    uv = p2.model.cls((0, 1, 0))
    assert p2.orbit_of(uv).size == p * p * (p - 1)
    u2 = p2.model.cls((0, 0, 1))
    assert p2.orbit_of(u2).size == (p - 1) // 2
    gp = indices_for(p)[Family.GP]
    gamma2 = gp.model.cls((0, 1))
    assert gp.orbit_of(gamma2).size == 1
    assert gp.orbit_of(gamma2).rep == gamma2


@pytest.mark.parametrize("p", [3, 5, 7])
def test_p2xp_orbit_size_multiset(p, indices_for):
    sizes = sorted(indices_for(p)[Family.P2XP].sizes())
    expected = sorted(
        [p * (p * p - p) * (p - 1) // 4] * 4
        + [(p - 1) // 2] * 4
        + [p * (p * p - p) // 2] * 2
        + [(p - 1) ** 2 // 4] * 4
        + [p * p * (p - 1), 1]
    )
    assert sizes == expected
    assert sum(sizes) == p**4


def test_representative_stability(indices_for):
    for fam in FAMILIES:
        index = indices_for(3)[fam]
        for oid, orbit in enumerate(index.orbits):
            for gen in index.generators:
                moved = gen.apply(orbit.rep)
                assert int(index.orbit_id[index.model.encode(moved.coeffs)]) == oid


def test_canonical_representative_is_lex_min(indices_for):
    # exhaustive check at p=3: the representative is the smallest encoded member
    for fam in FAMILIES:
        index = indices_for(3)[fam]
        model = index.model
        firsts = {}
        for state in range(model.total_order):
            oid = int(index.orbit_id[state])
            firsts.setdefault(oid, state)
        for oid, orbit in enumerate(index.orbits):
            assert model.encode(orbit.rep.coeffs) == firsts[oid]


def test_determinism():
    model = h4_model(Family.HEISENBERG, 3)
    a = enumerate_orbits(model)
    b = enumerate_orbits(model)
    assert np.array_equal(a.orbit_id, b.orbit_id)
    assert [(o.rep.coeffs, o.size) for o in a.orbits] == [(o.rep.coeffs, o.size) for o in b.orbits]


def test_state_bound_enforced():
    model = h4_model(Family.ELEM_ABELIAN, 3)
    with pytest.raises(ValueError):
        enumerate_orbits(model, max_states=100)


def test_orbit_rows_shape(indices_for):
    rows = orbit_rows(indices_for(3)[Family.GP])
    assert len(rows) == 9
    assert rows[0]["rep_label"] == "0"
    assert {r["family"] for r in rows} == {"gp"}
    assert sum(r["size"] for r in rows) == 9
