import random

import pytest

from pcubed.graded_ring import (
    Generator,
    RingPresentation,
    bockstein,
    cyclic_s_ring,
    derivation,
    exterior_bockstein_ring,
    heisenberg_base_ring,
    kunneth_uv_ring,
    r_gamma_ring,
    ring_map,
    verify_identity_suite,
)


@pytest.fixture
def ext3():
    return exterior_bockstein_ring(3, 3)


def test_koszul_sign(ext3):
    x1, x2 = ext3.gen("x1"), ext3.gen("x2")
    assert x1 * x2 == ext3.monomial("x1", "x2")
    assert x2 * x1 == ext3.monomial("x1", "x2", coeff=-1)
    assert (x1 * x1).is_zero()


def test_even_generators_commute(ext3):
    y1, y2 = ext3.gen("y1"), ext3.gen("y2")
    assert y1 * y2 == y2 * y1
    assert not (y1 * y1).is_zero()


def test_quadratic_product_expansion():
    # (a z1 + c z2)(b z1 + d z2) = ab z1^2 + (ad + bc) z1 z2 + cd z2^2
    R = heisenberg_base_ring(5)
    z1, z2 = R.gen("z1"), R.gen("z2")
    a, b, c, d = 2, 3, 4, 1
    lhs = (a * z1 + c * z2) * (b * z1 + d * z2)
    rhs = (a * b) * (z1 * z1) + (a * d + b * c) * (z1 * z2) + (c * d) * (z2 * z2)
    assert lhs == rhs


def test_mixed_torsion_square():
    # (k u + i v)^2 = k^2 u^2 + 2ik uv + i^2 v^2 with the uv coefficient mod p
    p = 3
    R = kunneth_uv_ring(p)
    u, v = R.gen("u"), R.gen("v")
    k, i = 2, 4
    sq = (k * u + i * v) * (k * u + i * v)
    assert sq.coefficient("u", "u") == k * k % p
    assert sq.coefficient("u", "v") == 2 * i * k % p
    assert sq.coefficient("v", "v") == i * i % (p * p)


def test_bockstein_three_term_expansion(ext3):
    # independent oracle: the signed three-term sum, assembled by hand
    x1, x2, x3 = (ext3.gen(f"x{i}") for i in (1, 2, 3))
    y1, y2, y3 = (ext3.gen(f"y{i}") for i in (1, 2, 3))
    expected = y1 * x2 * x3 - x1 * y2 * x3 + x1 * x2 * y3
    assert bockstein(x1 * x2 * x3) == expected
    assert bockstein(x2 * x3) == y2 * x3 - x2 * y3


def test_bockstein_squares_to_zero_on_random_elements():
    rng = random.Random(41)
    R = exterior_bockstein_ring(3, 5)
    labels = [g.label for g in R.gens]
    for _ in range(80):
        el = R.zero()
        for _ in range(rng.randrange(1, 5)):
            mon = tuple(rng.choice(labels) for _ in range(rng.randrange(1, 4)))
            el = el + R.element({mon: rng.randrange(1, 5)})
        assert bockstein(bockstein(el)).is_zero()


def _random_homogeneous(R, degree, rng):
    by_degree = {}
    labels = [g.label for g in R.gens]
    for a in labels:
        for b in labels:
            mon = R.sort_with_sign((a, b))
            if mon is None:
                continue
            d = R.degree(a) + R.degree(b)
            by_degree.setdefault(d, set()).add(mon[0])
    for a in labels:
        by_degree.setdefault(R.degree(a), set()).add((a,))
    pool = sorted(by_degree.get(degree, set()))
    el = R.zero()
    if not pool:
        return el
    for _ in range(rng.randrange(1, 4)):
        el = el + R.element({rng.choice(pool): rng.randrange(1, R.p)})
    return el


def test_graded_commutativity_property():
    rng = random.Random(17)
    R = exterior_bockstein_ring(3, 3)
    for _ in range(100):
        da, db = rng.choice([1, 2, 3]), rng.choice([1, 2, 3])
        a = _random_homogeneous(R, da, rng)
        b = _random_homogeneous(R, db, rng)
        sign = -1 if (da % 2 and db % 2) else 1
        assert a * b == sign * (b * a)


def test_associativity_property():
    rng = random.Random(19)
    R = exterior_bockstein_ring(3, 5)
    for _ in range(80):
        a = _random_homogeneous(R, rng.choice([1, 2]), rng)
        b = _random_homogeneous(R, rng.choice([1, 2]), rng)
        c = _random_homogeneous(R, rng.choice([1, 2]), rng)
        assert (a * b) * c == a * (b * c)


def test_derivation_leibniz_property():
    rng = random.Random(23)
    R = exterior_bockstein_ring(3, 5)
    beta = R.bockstein_map()
    for _ in range(100):
        da, db = rng.choice([1, 2]), rng.choice([1, 2, 3])
        a = _random_homogeneous(R, da, rng)
        b = _random_homogeneous(R, db, rng)
        lhs = beta(a * b)
        sign = -1 if da % 2 else 1
        rhs = beta(a) * b + sign * (a * beta(b))
        assert lhs == rhs


def test_ring_map_multiplicative():
    rng = random.Random(29)
    R = exterior_bockstein_ring(3, 3)
    x = {i: R.gen(f"x{i}") for i in (1, 2, 3)}
    y = {i: R.gen(f"y{i}") for i in (1, 2, 3)}
    m = ring_map(
        R,
        {
            "x1": x[1] + 2 * x[2],
            "y1": y[1] + 2 * y[2],
            "x2": x[3],
            "y2": y[3],
            "x3": x[1],
            "y3": y[1],
        },
    )
    for _ in range(60):
        a = _random_homogeneous(R, rng.choice([1, 2]), rng)
        b = _random_homogeneous(R, rng.choice([1, 2]), rng)
        assert m(a * b) == m(a) * m(b)


def test_apply_map_examples():
    p = 3
    E = exterior_bockstein_ring(3, p)
    y1, y3 = E.gen("y1"), E.gen("y3")
    d2 = derivation(E, {"x2": y1}, shift=1)
    assert d2(bockstein(E.gen("x2") * E.gen("x3"))) == -1 * (y1 * y3)

    H = heisenberg_base_ring(p)
    t = H.gen("t")
    m = ring_map(H, {"t": 2 * t})  # det(M) = 2
    assert m(t) == 2 * t

    ident = ring_map(E, {})
    el = y1 * y3 + 2 * bockstein(E.gen("x1") * E.gen("x2"))
    assert ident(el) == el


def test_map_validation():
    R = kunneth_uv_ring(3)
    u, v = R.gen("u"), R.gen("v")
    with pytest.raises(ValueError):
        ring_map(R, {"u": v})  # order p image would need order <= p
    R2 = exterior_bockstein_ring(2, 3)
    with pytest.raises(ValueError):
        ring_map(R2, {"x1": R2.gen("y1")})  # degree mismatch
    with pytest.raises(ValueError):
        derivation(R2, {"x1": R2.gen("x2")}, shift=1)


def test_torsion_reduction_kills_cross_terms():
    # tau: gam -> gam + p r fixes gam^2: 2p r gam and p^2 r^2 both vanish
    p = 5
    R = r_gamma_ring(p)
    r, gam = R.gen("r"), R.gen("gam")
    tau = ring_map(R, {"gam": gam + p * r})
    assert tau(gam * gam) == gam * gam
    assert ((p * p) * (r * r)).is_zero()
    assert ((2 * p) * (r * gam)).is_zero()


def test_cyclic_ring_orders():
    R = cyclic_s_ring(3)
    s = R.gen("s")
    assert not (26 * (s * s)).is_zero()
    assert (27 * (s * s)).is_zero()


@pytest.mark.parametrize("p", [3, 5])
def test_identity_suite_all_pass(p):
    checks = verify_identity_suite(p)
    assert len(checks) >= 12
    failures = [c for c in checks if not c.ok]
    assert not failures, "\n".join(c.line() for c in failures)


def test_identity_suite_names_are_unique():
    names = [c.name for c in verify_identity_suite(3)]
    assert len(names) == len(set(names))


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        RingPresentation([Generator("a", 1, 3), Generator("a", 2, 3)], 3)
