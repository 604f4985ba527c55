import csv
import io
import json

import pytest

from pcubed.groups import Family
from pcubed.h4_models import h4_model
from pcubed.lhs_morita import (
    CASE_IDS,
    all_edges,
    build_cases,
    consistency_checks,
    emit_table,
    expected_component_count,
    morita_components,
    morita_edges,
    nontrivial_rows,
    omega,
    verify_pages,
)


def test_cases_and_realized_families():
    cases = build_cases(3)
    assert [c.case_id for c in cases] == list(CASE_IDS)
    realized = {c.case_id: {r.family for r in c.realized} for c in cases}
    assert realized[CASE_IDS[0]] == {Family.CYCLIC, Family.P2XP}
    assert realized[CASE_IDS[1]] == {Family.GP}
    assert realized[CASE_IDS[2]] == {Family.CYCLIC, Family.P2XP}
    assert realized[CASE_IDS[3]] == {Family.ELEM_ABELIAN, Family.P2XP}
    assert realized[CASE_IDS[4]] == {
        Family.ELEM_ABELIAN,
        Family.P2XP,
        Family.HEISENBERG,
        Family.GP,
    }
    assert realized[CASE_IDS[5]] == {Family.HEISENBERG, Family.GP}


def test_case_k_invariants():
    case5 = build_cases(3)[4]
    kinv = {r.family: r.k_invariant for r in case5.realized}
    assert kinv[Family.ELEM_ABELIAN] == "0"
    assert kinv[Family.P2XP] == "y1"
    assert kinv[Family.HEISENBERG] == "x1x2"
    assert kinv[Family.GP] == "y2+x1x2"


@pytest.mark.parametrize("p", [3, 5])
def test_omega_orders(p):
    # zero span for the twisted (Z/p)^2 extension of the order-p^2 group
    om = omega(CASE_IDS[5], Family.GP, p)
    assert om.order == 1
    assert om.contains(h4_model(Family.GP, p).zero())
    # order p, quotient side only
    om = omega(CASE_IDS[0], Family.CYCLIC, p)
    assert om.order == p and om.sub_order == 1 and om.quot_order == p
    # order p^2 with bases p^2 s^2 and p s^2
    om = omega(CASE_IDS[2], Family.CYCLIC, p)
    assert om.order == p * p
    assert om.sub_basis == (("s^2", p * p),) and om.quot_basis == (("s^2", p),)
    cyc = h4_model(Family.CYCLIC, p)
    assert om.contains(cyc.cls((p,)))
    assert not om.contains(cyc.cls((1,)))
    # the central-extension span is the whole Heisenberg model
    om = omega(CASE_IDS[4], Family.HEISENBERG, p)
    assert om.order == p**4
    # and the (Z/p)^3 span misses exactly the y3^2 coordinate
    om = omega(CASE_IDS[4], Family.ELEM_ABELIAN, p)
    assert om.order == p**6
    E = h4_model(Family.ELEM_ABELIAN, p)
    assert not om.contains(E.cls((0, 0, 1, 0, 0, 0, 0)))


def test_omega_unrealized_family_rejected():
    with pytest.raises(ValueError):
        omega(CASE_IDS[1], Family.HEISENBERG, 3)


@pytest.mark.parametrize("p", [3, 5])
def test_omega_order_factors(p):
    for case in build_cases(p):
        for realized in case.realized:
            om = omega(case, realized.family, p)
            assert om.order == om.sub_order * om.quot_order


@pytest.mark.parametrize("p", [3, 5, 7])
def test_verify_pages(p):
    checks = verify_pages(p)
    failures = [c for c in checks if not c.ok]
    assert not failures, "\n".join(c.line() for c in failures)


def test_edge_examples():
    p = 3
    e1 = morita_edges(CASE_IDS[0], p)
    assert len(e1) == 1
    assert e1[0].left.coeffs == (0,) and e1[0].right.coeffs == (0, 1, 0)

    e6 = morita_edges(CASE_IDS[5], p)
    assert len(e6) == p
    l0 = e6[0]
    assert l0.left.model.family is Family.GP and l0.left.is_zero()
    assert l0.right.coeffs == (0, 0, 0, 1)  # z1z2

    e5 = morita_edges(CASE_IDS[4], p)
    gp_k1 = [
        e
        for e in e5
        if e.left.model.family is Family.GP and e.left.coeffs == (0, 1)
    ]
    assert len(gp_k1) == 1
    assert gp_k1[0].right.coeffs == (1, 0, 0, 0, 0, 1, p - 1)

    assert morita_edges(CASE_IDS[1], p) == []


@pytest.mark.parametrize("p", [3, 5])
def test_edges_lie_in_omega_spans(p):
    for case in build_cases(p):
        for edge in morita_edges(case, p):
            for cls in (edge.left, edge.right):
                assert omega(case, cls.model.family, p).contains(cls)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_component_counts(p, graph_for):
    graph = graph_for(p)
    assert len(graph.components) == expected_component_count(p) == 5 * p + 32
    hist = graph.size_histogram()
    assert hist.get(2, 0) == p + 9
    assert hist.get(3, 0) == 1
    assert max(hist) == 3
    assert len(graph.nontrivial()) == p + 10


@pytest.mark.parametrize("p", [3, 5])
def test_triple_component_contents(p, graph_for):
    graph = graph_for(p)
    triple = next(c for c in graph.components if len(c) == 3)
    families = [fam for fam, _ in triple]
    assert families == [Family.ELEM_ABELIAN, Family.HEISENBERG, Family.GP]
    by_fam = dict(triple)
    assert by_fam[Family.GP].is_zero()
    E = h4_model(Family.ELEM_ABELIAN, p)
    H = h4_model(Family.HEISENBERG, p)
    assert graph.indices[Family.ELEM_ABELIAN].rep_of(
        E.cls((0, 0, 0, 0, 0, 1, 1))
    ) == by_fam[Family.ELEM_ABELIAN]
    assert graph.indices[Family.HEISENBERG].rep_of(H.cls((0, 0, 0, 1))) == by_fam[Family.HEISENBERG]


@pytest.mark.parametrize("p", [3, 5])
def test_consistency_checks(p, graph_for):
    checks = consistency_checks(p, graph=graph_for(p))
    failures = [c for c in checks if not c.ok]
    assert not failures, "\n".join(c.line() for c in failures)


def test_duplicate_edges_are_harmless(graph_for):
    p = 3
    graph = graph_for(p)
    doubled = all_edges(p) + all_edges(p)
    again = morita_components(p, indices=graph.indices, edges=doubled)
    assert len(again.components) == len(graph.components)


def test_emit_markdown(graph_for):
    text = emit_table(3, fmt="md", graph=graph_for(3))
    lines = [l for l in text.splitlines() if l.startswith("|")]
    assert len(lines) == 2 + 13  # header, separator, p+10 rows
    assert "nontrivial Morita classes: 13" in text
    assert "(h = 1)" in text


def test_emit_csv(graph_for):
    text = emit_table(5, fmt="csv", graph=graph_for(5))
    rows = list(csv.reader(io.StringIO(text)))
    assert len(rows) == 1 + 15
    assert rows[0][0] == "Z/125"


def test_emit_json_round_trip(graph_for):
    blob = json.loads(emit_table(3, fmt="json", graph=graph_for(3)))
    assert blob["p"] == 3
    assert blob["h"] == 1
    assert len(blob["components"]) == 47
    sizes = sorted(len(c["members"]) for c in blob["components"])
    assert sizes.count(1) == 34 and sizes.count(2) == 12 and sizes.count(3) == 1


def test_nontrivial_rows_block_structure(graph_for):
    rows = nontrivial_rows(graph_for(3))
    blocks = [tuple(sorted(f.value for f in row)) for row in rows]
    # three cyclic/product rows, then product/elementary, then the mixed blocks
    assert blocks[:3] == [("cyclic", "p2xp")] * 3
    assert blocks[3:6] == [("elem_abelian", "p2xp")] * 3
    assert blocks[6:10] == [("elem_abelian", "heisenberg")] * 4
    assert blocks[10] == ("elem_abelian", "gp", "heisenberg")
    assert blocks[11:] == [("elem_abelian", "gp")] * 2
