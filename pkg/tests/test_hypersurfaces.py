import pytest

from fgraph.corpus import connected_multigraphs
from fgraph.graphs import Multigraph, banana, betti1, contract_edge, cycle, delete_edge, disjoint_union, lemon, path
from fgraph.hypersurfaces import (
    Undetermined, chi_projective_by_counting, chi_theorems_check, class_banana, class_lemon_complement,
    class_via_closed_form, class_via_counting, class_via_delcon, graph_classes, kirchhoff_polynomial,
    vanishing_order_check,
)
from fgraph.motive import IntPoly, L, T
from fgraph.pointcount import BudgetExceeded, MultiPoly

BANANA15 = (14, 106, 454, 1366, 3002, 5006, 6434, 6436, 5004, 3004, 1364, 456, 104, 1)


def test_kirchhoff_examples():
    assert kirchhoff_polynomial(path(1)) == MultiPoly.constant(1, 1)
    t = [MultiPoly.variable(3, i) for i in range(3)]
    assert kirchhoff_polynomial(banana(3)) == t[0] * t[1] + t[0] * t[2] + t[1] * t[2]
    assert kirchhoff_polynomial(cycle(3)) == t[0] + t[1] + t[2]


def test_closed_forms():
    assert class_banana(15).to_basis("T").coeffs == BANANA15
    assert class_banana(3).to_basis("T") == T + 2
    assert class_lemon_complement(1) == T * (T + 1) ** 2


def test_loop_and_tree():
    assert class_via_delcon(cycle(1)) == IntPoly.const(1)
    rep = graph_classes(path(3))
    assert rep.affine_class.is_zero() and rep.affine_complement_class == L**3


@pytest.mark.parametrize("m", [1, 2, 3])
def test_lemon_closed_form_matches_delcon(m):
    g = lemon(m)
    assert L ** g.n_edges - class_via_delcon(g) == class_lemon_complement(m)


def test_three_routes_small_corpus():
    for g in connected_multigraphs(4):
        d = class_via_delcon(g)
        c, _ = class_via_counting(g)
        assert d == c, g
        cf = class_via_closed_form(g)
        if cf is not None:
            assert cf == d


def test_counting_budget_is_an_error():
    with pytest.raises(BudgetExceeded):
        class_via_counting(banana(9), budget=1000)


def test_f1_verdicts():
    rep = graph_classes(banana(4), "closed-form")
    assert rep.f1_verdict.entries["X"]["chi_ok"] and rep.f1_verdict.entries["X"]["T_nonnegative"]
    assert rep.chi_Y == -1 and not rep.f1_verdict.entries["Y"]["chi_ok"]
    assert not graph_classes(banana(5), "closed-form").f1_verdict.entries["Y"]["T_nonnegative"]
    assert graph_classes(path(2)).f1_verdict.entries["Y_hat"]["T_nonnegative"]


def test_chi_examples():
    assert chi_projective_by_counting([kirchhoff_polynomial(cycle(3))], 3)[0] == 2
    two_triangles = disjoint_union(cycle(3), cycle(3))
    g = Multigraph(6, two_triangles.edges + ((0, 3),))
    res = chi_theorems_check(g)
    assert res["chi_X"] == 7
    b4 = banana(4)
    d, _ = delete_edge(b4, 0)
    c, _ = contract_edge(b4, 0)
    assert chi_projective_by_counting([kirchhoff_polynomial(b4)], 4)[0] == 5
    inter = [kirchhoff_polynomial(d), kirchhoff_polynomial(c)]
    assert chi_projective_by_counting(inter, 3)[0] == 3


def test_bridge_statement_needs_cycles_on_both_sides():
    # triangle with a pendant edge: b1 = 1 forces chi = n - 1, not n
    g = Multigraph(4, cycle(3).edges + ((0, 3),))
    res = chi_theorems_check(g)
    bl = [c for c in res["checks"] if c["statement"] == "bridge_or_loop"][0]
    assert res["chi_X"] == 3 and not bl["holds"] and not bl["cycles_on_both_sides"]


def test_vanishing_order_with_hypothesis():
    g = Multigraph(2, ((0, 0), (0, 1), (0, 1), (1, 1)))
    rows = vanishing_order_check(g)
    assert rows and all(r["holds"] for r in rows if r["cycles_on_both_sides"])


def test_chi_y_values_on_small_corpus():
    for g in connected_multigraphs(5):
        if betti1(g) == 0:
            continue
        rep = graph_classes(g)
        assert rep.chi_Y in (-1, 0, 1)
        if betti1(g) == 1:
            assert rep.chi_Y == 1
