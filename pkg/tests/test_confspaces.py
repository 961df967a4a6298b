import pytest

from fgraph.confspaces import (
    blowup_oracle, conf_class, conf_euler, conf_report, enumerate_nests, nest_rank,
)
from fgraph.graphs import Multigraph, complete, cycle, path
from fgraph.motive import IntPoly, L, euler_characteristic, is_T_nonnegative

P = IntPoly.projective_space


def test_nest_examples():
    assert enumerate_nests(path(1)) == [(frozenset({0, 1}),)]
    assert len(enumerate_nests(path(2))) == 3
    assert len(enumerate_nests(cycle(3))) == 7


def test_ranks():
    g = path(1)
    whole = frozenset({0, 1})
    assert nest_rank(g, (whole,), whole, 2) == 2
    tri = cycle(3)
    top = frozenset({0, 1, 2})
    assert nest_rank(tri, (top,), top, 1) == 2
    e = frozenset({0, 1})
    for D in (1, 2, 3):
        assert nest_rank(tri, (e, top), e, D) == D
        assert nest_rank(tri, (e, top), top, D) == D


def test_class_examples():
    assert conf_class(path(1), 1) == P(1) ** 2
    assert conf_class(path(1), 2) == P(2) ** 2 + P(2) * L
    assert conf_class(path(1), 2) == P(2) ** 2 + P(2) * (P(1) - 1)


@pytest.mark.parametrize("g", [path(1), path(2), cycle(3)])
@pytest.mark.parametrize("D", [1, 2, 3])
def test_blowup_oracle(g, D):
    assert blowup_oracle(g, D) == conf_class(g, D)


def test_oracle_rejects_other_shapes():
    with pytest.raises(ValueError):
        blowup_oracle(complete(4), 1)


@pytest.mark.parametrize("g", [complete(4), cycle(4), path(3)])
def test_euler_and_positivity(g):
    for D in (1, 2, 3):
        c = conf_class(g, D)
        assert euler_characteristic(c) == conf_euler(g, D)
        assert is_T_nonnegative(c)[0]


def test_loops_rejected_and_report():
    with pytest.raises(ValueError):
        conf_class(Multigraph(1, ((0, 0),)), 1)
    rep = conf_report(cycle(3), 2, oracle=True)
    assert rep["oracle"]["matches"] and rep["T_nonnegative"]
