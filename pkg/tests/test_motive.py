from math import comb

from hypothesis import given, strategies as st

from fgraph.hypersurfaces import class_banana
from fgraph.motive import (
    IntPoly, L, NotDivisibleError, T, euler_characteristic, f1_point_count, is_T_nonnegative,
    positivity_witness, vanishing_order_at_one,
)
import pytest

coeff_lists = st.lists(st.integers(-50, 50), max_size=8)


def test_L_squared_in_T():
    assert (L**2).to_basis("T").coeffs == (1, 2, 1)


@pytest.mark.parametrize("n", range(1, 9))
def test_projective_space_T_expansion(n):
    p = IntPoly.projective_space(n - 1).to_basis("T")
    assert p.coeffs == tuple(comb(n, k) for k in range(1, n + 1))


def test_T_to_L():
    assert IntPoly((2, 1), "T").to_basis("L") == L + 1
    assert IntPoly((2, 1), "T").to_basis("L").coeffs == (1, 1)


def test_euler_examples():
    assert euler_characteristic(IntPoly.projective_space(6)) == 7
    assert euler_characteristic(L * (L - 1) * (L**3 + 5)) == 0
    assert euler_characteristic(class_banana(3)) == 2


def test_vanishing_and_f1():
    p = IntPoly.projective_space(4)
    assert vanishing_order_at_one(p) == 0 and f1_point_count(p) == 5
    q = T * (T + 1)
    assert vanishing_order_at_one(q) == 1 and f1_point_count(q) == 1


def test_positivity():
    assert is_T_nonnegative(class_banana(15)) == (True, None)
    assert is_T_nonnegative(IntPoly())[0]
    assert positivity_witness([1, -1, -2]) == (1, -1)


def test_exact_division():
    assert (L**3 - 1).div_L_minus_1() == L**2 + L + 1
    with pytest.raises(NotDivisibleError):
        (L**2 + 1).div_L_minus_1()


@given(coeff_lists, coeff_lists)
def test_ring_laws_across_bases(a, b):
    p, q = IntPoly(tuple(a), "L"), IntPoly(tuple(b), "T")
    assert (p * q).to_basis("T") == p.to_basis("T") * q
    assert (p + q) - q == p
    assert p.to_basis("T").to_basis("L").coeffs == p.coeffs
    assert hash(p) == hash(p.to_basis("T"))


@given(coeff_lists, st.integers(-6, 6))
def test_evaluation_and_basis(a, x):
    p = IntPoly(tuple(a), "L")
    assert p(x) == p.to_basis("T")(x - 1)
    assert euler_characteristic(p) == p(1)


@given(coeff_lists)
def test_json_roundtrip(a):
    p = IntPoly(tuple(a), "T")
    assert IntPoly.from_json(p.to_json()) == p
