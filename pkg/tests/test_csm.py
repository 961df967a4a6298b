import pytest
from hypothesis import given, settings, strategies as st

from fgraph.csm import (
    ChiProfile, DrawsDisagree, c_gamma, chi_from_g, chi_profile_by_counting, chi_profile_by_polar_degrees,
    csm_poly, embedded_f1_check, feynman_rule_checks, g_from_chi, q_deformed_class, q_deformed_from_slices,
)
from fgraph.graphs import Multigraph, banana, cycle, disjoint_union, path
from fgraph.hypersurfaces import kirchhoff_polynomial
from fgraph.motive import IntPoly, T
from fgraph.pointcount import MultiPoly, NotPolynomialError

loop = Multigraph(1, ((0, 0),))


def test_affine_space():
    for n in range(6):
        assert chi_from_g((T + 1) ** n).chis == (1,) * (n + 1)
        assert g_from_chi([1] * (n + 1)) == (T + 1) ** n


@given(st.lists(st.integers(-30, 30), max_size=11))
@settings(max_examples=200)
def test_round_trip(cs):
    assert chi_from_g(g_from_chi(cs)).chis == ChiProfile(tuple(cs)).as_poly().coeffs


def test_counting_profiles():
    prof, _ = chi_profile_by_counting([], 3)
    assert prof.chis == (1, 1, 1, 1)
    pt = [MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)]
    assert chi_profile_by_counting(pt, 2)[0].chis == (1, 0, 0)


def test_banana3_slices_not_countable():
    # an affine plane section of the cone over a conic is an affine conic; its count depends on q mod 4
    with pytest.raises((NotPolynomialError, DrawsDisagree)):
        chi_profile_by_counting([kirchhoff_polynomial(banana(3))], 3)
    prof = chi_profile_by_polar_degrees(kirchhoff_polynomial(banana(3)))
    assert prof.chis[0] == 1


def test_c_gamma_examples():
    assert c_gamma(loop) == T
    assert c_gamma(path(1)) == T + 1
    assert c_gamma(disjoint_union(loop, path(1))) == T * (T + 1)
    assert c_gamma(cycle(3)) == T**3 + 2 * T**2 + T
    assert c_gamma(banana(4)).coeff(1) == -1


@pytest.mark.parametrize("g", [loop, cycle(2), cycle(3), path(2)])
def test_polar_matches_counting(g):
    assert c_gamma(g, "polar") == c_gamma(g, "counting")


def test_feynman_checks():
    out = feynman_rule_checks(cycle(3))
    assert out["chi_X_class"] == 2 and out["C_prime_0"] == 1 and out["C_prime_0_holds"] and out["chi01_holds"]
    out = feynman_rule_checks(path(3))
    assert out["C_prime_0"] == 3 and out["C_prime_0_holds"]


def test_embedded_check():
    assert embedded_f1_check((T + 1) ** 4)["passes"]
    bad = embedded_f1_check(csm_poly([1, -2]))
    assert not bad["passes"] and bad["witness"] == [1, -1]


def test_q_deformed_affine_space():
    n = 3
    L = IntPoly.var("L")
    qd = q_deformed_from_slices([L ** (n - k) for k in range(n + 1)])
    assert qd.limit() == (T + 1) ** n
    for q in (2, 5):
        n_shift = sum((q ** (n - k) * (T + 1) ** k for k in range(n + 1)), IntPoly((), "T"))
        assert qd.at(q) * (T + 1) == T * n_shift + q**n
    # without the shift T -> T + 1 the numerator is not divisible by T + 1 even at q = 1
    unshifted = T * sum((T**k for k in range(n + 1)), IntPoly((), "T")) + 1
    assert unshifted(-1) != 0
    pt = q_deformed_from_slices([IntPoly.const(1)])
    assert pt.at(7) == csm_poly([1])


def test_q_deformed_cone_over_loop():
    qd, info = q_deformed_class([kirchhoff_polynomial(cycle(2))], 2, q_list=(2, 3))
    assert info["limit_matches_g_from_chi"]
    assert qd.limit() == g_from_chi(chi_profile_by_polar_degrees(kirchhoff_polynomial(cycle(2))))
