"""CSM polynomials G_X(T), sectional Euler characteristics and the Feynman rule C_G(T).

G_X(T) = sum_k a_k T^k where c_SM(X) = sum_k a_k [P^k], and
chi_X(T) = sum_k chi_k T^k with chi_k the Euler characteristic of X cut by k
general hyperplanes.  The two are related by
    chi_X(T) = (T G_X(T - 1) - G_X(0)) / (T - 1),
    G_X(T)   = (T chi_X(T + 1) + chi_X(0)) / (T + 1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .graphs import Multigraph, betti1
from .hypersurfaces import Undetermined, class_via_delcon, graph_classes, kirchhoff_polynomial
from .motive import IntPoly, NotDivisibleError, T, positivity_witness
from .pointcount import (
    BudgetExceeded,
    CountingProfile,
    MultiPoly,
    NotPolynomial,
    NotPolynomialError,
    count_affine_system,
    default_budget,
    first_primes,
    interpolate_counting_polynomial,
    primes_from,
)
from .polar import polar_degrees

COUNTING = "derived-from-counting"
POLAR = "derived-from-polar-degrees"
GIVEN = "given"

SLICE_SEEDS = (0, 1, 2, 3, 4)
SLICE_MIN_PRIME = 11
COEFF_RANGE = (0, 1000)


class DrawsDisagree(ArithmeticError):
    def __init__(self, k: int, values):
        super().__init__(f"slice k={k}: independent draws disagree: {values}")
        self.k = k
        self.values = values


def csm_poly(coeffs: Sequence[int]) -> IntPoly:
    return IntPoly(tuple(coeffs), "T")


@dataclass(frozen=True)
class ChiProfile:
    chis: tuple[int, ...]
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        chis = tuple(int(c) for c in self.chis)
        object.__setattr__(self, "chis", chis)
        prov = tuple(self.provenance) or (GIVEN,) * len(chis)
        if len(prov) != len(chis):
            raise ValueError("one provenance entry per chi value")
        object.__setattr__(self, "provenance", prov)

    def as_poly(self) -> IntPoly:
        return csm_poly(self.chis)

    def to_json(self) -> dict:
        return {"chis": list(self.chis), "provenance": list(self.provenance)}


def chi_from_g(g: IntPoly, length: int | None = None) -> ChiProfile:
    g = IntPoly(g.coeffs, "T")
    num = T * g.shift(-1) - g.coeff(0)
    try:
        chi = num.exact_div_linear(1)
    except NotDivisibleError as exc:
        raise NotDivisibleError(f"chi_X(T) is not a polynomial: {exc}") from None
    chis = list(chi.coeffs)
    if length is not None:
        chis += [0] * (length - len(chis))
    return ChiProfile(tuple(chis))


def g_from_chi(c: ChiProfile | Sequence[int]) -> IntPoly:
    chi = c.as_poly() if isinstance(c, ChiProfile) else csm_poly(c)
    num = T * chi.shift(1) + chi.coeff(0)
    try:
        return num.exact_div_linear(-1)
    except NotDivisibleError as exc:
        raise NotDivisibleError(f"G_X(T) is not a polynomial: {exc}") from None


def embedded_f1_check(g: IntPoly) -> dict:
    """Coefficientwise nonnegativity of (T + 1) G(T)."""
    prod = (T + 1) * IntPoly(g.coeffs, "T")
    wit = positivity_witness(prod.coeffs)
    return {"product": list(prod.coeffs), "passes": wit is None, "witness": list(wit) if wit else None}


# counting route

def _random_affine_subspace(rng: random.Random, n: int, k: int):
    """Images x_i = c_i + sum_j a_ij s_j of a general codimension-k affine subspace of A^n."""
    lo, hi = COEFF_RANGE
    return [[rng.randint(lo, hi) for _ in range(n - k + 1)] for _ in range(n)]


def _full_rank_mod(images, p: int) -> bool:
    from .arrangements import _rank_mod

    cols = len(images[0]) - 1
    if cols == 0:
        return True
    return _rank_mod([row[1:] for row in images], p) == cols


def _slice_polynomial(polys, n, k, rng, budget, min_prime) -> IntPoly | NotPolynomial:
    images = _random_affine_subspace(rng, n, k)
    m = n - k
    sliced = [p.compose_linear(images) for p in polys] if m else None
    deg = m
    need = deg + 3
    counts: dict[int, int] = {}
    start = min_prime
    while len(counts) < need:
        (q,) = primes_from(start, 1)
        start = q + 1
        if not _full_rank_mod(images, q):
            continue
        if m == 0:
            point = [row[0] for row in images]
            counts[q] = int(all(p.evaluate(point, q) == 0 for p in polys))
        else:
            counts[q] = count_affine_system(sliced, q, m, budget)
        if len(counts) == deg + 2:
            # early exit as soon as the first check prime disagrees
            res = interpolate_counting_polynomial(CountingProfile(counts, "affine", m), deg)
            if isinstance(res, NotPolynomial):
                return res
    return interpolate_counting_polynomial(CountingProfile(counts, "affine", m), deg)


def slice_counting_polynomials(polys: Sequence[MultiPoly], ambient_dim: int, seeds=SLICE_SEEDS,
                               dim: int | None = None, budget=None, min_prime: int = SLICE_MIN_PRIME) -> dict:
    """Counting polynomials of X cut by k general affine hyperplanes, k = 0..N, for every seed.

    Returns per-k lists of per-seed results.  k = 0 is counted once (no draw).
    Slices beyond ``dim`` are empty and recorded as the zero polynomial.
    """
    n = ambient_dim
    budget = default_budget() if budget is None else budget
    if dim is None:
        dim = _guess_dim(polys, n)
    out: dict[int, list] = {}
    for k in range(n + 1):
        if k > dim:
            out[k] = [IntPoly()] * len(seeds)
            continue
        if k == 0:
            qs = first_primes(n + 3)
            counts = {q: count_affine_system(list(polys), q, n, budget) for q in qs}
            res = interpolate_counting_polynomial(CountingProfile(counts, "affine", n), n)
            out[0] = [res] * len(seeds)
            if isinstance(res, NotPolynomial):
                raise NotPolynomialError(res)
            continue
        per_seed = []
        for sd in seeds:
            rng = random.Random(7919 * sd + 104729 * k + n)
            res = _slice_polynomial(list(polys), n, k, rng, budget, min_prime)
            if isinstance(res, NotPolynomial):
                raise NotPolynomialError(NotPolynomial(res.mismatch_q, f"slice k={k}, seed {sd}: {res.reason}"))
            per_seed.append(res)
        out[k] = per_seed
    return out


def _guess_dim(polys, n) -> int:
    nz = [p for p in polys if not p.is_zero()]
    if not nz:
        return n
    if any(p.constant_value() is not None for p in nz):
        return -1  # empty
    if len(nz) == 1:
        return n - 1
    return n


def chi_profile_by_counting(polys: Sequence[MultiPoly], ambient_dim: int, seeds=SLICE_SEEDS,
                            dim: int | None = None, budget=None) -> tuple[ChiProfile, dict]:
    slices = slice_counting_polynomials(polys, ambient_dim, seeds, dim, budget)
    chis, record = [], {}
    for k in range(ambient_dim + 1):
        vals = [p(1) for p in slices[k]]
        record[str(k)] = vals
        if len(set(vals)) != 1:
            raise DrawsDisagree(k, vals)
        chis.append(vals[0])
    return ChiProfile(tuple(chis), (COUNTING,) * len(chis)), {"per_seed_chi": record}


# polar route

def complement_csm_projective(f: MultiPoly) -> IntPoly:
    """G of P^m minus V(f), from the projective degrees of grad f."""
    m = f.nvars - 1
    gs = polar_degrees(f)
    total = IntPoly((), "T")
    for i, gi in enumerate(gs):
        total = total + ((-1) ** i * gi) * (T + 1) ** (m - i)
    return total


def chi_profile_by_polar_degrees(f: MultiPoly) -> ChiProfile:
    """Sectional Euler characteristics of the affine cone V(f) in A^n, n = number of variables."""
    n = f.nvars
    if f.constant_value() is not None:
        if f.is_zero():
            return ChiProfile((1,) * (n + 1), (POLAR,) * (n + 1))
        return ChiProfile((0,) * (n + 1), (POLAR,) * (n + 1))
    m = n - 1
    y = chi_from_g(complement_csm_projective(f), m + 1).chis
    s = [(m - j + 1) - y[j] for j in range(m + 1)] + [0]  # chi(X cut by j hyperplanes)
    chis = [1] + [s[k - 1] - s[k] for k in range(1, n + 1)]
    return ChiProfile(tuple(chis), (POLAR,) * (n + 1))


# the Feynman rule

def c_gamma_from_profile(n: int, prof: ChiProfile) -> IntPoly:
    return (T + 1) ** n - g_from_chi(prof)


def c_gamma(g: Multigraph, method: str = "polar", seeds=SLICE_SEEDS, budget=None) -> IntPoly:
    """C_G(T) = G_{A^n}(T) - G_{X^_G}(T)."""
    psi = kirchhoff_polynomial(g)
    n = g.n_edges
    if method == "polar":
        prof = chi_profile_by_polar_degrees(psi)
    elif method == "counting":
        prof, _ = chi_profile_by_counting([psi], n, seeds, budget=budget)
    else:
        raise ValueError(f"unknown method {method!r}")
    return c_gamma_from_profile(n, prof)


def feynman_rule_checks(g: Multigraph, method: str = "polar", budget=None) -> dict:
    n = g.n_edges
    psi = kirchhoff_polynomial(g)
    if method == "polar":
        prof = chi_profile_by_polar_degrees(psi)
    else:
        prof, _ = chi_profile_by_counting([psi], n, budget=budget)
    c = c_gamma_from_profile(n, prof)
    rep = graph_classes(g, "delcon", budget=budget)
    out = {
        "graph": g.to_json(),
        "n": n,
        "profile": prof.to_json(),
        "C": c.to_json(),
        "C_text": str(c),
        "monic_degree_n": c.degree == n and c.coeff(n) == 1,
        "C_prime_0": c.coeff(1),
        "sum_chi_k": sum(prof.chis[1:]),
        "embedded_f1": embedded_f1_check(c),
    }
    if rep.determined:
        out["chi_X_class"] = rep.chi_X
        out["chi_Y_class"] = rep.chi_Y
        out["C_prime_0_holds"] = c.coeff(1) == n - rep.chi_X
        out["chi01_holds"] = sum(prof.chis[1:]) == rep.chi_X
    else:
        out["class_undetermined"] = str(rep.affine_class)
    return out


# q-deformation

@dataclass
class QDeformedClass:
    """G_X(q, T) stored as T-coefficients, each an integer polynomial in q."""

    coeffs: list[IntPoly]
    slices: list[IntPoly] = field(default_factory=list)

    def at(self, q: int) -> IntPoly:
        return csm_poly([c(q) for c in self.coeffs])

    def limit(self) -> IntPoly:
        return self.at(1)

    def to_json(self) -> dict:
        return {
            "T_coefficients_in_q": [str(c) for c in self.coeffs],
            "slice_counting_polynomials": [str(s) for s in self.slices],
            "limit_q_1": list(self.limit().coeffs),
        }


def q_deformed_from_slices(slices: Sequence[IntPoly]) -> QDeformedClass:
    """(T N(q, T + 1) + N(q)) / (T + 1) with N(q, T) = sum_k N_k(q) T^k, divided exactly over Z[q]."""
    from math import comb

    N = len(slices)
    shifted = [IntPoly() for _ in range(N)]  # coefficients of N(q, T + 1)
    for k, nk in enumerate(slices):
        for j in range(k + 1):
            shifted[j] = shifted[j] + comb(k, j) * nk
    num = [slices[0] if N else IntPoly()] + shifted  # T * shifted, plus N_0
    # synthetic division by T + 1 from the top
    quot = [IntPoly() for _ in range(len(num) - 1)]
    acc = IntPoly()
    for j in range(len(num) - 1, 0, -1):
        acc = num[j] - acc
        quot[j - 1] = acc
    rem = num[0] - acc
    if not rem.is_zero():
        raise NotDivisibleError(f"numerator not divisible by T + 1 over Z[q]: remainder {rem}")
    return QDeformedClass(quot, list(slices))


def q_deformed_class(polys: Sequence[MultiPoly], ambient_dim: int, q_list=(), seeds=SLICE_SEEDS,
                     dim=None, budget=None) -> tuple[QDeformedClass, dict]:
    slices = slice_counting_polynomials(polys, ambient_dim, seeds, dim, budget)
    agreed = []
    for k in range(ambient_dim + 1):
        vals = slices[k]
        if len(set(vals)) != 1:
            raise DrawsDisagree(k, [str(v) for v in vals])
        agreed.append(vals[0])
    qd = q_deformed_from_slices(agreed)
    chi_prof = ChiProfile(tuple(p(1) for p in agreed), (COUNTING,) * len(agreed))
    table = {str(q): list(qd.at(q).coeffs) for q in q_list}
    return qd, {"table": table, "limit_matches_g_from_chi": qd.limit() == g_from_chi(chi_prof),
                "g_from_chi": list(g_from_chi(chi_prof).coeffs)}
