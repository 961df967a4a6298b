"""Projective degrees of the gradient map of a homogeneous polynomial, over a large prime field.

For f homogeneous on P^m, the CSM class of the complement of V(f) is
sum_i (-1)^i g_i H^i (1 + H)^(m - i), where g_i is the degree of the
closure of the graph of grad f against H^(m-i) x H^i.  Each g_i is computed as
the number of points (with multiplicity) of a zero-dimensional system: a
random P^i inside P^m, i random linear conditions on grad f, and a
Rabinowitsch variable removing the base locus grad f = 0.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product

from sympy import Poly, groebner, symbols

from .pointcount import MultiPoly

POLAR_PRIME = 1000003


class PolarDegreeError(ArithmeticError):
    pass


def _to_sympy(f: MultiPoly, xs):
    expr = 0
    for e, c in f.terms:
        t = c
        for x, k in zip(xs, e):
            if k:
                t = t * x**k
        expr = expr + t
    return expr


def _standard_monomial_count(gb, gens) -> int:
    """Dimension of k[gens]/I from the leading monomials of a Groebner basis (grevlex)."""
    lead = [Poly(g, *gens).monoms(order="grevlex")[0] for g in gb.exprs]
    if any(not any(m) for m in lead):
        return 0  # the ideal is the unit ideal
    bounds = []
    for j in range(len(gens)):
        pure = [m[j] for m in lead if m[j] and all(m[k] == 0 for k in range(len(gens)) if k != j)]
        if not pure:
            raise PolarDegreeError("ideal is not zero-dimensional (non-generic draw?)")
        bounds.append(min(pure))
    count = 0
    for exp in product(*(range(b) for b in bounds)):
        if not any(all(e >= m for e, m in zip(exp, lm)) for lm in lead):
            count += 1
    return count


def _polar_degree(f: MultiPoly, i: int, rng: random.Random, p: int) -> int:
    n = f.nvars
    s = symbols(f"s1:{i + 1}") if i else ()
    z = symbols("z")
    gens = tuple(s) + (z,)
    # x = A (1, s_1, ..., s_i): a random P^i in an affine chart
    A = [[rng.randrange(1, p) for _ in range(i + 1)] for _ in range(n)]
    xs = [A[r][0] + sum(A[r][j + 1] * s[j] for j in range(i)) for r in range(n)]
    grads = [_to_sympy(f.derivative(r), xs) for r in range(n)]
    eqs = []
    for _ in range(i):
        eqs.append(sum(rng.randrange(1, p) * gr for gr in grads))
    h = sum(rng.randrange(1, p) * gr for gr in grads)
    eqs.append(1 - z * h)
    gb = groebner(eqs, *gens, modulus=p, order="grevlex")
    return _standard_monomial_count(gb, gens)


@lru_cache(maxsize=4096)
def polar_degrees(f: MultiPoly, seeds: tuple[int, ...] = (1, 2), p: int = POLAR_PRIME) -> tuple[int, ...]:
    """(g_0, ..., g_m) for f homogeneous in m + 1 variables; independent draws must agree."""
    if not f.is_homogeneous():
        raise ValueError("polar degrees need a homogeneous polynomial")
    m = f.nvars - 1
    if f.constant_value() is not None:
        raise ValueError("polar degrees need a nonconstant polynomial")
    out = []
    for i in range(m + 1):
        vals = [_polar_degree(f, i, random.Random(1_000_003 * sd + i), p) for sd in seeds]
        if len(set(vals)) != 1:
            raise PolarDegreeError(f"projective degree g_{i}: draws disagree {vals}")
        out.append(vals[0])
    return tuple(out)
