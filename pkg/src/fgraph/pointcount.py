"""Exhaustive point counts over prime fields and interpolation of counting polynomials."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from sympy import isprime, prime as nth_prime

from .motive import IntPoly

DEFAULT_BUDGET = 10**8
# below this many points the remaining variables are enumerated as one numpy grid
_GRID_POINTS = 1 << 18


def default_budget() -> int:
    env = os.environ.get("FGRAPH_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class BudgetExceeded(RuntimeError):
    pass


class NotPolynomialError(ArithmeticError):
    def __init__(self, result: "NotPolynomial"):
        super().__init__(str(result))
        self.result = result


@dataclass(frozen=True)
class MultiPoly:
    """Sparse integer polynomial: a mapping exponent-tuple -> nonzero coefficient."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], int], ...] = ()

    def __post_init__(self):
        acc: dict[tuple[int, ...], int] = {}
        for exp, c in self.terms:
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.nvars:
                raise ValueError(f"exponent {exp} has length != {self.nvars}")
            acc[exp] = acc.get(exp, 0) + int(c)
        object.__setattr__(self, "terms", tuple(sorted((e, c) for e, c in acc.items() if c)))

    @classmethod
    def from_dict(cls, nvars: int, d: Mapping[tuple[int, ...], int]) -> "MultiPoly":
        return cls(nvars, tuple(d.items()))

    @classmethod
    def constant(cls, nvars: int, c: int) -> "MultiPoly":
        return cls(nvars, (((0,) * nvars, c),))

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        return cls(nvars, ((tuple(int(j == i) for j in range(nvars)), 1),))

    @classmethod
    def linear(cls, coeffs: Sequence[int], const: int = 0) -> "MultiPoly":
        n = len(coeffs)
        terms = [(tuple(int(j == i) for j in range(n)), c) for i, c in enumerate(coeffs)]
        terms.append(((0,) * n, const))
        return cls(n, tuple(terms))

    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e, _ in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e, _ in self.terms}) <= 1

    def constant_value(self) -> int | None:
        """The value if the polynomial is constant, else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1 and not any(self.terms[0][0]):
            return self.terms[0][1]
        return None

    def used_variables(self) -> list[int]:
        return sorted({i for e, _ in self.terms for i, k in enumerate(e) if k})

    def permute(self, perm: Sequence[int]) -> "MultiPoly":
        """Rename variable i to perm[i]."""
        out = []
        for e, c in self.terms:
            ne = [0] * self.nvars
            for i, k in enumerate(e):
                ne[perm[i]] = k
            out.append((tuple(ne), c))
        return MultiPoly(self.nvars, tuple(out))

    def __add__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            other = MultiPoly.constant(self.nvars, other)
        return MultiPoly(self.nvars, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return MultiPoly(self.nvars, tuple((e, c * other) for e, c in self.terms))
        acc: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return MultiPoly.from_dict(self.nvars, acc)

    __rmul__ = __mul__

    def evaluate(self, point: Sequence[int], mod: int | None = None) -> int:
        total = 0
        for e, c in self.terms:
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= pow(x, k, mod) if mod else x**k
            total += t
        return total % mod if mod else total

    def derivative(self, i: int) -> "MultiPoly":
        out = []
        for e, c in self.terms:
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out.append((tuple(ne), c * e[i]))
        return MultiPoly(self.nvars, tuple(out))

    def compose_linear(self, images: Sequence[Sequence[int]]) -> "MultiPoly":
        """Substitute x_i -> images[i][0] + sum_j images[i][j+1] * s_j (affine in new vars)."""
        m = len(images[0]) - 1
        lin = [MultiPoly(m, tuple(((0,) * m if j == 0 else tuple(int(k == j - 1) for k in range(m)), a)
                                  for j, a in enumerate(img))) for img in images]
        result = MultiPoly(m, ())
        one = MultiPoly.constant(m, 1)
        for e, c in self.terms:
            t = one * c
            for i, k in enumerate(e):
                for _ in range(k):
                    t = t * lin[i]
            result = result + t
        return result

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms, key=lambda t: (-sum(t[0]), [-k for k in t[0]])):
            mon = "*".join(f"t{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"nvars": self.nvars, "terms": [[list(e), str(c)] for e, c in self.terms], "text": str(self)}


# counting

def _reduce(p: MultiPoly, q: int) -> dict[tuple[int, ...], int]:
    out: dict[tuple[int, ...], int] = {}
    for e, c in p.terms:
        c %= q
        if c:
            out[e] = (out.get(e, 0) + c) % q
    return {e: c for e, c in out.items() if c}


def _specialize_first(poly: dict, a: int, q: int, pw: list[int]) -> dict:
    """Substitute x_0 = a in a reduced polynomial and drop the first coordinate."""
    out: dict[tuple[int, ...], int] = {}
    for e, c in poly.items():
        v = c * pw[e[0]] % q
        if v:
            k = e[1:]
            out[k] = (out.get(k, 0) + v) % q
    return {e: c for e, c in out.items() if c}


def _grid_count(polys: list[dict], n: int, q: int) -> int:
    """Count common zeros on the full grid (Z/q)^n with numpy."""
    if n == 0:
        return int(all(not p for p in polys))
    base = np.arange(q, dtype=np.int64)
    maxdeg = max((max(e) for p in polys for e in p), default=0)
    powers = [np.ones(q, dtype=np.int64)]
    for _ in range(maxdeg):
        powers.append(powers[-1] * base % q)
    shape = (q,) * n
    mask = np.ones(shape, dtype=bool)
    for p in polys:
        val = np.zeros(shape, dtype=np.int64)
        for e, c in p.items():
            term = np.full((1,) * n, c, dtype=np.int64)
            for i, k in enumerate(e):
                if k:
                    view = [1] * n
                    view[i] = q
                    term = term * powers[k].reshape(view) % q
            val = (val + term) % q
        mask &= val == 0
    return int(mask.sum())


def _count_rec(polys: list[dict], n: int, q: int) -> int:
    polys = [p for p in polys if p]  # zero polynomials impose nothing
    for p in polys:
        if len(p) == 1 and not any(next(iter(p))):
            return 0  # nonzero constant
    if not polys:
        return q**n
    if q**n <= _GRID_POINTS:
        return _grid_count(polys, n, q)
    total = 0
    for a in range(q):
        pw = [pow(a, k, q) for k in range(max(e[0] for p in polys for e in p) + 1)]
        total += _count_rec([_specialize_first(p, a, q, pw) for p in polys], n - 1, q)
    return total


def count_affine_system(polys: Sequence[MultiPoly], q: int, nvars: int | None = None,
                        budget: int | None = None, outer_values: Iterable[int] | None = None) -> int:
    """Number of common zeros in (Z/q)^n.

    ``outer_values`` restricts the first variable to the given residues, so a
    sweep can be split into pieces whose counts add up to the full count.
    """
    if not isprime(q):
        raise ValueError(f"{q} is not prime")
    if nvars is None:
        if not polys:
            raise ValueError("nvars is required for an empty system")
        nvars = polys[0].nvars
    if any(p.nvars != nvars for p in polys):
        raise ValueError("all polynomials must have the same number of variables")
    budget = default_budget() if budget is None else budget
    if q**nvars > budget:
        raise BudgetExceeded(f"{q}^{nvars} = {q**nvars} evaluations exceeds the budget {budget}")
    reduced = [_reduce(p, q) for p in polys]
    if outer_values is None:
        return _count_rec(reduced, nvars, q)
    if nvars == 0:
        raise ValueError("cannot partition a 0-variable sweep")
    total = 0
    maxdeg = max((e[0] for p in reduced for e in p), default=0)
    for a in outer_values:
        pw = [pow(a, k, q) for k in range(maxdeg + 1)]
        total += _count_rec([_specialize_first(p, a % q, q, pw) for p in reduced], nvars - 1, q)
    return total


def count_projective(polys: Sequence[MultiPoly], q: int, nvars: int | None = None,
                     budget: int | None = None) -> int:
    """Points of the projective zero locus, as (affine cone count - 1)/(q - 1)."""
    for p in polys:
        if not p.is_homogeneous():
            raise ValueError(f"polynomial {p} is not homogeneous")
    if any(p.constant_value() not in (None, 0) for p in polys):
        return 0  # a nonzero constant cuts out the empty set
    aff = count_affine_system(polys, q, nvars, budget)
    num = aff - 1
    if num % (q - 1):
        raise ArithmeticError(f"affine cone count {aff} - 1 not divisible by {q - 1}")
    return num // (q - 1)


def primes_from(start: int, count: int) -> list[int]:
    out = []
    p = max(2, start)
    while len(out) < count:
        if isprime(p):
            out.append(p)
        p += 1
    return out


def first_primes(count: int) -> list[int]:
    return [int(nth_prime(k)) for k in range(1, count + 1)]


def default_primes(degree_bound: int) -> list[int]:
    """d + 1 primes to fit plus two to verify."""
    return first_primes(degree_bound + 3)


# profiles and interpolation

@dataclass(frozen=True)
class CountingProfile:
    counts: Mapping[int, int]
    ambient: str = "affine"
    n: int = 0

    def __post_init__(self):
        if self.ambient not in ("affine", "projective"):
            raise ValueError("ambient must be 'affine' or 'projective'")
        counts = {int(q): int(c) for q, c in sorted(self.counts.items())}
        for q, c in counts.items():
            if not isprime(q):
                raise ValueError(f"{q} is not prime")
            top = q**self.n if self.ambient == "affine" else (q ** (self.n + 1) - 1) // (q - 1)
            if not 0 <= c <= top:
                raise ValueError(f"count {c} at q={q} outside [0, {top}]")
        object.__setattr__(self, "counts", counts)

    @property
    def primes(self) -> list[int]:
        return list(self.counts)

    def to_json(self) -> dict:
        return {"ambient": self.ambient, "n": self.n, "counts": {str(q): c for q, c in self.counts.items()}}

    @classmethod
    def from_json(cls, d: dict) -> "CountingProfile":
        return cls({int(q): int(c) for q, c in d["counts"].items()}, d["ambient"], int(d["n"]))


@dataclass(frozen=True)
class NotPolynomial:
    """Interpolation failure: first prime where the fitted polynomial misses, or a non-integral fit."""

    mismatch_q: int | None
    reason: str
    fitted: tuple[Fraction, ...] = field(default=(), compare=False)

    def __str__(self):
        if self.mismatch_q is None:
            return f"not polynomial: {self.reason}"
        return f"not polynomial: mismatch at q={self.mismatch_q} ({self.reason})"

    def to_json(self) -> dict:
        return {"not_polynomial": True, "mismatch_q": self.mismatch_q, "reason": self.reason}


def lagrange_coefficients(points: Sequence[tuple[int, int]]) -> list[Fraction]:
    """Coefficients (low degree first) of the interpolating polynomial through the points."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = 1
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(n):
            coeffs[k] += Fraction(yi, denom) * basis[k]
    return coeffs


def interpolate_counting_polynomial(profile: CountingProfile, degree_bound: int) -> IntPoly | NotPolynomial:
    qs = profile.primes
    if len(qs) < degree_bound + 1:
        raise ValueError(f"need at least {degree_bound + 1} primes, profile has {len(qs)}")
    pts = [(q, profile.counts[q]) for q in qs[: degree_bound + 1]]
    fit = lagrange_coefficients(pts)
    if any(c.denominator != 1 for c in fit):
        return NotPolynomial(None, "non-integral interpolation coefficients", tuple(fit))
    poly = IntPoly(tuple(int(c) for c in fit), "L")
    for q in qs[degree_bound + 1:]:
        if poly(q) != profile.counts[q]:
            return NotPolynomial(q, f"predicted {poly(q)}, counted {profile.counts[q]}", tuple(fit))
    return poly


def chi_from_profile(profile: CountingProfile, degree_bound: int) -> int:
    res = interpolate_counting_polynomial(profile, degree_bound)
    if isinstance(res, NotPolynomial):
        raise NotPolynomialError(res)
    return res(1)


def counting_profile(polys: Sequence[MultiPoly], primes: Sequence[int], nvars: int | None = None,
                     projective: bool = False, budget: int | None = None) -> CountingProfile:
    if nvars is None:
        nvars = polys[0].nvars
    if projective:
        counts = {q: count_projective(polys, q, nvars, budget) for q in primes}
        return CountingProfile(counts, "projective", nvars - 1)
    counts = {q: count_affine_system(polys, q, nvars, budget) for q in primes}
    return CountingProfile(counts, "affine", nvars)


def counting_class(polys: Sequence[MultiPoly], nvars: int, degree_bound: int | None = None,
                   primes: Sequence[int] | None = None, projective: bool = False,
                   budget: int | None = None) -> tuple[IntPoly | NotPolynomial, CountingProfile]:
    """Count at enough primes and interpolate; the default bound is the ambient dimension."""
    if degree_bound is None:
        degree_bound = nvars - 1 if projective else nvars
    if primes is None:
        primes = default_primes(degree_bound)
    prof = counting_profile(polys, primes, nvars, projective, budget)
    return interpolate_counting_polynomial(prof, degree_bound), prof
