"""The variety Lambda_G = {(a, beta) : Q_a(beta) = 0} in P^{n-1} x P^{b1-1}.

Over a point beta the condition is linear in a, with rank equal to the rank of
the rows eta_e with eta_e . beta != 0.  That rank is constant on the open
strata of the graph arrangement, so Lambda_G is a union of projective bundles
over those strata.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .arrangements import graph_arrangement, intersection_poset
from .graphs import Multigraph, betti1, circuit_matrix, rank_exact
from .motive import IntPoly, L, euler_characteristic, is_T_nonnegative
from .pointcount import (
    BudgetExceeded,
    CountingProfile,
    NotPolynomial,
    default_budget,
    interpolate_counting_polynomial,
)


@dataclass
class Stratum:
    closure: frozenset  # hyperplanes containing the stratum
    dim: int  # dimension of the linear flat in A^{b1}
    epsilon: int
    projective_class: IntPoly

    def to_json(self) -> dict:
        return {"hyperplanes": sorted(self.closure), "flat_dim": self.dim, "epsilon": self.epsilon,
                "class": str(self.projective_class)}


def epsilon_stratification(g: Multigraph) -> list[Stratum]:
    """Open strata of the graph arrangement in P^{b1-1} with their epsilon values."""
    b1 = betti1(g)
    if b1 == 0:
        raise ValueError("epsilon stratification needs b1 >= 1 (got a forest)")
    arr = graph_arrangement(g)
    poset = intersection_poset(arr)
    out = []
    for f in poset.flats:
        if f.dim == 0:
            continue  # the origin is not a projective point
        affine = IntPoly()
        for h in poset.flats:
            if f.closure <= h.closure:
                affine = affine + poset.mobius_interval(f, h) * L**h.dim
        outside = [arr.normals[i] for i in range(arr.size) if i not in f.closure]
        eps = b1 - (rank_exact(outside) if outside else 0)
        out.append(Stratum(f.closure, f.dim, eps, affine.div_L_minus_1()))
    return out


def strata_classes(g: Multigraph) -> dict[int, IntPoly]:
    acc: dict[int, IntPoly] = {}
    for s in epsilon_stratification(g):
        acc[s.epsilon] = acc.get(s.epsilon, IntPoly()) + s.projective_class
    return dict(sorted(acc.items()))


def lambda_class(g: Multigraph) -> IntPoly:
    n, b1 = g.n_edges, betti1(g)
    total = IntPoly()
    for m, s in strata_classes(g).items():
        total = total + s * IntPoly.projective_space(n - b1 + m - 1)
    return total


def _projective_points(dim: int, q: int) -> np.ndarray:
    """Normalized representatives of P^dim(F_q): first nonzero coordinate equal to 1."""
    pts = []
    for lead in range(dim + 1):
        tail = dim - lead
        for rest in itertools.product(range(q), repeat=tail):
            pts.append((0,) * lead + (1,) + rest)
    return np.array(pts, dtype=np.int64).reshape(len(pts), dim + 1)


def lambda_oracle_count(g: Multigraph, q: int, budget: int | None = None) -> int:
    """Exhaustive count of pairs (a, beta) with every coordinate of Q_a(beta) zero."""
    n, b1 = g.n_edges, betti1(g)
    if b1 == 0:
        raise ValueError("Lambda needs b1 >= 1 (got a forest)")
    budget = default_budget() if budget is None else budget
    na = (q**n - 1) // (q - 1)
    nb = (q**b1 - 1) // (q - 1)
    if na * nb > budget:
        raise BudgetExceeded(f"{na} x {nb} pairs exceeds the budget {budget}")
    eta = np.array(circuit_matrix(g).rows, dtype=np.int64).reshape(n, b1)
    a_pts = _projective_points(n - 1, q)
    total = 0
    for beta in _projective_points(b1 - 1, q):
        c = eta @ beta  # c_e = eta_e . beta
        # (Q_a(beta))_j = sum_e a_e c_e eta_{e,j}
        m = (eta * c[:, None]) % q  # n x b1
        vals = (a_pts @ m) % q
        total += int(np.all(vals == 0, axis=1).sum())
    return total


@dataclass
class LambdaReport:
    graph: Multigraph
    strata: list[Stratum]
    strata_classes: dict[int, IntPoly]
    lambda_class: IntPoly
    oracle_counts: CountingProfile | None = None
    extra: dict = field(default_factory=dict)

    @property
    def chi(self) -> int:
        return euler_characteristic(self.lambda_class)

    @property
    def strata_chi_sum(self) -> int:
        return sum(euler_characteristic(c) for c in self.strata_classes.values())

    def f1_verdict(self) -> dict:
        per = {}
        for m, c in self.strata_classes.items():
            ok, wit = is_T_nonnegative(c)
            per[str(m)] = {"class_T": str(c.to_basis("T")), "T_nonnegative": ok, "witness": list(wit) if wit else None}
        ok, wit = is_T_nonnegative(self.lambda_class)
        return {"lambda_T_nonnegative": ok, "witness": list(wit) if wit else None, "chi_ok": self.chi >= 0,
                "strata": per, "passes": ok and self.chi >= 0}

    def to_json(self) -> dict:
        out = {
            "graph": self.graph.to_json(),
            "b1": betti1(self.graph),
            "strata": [s.to_json() for s in self.strata],
            "strata_classes": {str(m): c.to_basis("T").to_json() for m, c in self.strata_classes.items()},
            "lambda_class": {"L": self.lambda_class.to_json(), "T": self.lambda_class.to_basis("T").to_json(),
                             "text_T": str(self.lambda_class.to_basis("T"))},
            "chi": self.chi,
            "strata_chi_sum": self.strata_chi_sum,
            "f1_verdict": self.f1_verdict(),
        }
        if self.oracle_counts is not None:
            out["oracle_counts"] = self.oracle_counts.to_json()
            out["oracle_matches_class"] = all(self.lambda_class(q) == c for q, c in self.oracle_counts.counts.items())
        out.update(self.extra)
        return out


def lambda_report(g: Multigraph, oracle_primes=(), budget=None) -> LambdaReport:
    strata = epsilon_stratification(g)
    sc = strata_classes(g)
    lam = lambda_class(g)
    rep = LambdaReport(g, strata, sc, lam)
    if oracle_primes:
        n, b1 = g.n_edges, betti1(g)
        counts = {q: lambda_oracle_count(g, q, budget) for q in oracle_primes}
        # the product of projective spaces has at most q^(n + b1) points
        rep.oracle_counts = CountingProfile(counts, "affine", n + b1)
        dim = n + b1 - 3 + 1  # Lambda has dimension at most n + b1 - 3; pad by one
        if len(counts) >= dim + 1:
            fit = interpolate_counting_polynomial(rep.oracle_counts, dim)
            rep.extra["oracle_chi"] = None if isinstance(fit, NotPolynomial) else fit(1)
    return rep
