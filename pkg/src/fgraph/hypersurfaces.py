"""Kirchhoff polynomials and Grothendieck classes of graph hypersurfaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from . import graphs as G
from .graphs import Multigraph, betti1, classify_edge, contract_edge, delete_edge
from .motive import (
    IntPoly,
    L,
    T,
    euler_characteristic,
    is_T_nonnegative,
    vanishing_order_at_one,
)
from .pointcount import (
    BudgetExceeded,
    MultiPoly,
    NotPolynomial,
    chi_from_profile,
    count_projective,
    counting_class,
    counting_profile,
    default_budget,
    first_primes,
)


@dataclass(frozen=True)
class Undetermined:
    reason: str

    def __str__(self):
        return f"undetermined ({self.reason})"

    def to_json(self) -> dict:
        return {"undetermined": True, "reason": self.reason}


def kirchhoff_polynomial(g: Multigraph) -> MultiPoly:
    """Sum over spanning forests F of the product of t_e over edges not in F."""
    n = g.n_edges
    terms = []
    for f in G.spanning_forests(g):
        terms.append((tuple(0 if i in f else 1 for i in range(n)), 1))
    return MultiPoly(n, tuple(terms))


# closed forms

def class_banana(n: int) -> IntPoly:
    """Projective class of the banana hypersurface, in the T basis."""
    if n < 2:
        raise ValueError("banana closed form needs n >= 2")
    one = IntPoly.const(1, "T")
    first = ((T + 1) ** n - one).div_L_minus_1()  # (T+1)^n - 1 over T
    second = (T**n - (-1) ** n).exact_div_linear(-1)  # over T + 1
    return first - second - IntPoly.monomial(n - 2, n, "T")


def class_lemon_complement(m: int) -> IntPoly:
    """Affine complement class of the lemon graph with m triangles, in the T basis."""
    if m < 1:
        raise ValueError("lemon closed form needs m >= 1")
    s = IntPoly((), "T")
    for j in range(m // 2 + 1):
        s = s + IntPoly.monomial(m - j, comb(m - j, j), "T")
    return (T + 1) ** (m + 1) * s


def is_banana(g: Multigraph) -> int | None:
    """n if g is the banana graph on n >= 1 edges, else None."""
    if g.vertex_count == 2 and g.edges and all({t, h} == {0, 1} for t, h in g.edges):
        return g.n_edges
    return None


def is_lemon(g: Multigraph) -> int | None:
    m = (g.n_edges - 1) // 2
    if m >= 1 and g.n_edges == 2 * m + 1 and g.vertex_count == m + 2:
        if G.canonical_form(g) == G.canonical_form(G.lemon(m)):
            return m
    return None


# deletion-contraction

_DELCON_CACHE: dict[tuple, IntPoly | Undetermined] = {}


def _count_config(primes, budget):
    return (tuple(primes) if primes is not None else None, budget)


def _intersection_class(g: Multigraph, e: int, primes, budget) -> IntPoly | Undetermined:
    """[X^_{G\\e} cap X^_{G/e}] in A^{n-1} by counting and interpolation."""
    d, _ = delete_edge(g, e)
    c, _ = contract_edge(g, e)
    pd, pc = kirchhoff_polynomial(d), kirchhoff_polynomial(c)
    nv = g.n_edges - 1
    deg = nv - 1  # dimension n - 2 padded by one
    qs = list(primes) if primes is not None else first_primes(deg + 3)
    if len(qs) < deg + 1:
        deg = len(qs) - 1
    try:
        res, _ = counting_class([pd, pc], nv, deg, qs, budget=budget)
    except BudgetExceeded as exc:
        return Undetermined(f"intersection count over budget: {exc}")
    if isinstance(res, NotPolynomial):
        return Undetermined(f"intersection for edge {e} is {res}")
    return res


def complement_class_delcon(g: Multigraph, primes: Sequence[int] | None = None,
                            budget: int | None = None, use_cache: bool = True) -> IntPoly | Undetermined:
    """[A^n minus X^_G] by deletion-contraction.

    Bridges and loops are removed lowest index first.  A graph with several
    blocks is the product of its blocks.  A single cycle has a linear
    polynomial.  Otherwise the third relation is applied to the lowest-index
    edge with the intersection class obtained from point counts.
    """
    budget = default_budget() if budget is None else budget
    key = (G.canonical_form(g), _count_config(primes, budget)) if use_cache else None
    if key is not None and key in _DELCON_CACHE:
        return _DELCON_CACHE[key]
    res = _delcon(g, primes, budget, use_cache)
    if key is not None:
        _DELCON_CACHE[key] = res
    return res


def _delcon(g: Multigraph, primes, budget, use_cache) -> IntPoly | Undetermined:
    n = g.n_edges
    if betti1(g) == 0:
        return L**n
    for i in range(n):
        kind = classify_edge(g, i)
        if kind in ("bridge", "loop"):
            rest = complement_class_delcon(delete_edge(g, i)[0], primes, budget, use_cache)
            if isinstance(rest, Undetermined):
                return rest
            return (L if kind == "bridge" else L - 1) * rest
    bl = G.blocks(g)
    if len(bl) > 1:
        prod = IntPoly.const(1)
        for b in bl:
            c = complement_class_delcon(G.edge_subgraph(g, b), primes, budget, use_cache)
            if isinstance(c, Undetermined):
                return c
            prod = prod * c
        return prod
    if betti1(g) == 1:
        return L**n - L ** (n - 1)
    e = 0
    inter = _intersection_class(g, e, primes, budget)
    if isinstance(inter, Undetermined):
        return inter
    rest = complement_class_delcon(delete_edge(g, e)[0], primes, budget, use_cache)
    if isinstance(rest, Undetermined):
        return rest
    return L * (L ** (n - 1) - inter) - rest


def class_via_delcon(g: Multigraph, primes=None, budget=None) -> IntPoly | Undetermined:
    """Affine class [X^_G] from deletion-contraction."""
    c = complement_class_delcon(g, primes, budget)
    if isinstance(c, Undetermined):
        return c
    return L**g.n_edges - c


def class_via_counting(g: Multigraph, primes=None, budget=None) -> tuple[IntPoly | Undetermined, object]:
    """Affine class [X^_G] from point counts of the Kirchhoff polynomial."""
    n = g.n_edges
    qs = list(primes) if primes is not None else first_primes(n + 3)
    deg = min(n, len(qs) - 1)
    res, prof = counting_class([kirchhoff_polynomial(g)], n, deg, qs, budget=budget)
    if isinstance(res, NotPolynomial):
        return Undetermined(str(res)), prof
    return res, prof


def class_via_closed_form(g: Multigraph) -> IntPoly | None:
    """Affine class [X^_G] from the banana or lemon closed form, when g is one of those."""
    n = g.n_edges
    b = is_banana(g)
    if b is not None and b >= 2:
        return affine_from_projective(class_banana(b), n)
    m = is_lemon(g)
    if m is not None:
        return (L**n - class_lemon_complement(m)).to_basis("L")
    return None


def projective_from_affine(affine: IntPoly, psi_constant: bool) -> IntPoly:
    """[X] = ([X^] - 1)/(L - 1); for a constant polynomial both are empty."""
    if psi_constant:
        return IntPoly.const(0)
    return (affine - 1).div_L_minus_1().to_basis("L")


def affine_from_projective(proj: IntPoly, n: int) -> IntPoly:
    return ((L - 1) * proj + 1).to_basis("L")


# reports

@dataclass
class F1Verdict:
    entries: dict = field(default_factory=dict)  # variety -> {chi, chi_ok, T_nonneg, witness}

    @property
    def passes(self) -> bool:
        return all(v["chi_ok"] and v["T_nonnegative"] for v in self.entries.values())

    def failures(self) -> list[str]:
        out = []
        for name, v in self.entries.items():
            if not v["chi_ok"]:
                out.append(f"chi({name}) = {v['chi']} < 0")
            if not v["T_nonnegative"]:
                k, a = v["witness"]
                out.append(f"[{name}] has T-coefficient {a} in degree {k}")
        return out

    def to_json(self) -> dict:
        return {"passes": self.passes, "failures": self.failures(), "varieties": self.entries}


def f1_verdict_for(classes: dict[str, IntPoly]) -> F1Verdict:
    v = F1Verdict()
    for name, c in classes.items():
        ok, wit = is_T_nonnegative(c)
        chi = euler_characteristic(c)
        v.entries[name] = {
            "class_T": str(c.to_basis("T")),
            "chi": chi,
            "chi_ok": chi >= 0,
            "T_nonnegative": ok,
            "witness": list(wit) if wit else None,
        }
    return v


@dataclass
class GraphClassReport:
    graph: Multigraph
    psi: MultiPoly
    affine_class: IntPoly | Undetermined
    projective_class: IntPoly | Undetermined
    complement_class: IntPoly | Undetermined
    affine_complement_class: IntPoly | Undetermined
    chi_X: int | None
    chi_Y: int | None
    method: str
    f1_verdict: F1Verdict | Undetermined
    extra: dict = field(default_factory=dict)

    @property
    def determined(self) -> bool:
        return not isinstance(self.affine_class, Undetermined)

    def to_json(self) -> dict:
        def enc(c):
            if isinstance(c, IntPoly):
                return {"L": c.to_basis("L").to_json(), "T": c.to_basis("T").to_json(), "text_T": str(c.to_basis("T"))}
            return c.to_json()

        return {
            "graph": self.graph.to_json(),
            "b1": betti1(self.graph),
            "psi": self.psi.to_json(),
            "method": self.method,
            "affine_class": enc(self.affine_class),
            "projective_class": enc(self.projective_class),
            "complement_class": enc(self.complement_class),
            "affine_complement_class": enc(self.affine_complement_class),
            "chi_X": self.chi_X,
            "chi_Y": self.chi_Y,
            "f1_verdict": self.f1_verdict.to_json(),
            **self.extra,
        }


def graph_classes(g: Multigraph, method: str = "delcon", primes=None, budget=None) -> GraphClassReport:
    psi = kirchhoff_polynomial(g)
    n = g.n_edges
    extra: dict = {}
    if method == "delcon":
        aff = class_via_delcon(g, primes, budget)
    elif method == "counting":
        aff, prof = class_via_counting(g, primes, budget)
        extra["counting_profile"] = prof.to_json()
    elif method == "closed-form":
        aff = class_via_closed_form(g)
        if aff is None:
            aff = Undetermined("no closed form applies to this graph")
    else:
        raise ValueError(f"unknown method {method!r}")
    if isinstance(aff, Undetermined):
        return GraphClassReport(g, psi, aff, aff, aff, aff, None, None, method, aff, extra)
    const = psi.constant_value() is not None
    proj = projective_from_affine(aff, const)
    comp = IntPoly.projective_space(n - 1) - proj
    aff_comp = L**n - aff
    verdict = f1_verdict_for({"X": proj, "Y": comp, "X_hat": aff, "Y_hat": aff_comp})
    return GraphClassReport(g, psi, aff, proj, comp, aff_comp, euler_characteristic(proj),
                            euler_characteristic(comp), method, verdict, extra)


def f1_necessary_check(g: Multigraph, method: str = "delcon", primes=None, budget=None) -> F1Verdict | Undetermined:
    return graph_classes(g, method, primes, budget).f1_verdict


# Euler characteristic statements

def projective_count_plan(nvars: int, budget: int | None = None) -> tuple[list[int], int]:
    """Primes and degree bound for counting a hypersurface in P^{nvars-1}.

    The degree bound is the dimension padded by one when the budget allows
    enough primes, and the bare dimension otherwise.
    """
    budget = default_budget() if budget is None else budget
    dim = max(nvars - 2, 0)
    for deg in (dim + 1, dim):
        qs = first_primes(deg + 3)
        while len(qs) > deg + 1 and qs[-1] ** nvars > budget:
            qs.pop()
        if qs[-1] ** nvars <= budget:
            return qs, deg
    raise BudgetExceeded(f"cannot fit {dim + 1} primes within the budget for {nvars} variables")


def chi_projective_by_counting(polys: Sequence[MultiPoly], nvars: int, budget=None) -> tuple[int, dict]:
    qs, deg = projective_count_plan(nvars, budget)
    prof = counting_profile(polys, qs, nvars, projective=True, budget=budget)
    return chi_from_profile(prof, deg), {"profile": prof.to_json(), "degree_bound": deg}


def bridge_sides(g: Multigraph, e: int) -> list[Multigraph]:
    """Connected pieces of g minus the bridge e, each as its own graph (isolated vertices kept)."""
    d, _ = delete_edge(g, e)
    comp = d.components()
    out = []
    for c in sorted(set(comp)):
        vs = [v for v in range(d.vertex_count) if comp[v] == c]
        lab = {v: k for k, v in enumerate(vs)}
        out.append(Multigraph(len(vs), tuple((lab[t], lab[h]) for t, h in d.edges if comp[t] == c)))
    return out


def chin_hypothesis(g: Multigraph) -> tuple[bool, int | None]:
    """Whether some bridge or loop e makes the complement class divisible by (L-1)^2.

    For a bridge this means at least two pieces of g minus e carry cycles; for a
    loop it means g minus e is not a forest.  Returns the first such edge.
    """
    for i in range(g.n_edges):
        kind = classify_edge(g, i)
        if kind == "bridge":
            if sum(betti1(s) > 0 for s in bridge_sides(g, i)) >= 2:
                return True, i
        elif kind == "loop":
            if betti1(delete_edge(g, i)[0]) > 0:
                return True, i
    return False, None


def chi_theorems_check(g: Multigraph, budget=None) -> dict:
    """Check the Euler characteristic statements that apply to g against point counts."""
    n = g.n_edges
    b1 = betti1(g)
    psi = kirchhoff_polynomial(g)
    chi_x, info = chi_projective_by_counting([psi], n, budget)
    kinds = [classify_edge(g, i) for i in range(n)]
    checks = []

    if b1 == 1:
        checks.append({"statement": "b1_one", "predicted": n - 1, "computed": chi_x, "holds": chi_x == n - 1})
    if b1 >= 1 and ("bridge" in kinds or "loop" in kinds):
        hyp, edge = chin_hypothesis(g)
        checks.append({
            "statement": "bridge_or_loop",
            "predicted": n,
            "computed": chi_x,
            "holds": chi_x == n,
            "cycles_on_both_sides": hyp,
            "witness_edge": edge,
        })
    if b1 >= 2 and "bridge" not in kinds and "loop" not in kinds:
        e = 0
        d, _ = delete_edge(g, e)
        c, _ = contract_edge(g, e)
        pd, pc = kirchhoff_polynomial(d), kirchhoff_polynomial(c)
        chi_d, _ = chi_projective_by_counting([pd], n - 1, budget)
        chi_i, _ = chi_projective_by_counting([pd, pc], n - 1, budget)
        pred = n + chi_i - chi_d
        checks.append({
            "statement": "deletion_contraction_chi",
            "edge": e,
            "chi_deletion": chi_d,
            "chi_intersection": chi_i,
            "predicted": pred,
            "computed": chi_x,
            "holds": pred == chi_x,
        })
    b = is_banana(g)
    if b is not None and b >= 3:
        checks.append({"statement": "banana", "predicted": b + (-1) ** b, "computed": chi_x,
                       "holds": chi_x == b + (-1) ** b})
    return {"graph": g.to_json(), "n": n, "b1": b1, "chi_X": chi_x, "counting": info, "checks": checks}


def vanishing_order_check(g: Multigraph, primes=None, budget=None) -> list[dict]:
    """For every bridge or loop e of g, compare ord_{L=1}[Y_G] with 1 + s_G (taken literally, forests included)."""
    rep = graph_classes(g, "delcon", primes, budget)
    if not rep.determined:
        return [{"edge": None, "undetermined": str(rep.affine_class)}]
    y = rep.complement_class
    r = vanishing_order_at_one(y) if not y.is_zero() else None
    out = []
    for i in range(g.n_edges):
        kind = classify_edge(g, i)
        if kind == "bridge":
            sides = bridge_sides(g, i)
            parts = [graph_classes(s, "delcon", primes, budget).complement_class for s in sides]
        elif kind == "loop":
            parts = [graph_classes(contract_edge(g, i)[0], "delcon", primes, budget).complement_class]
        else:
            continue
        if any(isinstance(p, Undetermined) for p in parts):
            out.append({"edge": i, "kind": kind, "undetermined": True})
            continue
        prod = IntPoly.const(1)
        for p in parts:
            prod = prod * p
        s = vanishing_order_at_one(prod) if not prod.is_zero() else None
        pred = None if s is None else 1 + s
        if kind == "bridge":
            hyp = sum(betti1(sd) > 0 for sd in sides) >= 2
        else:
            hyp = betti1(contract_edge(g, i)[0]) > 0
        out.append({
            "edge": i,
            "kind": kind,
            "order": r,
            "predicted": pred,
            "holds": pred is not None and pred == r,
            "cycles_on_both_sides": hyp,
        })
    return out


# scans

def aluffi_scan(max_edges: int = 6, primes=None, budget=None, graphs=None) -> dict:
    """Histogram of chi(Y_G) over connected graphs; values outside {-1, 0, 1} are listed."""
    from .corpus import connected_multigraphs

    hist: dict[int, int] = {}
    exceptions, undetermined = [], []
    forests: dict[int, int] = {}
    total = 0
    for g in graphs if graphs is not None else connected_multigraphs(max_edges):
        if g.n_edges == 0:
            continue
        if betti1(g) == 0:
            # Y is all of P^{n-1} here, so chi(Y) = n; kept out of the histogram
            forests[g.n_edges] = forests.get(g.n_edges, 0) + 1
            continue
        total += 1
        rep = graph_classes(g, "delcon", primes, budget)
        if not rep.determined:
            undetermined.append({"graph": g.to_json(), "reason": str(rep.affine_class)})
            continue
        hist[rep.chi_Y] = hist.get(rep.chi_Y, 0) + 1
        if rep.chi_Y not in (-1, 0, 1):
            exceptions.append({"graph": g.to_json(), "chi_Y": rep.chi_Y})
    return {
        "max_edges": max_edges,
        "graphs": total,
        "forests_by_edge_count": {str(k): forests[k] for k in sorted(forests)},
        "histogram": {str(k): hist[k] for k in sorted(hist)},
        "exceptions": exceptions,
        "undetermined": undetermined,
    }
