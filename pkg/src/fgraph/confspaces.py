"""Nests of biconnected induced subgraphs and classes of wonderful compactifications of X^V, X = P^D."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graphs import (
    Multigraph,
    all_biconnected_induced_subgraphs,
    canonical_form,
    cycle,
    path,
    quotient_by_subgraphs,
)
from .motive import IntPoly, L, euler_characteristic


def _check_graph(g: Multigraph, need_connected: bool = False):
    if g.has_loops():
        raise ValueError("configuration space classes need a loopless graph")
    if need_connected and not g.is_connected():
        raise ValueError("configuration space classes need a connected graph")


def _compatible(a: frozenset, b: frozenset) -> bool:
    return len(a & b) <= 1 or a <= b or b <= a


def _overlap_connected(sets) -> bool:
    sets = list(sets)
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(len(sets)):
            if j not in seen and sets[i] & sets[j]:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(sets)


@dataclass(frozen=True)
class NestForest:
    elements: tuple[frozenset, ...]
    ranks: tuple[int, ...] = ()
    dim: int = 0

    def to_json(self) -> dict:
        return {"elements": [sorted(e) for e in self.elements], "ranks": list(self.ranks), "D": self.dim}


def enumerate_nests(g: Multigraph) -> list[tuple[frozenset, ...]]:
    """All nonempty nests.

    Elements are pairwise disjoint, meet in one vertex, or are nested.  In
    addition, no family of two or more mutually non-nested elements may have an
    overlap-connected union that is itself biconnected: the corresponding
    diagonals would intersect in a diagonal of the building set.
    """
    _check_graph(g)
    gs = all_biconnected_induced_subgraphs(g)
    gset = set(gs)
    out: list[tuple[frozenset, ...]] = []

    def antichain_ok(nest: list[frozenset], new: frozenset) -> bool:
        incomparable = [x for x in nest if not (x <= new or new <= x)]
        for k in range(1, len(incomparable) + 1):
            for sub in combinations(incomparable, k):
                fam = list(sub) + [new]
                if any(a <= b for a in fam for b in fam if a is not b):
                    continue
                if _overlap_connected(fam) and frozenset().union(*fam) in gset:
                    return False
        return True

    def rec(start: int, cur: list[frozenset]):
        for i in range(start, len(gs)):
            e = gs[i]
            if all(_compatible(e, x) for x in cur) and antichain_ok(cur, e):
                cur.append(e)
                out.append(tuple(cur))
                rec(i + 1, cur)
                cur.pop()

    rec(0, [])
    return out


def _quotient_vertices(g: Multigraph, subsets) -> int:
    return quotient_by_subgraphs(g, list(subsets)).vertex_count


def nest_rank(g: Multigraph, nest, gamma: frozenset, D: int) -> int:
    """r_gamma = dim(intersection of the diagonals of strict sub-elements) - dim Delta_gamma."""
    if gamma not in nest:
        raise ValueError("gamma is not an element of the nest")
    if D < 1:
        raise ValueError("D must be >= 1")
    subs = [x for x in nest if x < gamma]
    return D * (_quotient_vertices(g, subs) - _quotient_vertices(g, [gamma]))


def nest_forest(g: Multigraph, nest, D: int) -> NestForest:
    return NestForest(tuple(nest), tuple(nest_rank(g, nest, x, D) for x in nest), D)


def _geometric(r: int) -> IntPoly:
    """L + L^2 + ... + L^(r-1)."""
    return IntPoly((0,) + (1,) * (r - 1), "L") if r >= 2 else IntPoly()


def conf_contributions(g: Multigraph, D: int) -> list[dict]:
    _check_graph(g, True)
    X = IntPoly.projective_space(D)
    rows = []
    for nest in enumerate_nests(g):
        nf = nest_forest(g, nest, D)
        inner = IntPoly.const(1)
        for r in nf.ranks:
            inner = inner * _geometric(r)
        v = _quotient_vertices(g, nest)
        count = 1
        for r in nf.ranks:
            count *= max(r - 1, 0)
        rows.append({"nest": nf, "quotient_vertices": v, "term": X**v * inner, "M_size": count})
    return rows


def conf_class(g: Multigraph, D: int) -> IntPoly:
    X = IntPoly.projective_space(D)
    total = X**g.vertex_count
    for row in conf_contributions(g, D):
        total = total + row["term"]
    return total


def conf_euler(g: Multigraph, D: int) -> int:
    """Euler characteristic from chi(P^D) = D + 1 and #M_N = prod (r_gamma - 1)."""
    chi = D + 1
    total = chi**g.vertex_count
    for row in conf_contributions(g, D):
        total += chi ** row["quotient_vertices"] * row["M_size"]
    return total


# stepwise blowup oracle

def _supported_shape(g: Multigraph) -> str:
    key = canonical_form(g)
    for name, h in (("edge", path(1)), ("path", path(2)), ("triangle", cycle(3))):
        if key == canonical_form(h):
            return name
    raise ValueError("blowup oracle supports only the 2-vertex edge, the 3-vertex path and the triangle")


def blowup_oracle(g: Multigraph, D: int, trace: list | None = None) -> IntPoly:
    """Blow up X^V along the diagonals, deepest first, tracking transforms of later centers.

    Each blowup of a smooth center Z of codimension c adds [Z]([P^{c-1}] - 1).
    A pending diagonal containing Z is replaced by its blowup along Z.  Two
    diagonals meeting in a diagonal that was already blown up have disjoint
    transforms.  Two diagonals meeting transversally in a diagonal that is not
    a center (the 3-path) get blown up along the intersection.
    """
    _supported_shape(g)
    if not 1 <= D <= 3:
        raise ValueError("blowup oracle supports D in 1..3")
    X = IntPoly.projective_space(D)
    nv = g.vertex_count

    def dim_diag(vs) -> int:
        return D * (nv - len(vs) + 1)

    def proj(k):
        return IntPoly.projective_space(k)

    centers = sorted(all_biconnected_induced_subgraphs(g), key=lambda s: (-len(s), sorted(s)))
    cls = {c: X ** (nv - len(c) + 1) for c in centers}
    done: list[frozenset] = []
    ambient = X**nv
    for z in centers:
        codim = D * nv - dim_diag(z)
        ambient = ambient + cls[z] * (proj(codim - 1) - 1)
        if trace is not None:
            trace.append({"center": sorted(z), "codim": codim, "center_class": str(cls[z]), "ambient": str(ambient)})
        for v in centers:
            if v in done or v == z:
                continue
            if v <= z:
                c = dim_diag(v) - dim_diag(z)
                cls[v] = cls[v] + cls[z] * (proj(c - 1) - 1)
            elif v & z:
                union = v | z
                if union in done or union == z:
                    continue
                inter = X ** (nv - len(union) + 1)
                c = dim_diag(v) - dim_diag(union)
                cls[v] = cls[v] + inter * (proj(c - 1) - 1)
        done.append(z)
    return ambient


def conf_report(g: Multigraph, D: int, oracle: bool = False) -> dict:
    rows = conf_contributions(g, D)
    c = conf_class(g, D)
    from .motive import is_T_nonnegative

    ok, wit = is_T_nonnegative(c)
    out = {
        "graph": g.to_json(),
        "D": D,
        "class": {"L": c.to_json(), "T": c.to_basis("T").to_json(), "text_T": str(c.to_basis("T"))},
        "euler_from_class": euler_characteristic(c),
        "euler_formula": conf_euler(g, D),
        "T_nonnegative": ok,
        "witness": list(wit) if wit else None,
        "nests": [
            {**r["nest"].to_json(), "quotient_vertices": r["quotient_vertices"], "M_size": r["M_size"],
             "term": str(r["term"].to_basis("T"))}
            for r in rows
        ],
    }
    if oracle:
        trace: list = []
        b = blowup_oracle(g, D, trace)
        out["oracle"] = {"class": str(b.to_basis("T")), "matches": b == c, "steps": trace}
    return out
