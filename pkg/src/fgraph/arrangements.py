"""Central hyperplane arrangements: flats, Moebius function, characteristic polynomial."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, gcd
from typing import Sequence

from .graphs import Multigraph, betti1, circuit_matrix, rank_exact
from .motive import IntPoly, is_T_nonnegative
from .pointcount import MultiPoly, count_projective


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    v = tuple(int(x) // g for x in v)
    first = next(x for x in v if x)
    return v if first > 0 else tuple(-x for x in v)


@dataclass(frozen=True)
class Arrangement:
    """Central arrangement in A^m given by normal vectors, deduplicated up to scalars."""

    ambient_dim: int
    normals: tuple[tuple[int, ...], ...]
    multiplicity: tuple[int, ...] = ()
    labels: tuple[tuple[int, ...], ...] = ()  # input positions mapped to each normal

    @classmethod
    def from_normals(cls, normals: Sequence[Sequence[int]], ambient_dim: int | None = None) -> "Arrangement":
        if ambient_dim is None:
            if not normals:
                raise ValueError("ambient_dim is required for an empty arrangement")
            ambient_dim = len(normals[0])
        seen: dict[tuple[int, ...], list[int]] = {}
        for pos, v in enumerate(normals):
            if len(v) != ambient_dim:
                raise ValueError(f"normal {list(v)} does not live in dimension {ambient_dim}")
            if not any(v):
                raise ValueError("zero normal vector")
            seen.setdefault(_primitive(v), []).append(pos)
        keys = list(seen)
        return cls(ambient_dim, tuple(keys), tuple(len(seen[k]) for k in keys), tuple(tuple(seen[k]) for k in keys))

    @property
    def size(self) -> int:
        return len(self.normals)

    def linear_forms(self) -> list[MultiPoly]:
        return [MultiPoly.linear(v) for v in self.normals]

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "normals": [list(v) for v in self.normals],
                "multiplicity": list(self.multiplicity)}

    @classmethod
    def from_json(cls, d: dict) -> "Arrangement":
        return cls.from_normals([tuple(v) for v in d["normals"]], d.get("ambient_dim"))


@dataclass(frozen=True)
class Flat:
    closure: frozenset  # indices of all normals vanishing on the flat
    dim: int
    mobius: int  # mu(ambient, flat)
    codim: int


@dataclass
class IntersectionPoset:
    arrangement: Arrangement
    flats: list[Flat] = field(default_factory=list)

    def index(self) -> dict[frozenset, int]:
        return {f.closure: i for i, f in enumerate(self.flats)}

    def below(self, x: Flat) -> list[Flat]:
        """Flats y <= x (y contains x as a subspace)."""
        return [y for y in self.flats if y.closure <= x.closure]

    def mobius_interval(self, x: Flat, y: Flat) -> int:
        """mu(x, y) for x <= y, by the defining recursion on the interval."""
        inter = sorted((z for z in self.flats if x.closure <= z.closure <= y.closure), key=lambda z: len(z.closure))
        mu: dict[frozenset, int] = {}
        for z in inter:
            if z.closure == x.closure:
                mu[z.closure] = 1
            else:
                mu[z.closure] = -sum(mu[w.closure] for w in inter if w.closure < z.closure and w.closure in mu)
        return mu[y.closure]

    def to_json(self) -> dict:
        return {"flats": [{"closure": sorted(f.closure), "dim": f.dim, "mobius": f.mobius} for f in self.flats]}


def _closure(normals, subset: Sequence[int]) -> tuple[frozenset, int]:
    base = [normals[i] for i in subset]
    r = rank_exact(base) if base else 0
    clo = [i for i in range(len(normals)) if i in subset or rank_exact(base + [normals[i]]) == r]
    return frozenset(clo), r


def intersection_poset(a: Arrangement) -> IntersectionPoset:
    """All flats, found by closing the ambient space under adding one hyperplane at a time."""
    m = a.ambient_dim
    found: dict[frozenset, int] = {frozenset(): 0}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for clo in frontier:
            for i in range(a.size):
                if i in clo:
                    continue
                c, r = _closure(a.normals, sorted(clo | {i}))
                if c not in found:
                    found[c] = r
                    nxt.append(c)
        frontier = nxt
    order = sorted(found, key=lambda c: (found[c], sorted(c)))
    mu: dict[frozenset, int] = {}
    flats = []
    for c in order:
        mu[c] = 1 if not c else -sum(mu[d] for d in mu if d < c)
        flats.append(Flat(c, m - found[c], mu[c], found[c]))
    return IntersectionPoset(a, flats)


def characteristic_polynomial(a: Arrangement, poset: IntersectionPoset | None = None) -> IntPoly:
    poset = poset or intersection_poset(a)
    acc = [0] * (a.ambient_dim + 1)
    for f in poset.flats:
        acc[f.dim] += f.mobius
    return IntPoly(tuple(acc), "L")


def complement_class(a: Arrangement, poset=None) -> IntPoly:
    """Class of the projective complement P^{m-1} minus the union."""
    if a.size == 0:
        return IntPoly.projective_space(a.ambient_dim - 1)
    return characteristic_polynomial(a, poset).div_L_minus_1()


def union_class(a: Arrangement, poset=None) -> IntPoly:
    return IntPoly.projective_space(a.ambient_dim - 1) - complement_class(a, poset)


def mobius_condition_check(a: Arrangement, poset=None) -> dict:
    """Evaluate the Moebius inequality for each k and the T-positivity of the union class."""
    poset = poset or intersection_poset(a)
    m = a.ambient_dim
    per_k = []
    for k in range(1, m + 1):
        lhs = sum(f.mobius * comb(f.dim, k) for f in poset.flats if f.dim >= k)
        per_k.append({"k": k, "lhs": lhs, "rhs": comb(m, k), "holds": lhs <= comb(m, k)})
    ok, wit = is_T_nonnegative(union_class(a, poset))
    return {
        "per_k": per_k,
        "mobius_passes": all(r["holds"] for r in per_k),
        "union_T_nonnegative": ok,
        "witness": list(wit) if wit else None,
        "agree": all(r["holds"] for r in per_k) == ok,
    }


def union_count_projective(a: Arrangement, q: int) -> int:
    """Brute-force point count of the union, from the product of the linear forms."""
    if a.size == 0:
        return 0
    prod = MultiPoly.constant(a.ambient_dim, 1)
    for f in a.linear_forms():
        prod = prod * f
    return count_projective([prod], q, a.ambient_dim)


def complement_count_projective(a: Arrangement, q: int) -> int:
    total = (q**a.ambient_dim - 1) // (q - 1)
    return total - union_count_projective(a, q)


def _rank_mod(rows, p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def matroid_stable_mod(a: Arrangement, primes: Sequence[int]) -> bool:
    """True if every subset of normals has the same rank over Q and over each F_p.

    Only then does the arrangement reduced mod p have the same lattice of flats.
    """
    for k in range(1, a.size + 1):
        for sub in combinations(a.normals, k):
            r = rank_exact(list(sub))
            if any(_rank_mod(list(sub), p) != r for p in primes):
                return False
    return True


def random_arrangement(rng: random.Random, ambient_dim: int, size: int, lo: int = -3, hi: int = 3) -> Arrangement:
    normals = []
    while len(normals) < size:
        v = tuple(rng.randint(lo, hi) for _ in range(ambient_dim))
        if any(v):
            normals.append(v)
    return Arrangement.from_normals(normals, ambient_dim)


def search_failing_arrangement(seed: int = 0, ambient_dim: int = 3, size: int = 6, tries: int = 200) -> Arrangement | None:
    """Random search for an arrangement violating the Moebius inequality."""
    rng = random.Random(seed)
    for _ in range(tries):
        a = random_arrangement(rng, ambient_dim, size)
        if not mobius_condition_check(a)["mobius_passes"]:
            return a
    return None


def graph_arrangement(g: Multigraph) -> Arrangement:
    """Hyperplanes eta_e . beta = 0 in Q^{b1}, from the rows of the circuit matrix.

    Bridges have a zero row and impose no hyperplane; ``labels`` maps each
    normal back to the edges that produce it.
    """
    b1 = betti1(g)
    if b1 == 0:
        raise ValueError("the graph arrangement needs b1 >= 1 (got a forest)")
    cm = circuit_matrix(g)
    rows = [(e, r) for e, r in enumerate(cm.rows) if any(r)]
    arr = Arrangement.from_normals([r for _, r in rows], b1)
    labels = tuple(tuple(rows[p][0] for p in lab) for lab in arr.labels)
    return Arrangement(arr.ambient_dim, arr.normals, arr.multiplicity, labels)
