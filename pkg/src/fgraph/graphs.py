"""Multigraphs with positional edge identity and the combinatorics built on them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence

EdgeSubset = frozenset  # frozenset of edge indices


@dataclass(frozen=True)
class Multigraph:
    """Vertices 0..vertex_count-1 and an ordered tuple of (tail, head) edges."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("negative vertex count")
        edges = tuple((int(t), int(h)) for t, h in self.edges)
        for t, h in edges:
            if not (0 <= t < self.vertex_count and 0 <= h < self.vertex_count):
                raise ValueError(f"edge ({t}, {h}) has an endpoint outside 0..{self.vertex_count - 1}")
        object.__setattr__(self, "edges", edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def _check_index(self, i: int):
        if not (0 <= i < len(self.edges)):
            raise IndexError(f"edge index {i} out of range for {len(self.edges)} edges")

    def components(self, edge_subset: Iterable[int] | None = None) -> list[int]:
        """Component label for each vertex, using all edges or the given subset."""
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        idx = range(len(self.edges)) if edge_subset is None else edge_subset
        for i in idx:
            a, b = find(self.edges[i][0]), find(self.edges[i][1])
            if a != b:
                parent[max(a, b)] = min(a, b)
        roots = [find(v) for v in range(self.vertex_count)]
        relabel: dict[int, int] = {}
        return [relabel.setdefault(r, len(relabel)) for r in roots]

    def component_count(self, edge_subset: Iterable[int] | None = None) -> int:
        return len(set(self.components(edge_subset)))

    def is_connected(self) -> bool:
        return self.component_count() <= 1

    def has_loops(self) -> bool:
        return any(t == h for t, h in self.edges)

    def is_forest(self) -> bool:
        return betti1(self) == 0

    def degree(self, v: int) -> int:
        return sum((t == v) + (h == v) for t, h in self.edges)

    def to_text(self) -> str:
        lines = [f"{self.vertex_count} {len(self.edges)}"]
        lines += [f"{t} {h}" for t, h in self.edges]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, d: dict) -> "Multigraph":
        return cls(int(d["vertices"]), tuple(tuple(e) for e in d["edges"]))

    @classmethod
    def from_text(cls, text: str) -> "Multigraph":
        tokens = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not tokens or len(tokens[0]) != 2:
            raise ValueError("first line must be 'V E'")
        v, e = int(tokens[0][0]), int(tokens[0][1])
        body = tokens[1:]
        if len(body) != e:
            raise ValueError(f"expected {e} edge lines, found {len(body)}")
        return cls(v, tuple((int(a), int(b)) for a, b in body))

    @classmethod
    def parse(cls, text: str) -> "Multigraph":
        s = text.lstrip()
        if s.startswith("{"):
            return cls.from_json(json.loads(s))
        return cls.from_text(text)

    def __str__(self):
        return f"Multigraph(V={self.vertex_count}, E={list(self.edges)})"


def betti1(g: Multigraph) -> int:
    return len(g.edges) - g.vertex_count + g.component_count()


# deletion / contraction

def delete_edge(g: Multigraph, i: int) -> tuple[Multigraph, tuple[int | None, ...]]:
    """Remove edge i.  The remap sends each old edge index to its new index (None for i)."""
    g._check_index(i)
    edges = g.edges[:i] + g.edges[i + 1:]
    remap = tuple(None if j == i else (j if j < i else j - 1) for j in range(len(g.edges)))
    return Multigraph(g.vertex_count, edges), remap


def contract_edge(g: Multigraph, i: int) -> tuple[Multigraph, tuple[int | None, ...]]:
    """Identify the endpoints of edge i and drop it; a loop is simply deleted.

    The surviving endpoint is the smaller vertex label; higher labels shift down.
    """
    g._check_index(i)
    t, h = g.edges[i]
    if t == h:
        return delete_edge(g, i)
    keep, gone = min(t, h), max(t, h)

    def mv(v):
        if v == gone:
            v = keep
        return v - 1 if v > gone else v

    edges = tuple((mv(a), mv(b)) for j, (a, b) in enumerate(g.edges) if j != i)
    remap = tuple(None if j == i else (j if j < i else j - 1) for j in range(len(g.edges)))
    return Multigraph(g.vertex_count - 1, edges), remap


def classify_edge(g: Multigraph, i: int) -> str:
    g._check_index(i)
    t, h = g.edges[i]
    if t == h:
        return "loop"
    rest = [j for j in range(len(g.edges)) if j != i]
    if g.component_count(rest) > g.component_count():
        return "bridge"
    return "regular"


# spanning forests

def spanning_forests(g: Multigraph) -> list[EdgeSubset]:
    """All spanning forests, by deletion-contraction on the lowest-index edge."""

    def rec(h: Multigraph, labels: tuple[int, ...]) -> list[frozenset]:
        if not h.edges:
            return [frozenset()]
        kind = classify_edge(h, 0)
        d, _ = delete_edge(h, 0)
        if kind == "loop":
            return rec(d, labels[1:])
        c, _ = contract_edge(h, 0)
        with_e = [f | {labels[0]} for f in rec(c, labels[1:])]
        if kind == "bridge":
            return with_e
        return with_e + rec(d, labels[1:])

    return sorted(rec(g, tuple(range(len(g.edges)))), key=lambda s: sorted(s))


def spanning_forests_bruteforce(g: Multigraph) -> list[EdgeSubset]:
    """Oracle: every subset of the right size that is acyclic."""
    size = g.vertex_count - g.component_count()
    out = []
    for sub in combinations(range(len(g.edges)), size):
        if g.component_count(sub) == g.component_count() and size == g.vertex_count - g.component_count(sub):
            out.append(frozenset(sub))
    return sorted(out, key=lambda s: sorted(s))


# biconnectivity and quotients

def induced_edges(g: Multigraph, vertices: Iterable[int]) -> list[int]:
    vs = set(vertices)
    return [i for i, (t, h) in enumerate(g.edges) if t in vs and h in vs]


def _is_biconnected(g: Multigraph, vs: Sequence[int]) -> bool:
    vs = list(vs)
    if len(vs) < 2:
        return False
    adj: dict[int, set[int]] = {v: set() for v in vs}
    for i in induced_edges(g, vs):
        t, h = g.edges[i]
        if t != h:
            adj[t].add(h)
            adj[h].add(t)

    def connected(avoid: int | None) -> bool:
        rest = [v for v in vs if v != avoid]
        seen = {rest[0]}
        stack = [rest[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y != avoid and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(rest)

    if not connected(None):
        return False
    if len(vs) == 2:
        return True
    return all(connected(v) for v in vs)


def biconnected_induced_subgraphs(g: Multigraph, k: int) -> list[frozenset[int]]:
    """Vertex sets of size k whose induced subgraph is 2-vertex-connected."""
    if g.has_loops():
        raise ValueError("biconnected induced subgraphs are only defined for loopless graphs")
    return [frozenset(s) for s in combinations(range(g.vertex_count), k) if _is_biconnected(g, s)]


def all_biconnected_induced_subgraphs(g: Multigraph) -> list[frozenset[int]]:
    out = []
    for k in range(2, g.vertex_count + 1):
        out.extend(biconnected_induced_subgraphs(g, k))
    return out


def quotient_by_subgraphs(g: Multigraph, subsets: Sequence[Iterable[int]]) -> Multigraph:
    """Shrink each connected component of the union of the induced subgraphs to a vertex.

    Edges inside the union are removed; all other edges are kept with relabelled
    endpoints.  The vertex count of the result is ``#V(G // union)``.
    """
    subsets = [frozenset(s) for s in subsets]
    inside = set()
    for s in subsets:
        inside.update(induced_edges(g, s))
    comp = g.components(sorted(inside))
    labels: dict[int, int] = {}
    new_v = [labels.setdefault(c, len(labels)) for c in comp]
    edges = tuple((new_v[t], new_v[h]) for i, (t, h) in enumerate(g.edges) if i not in inside)
    return Multigraph(len(labels), edges)


# matrices

@dataclass(frozen=True)
class CircuitMatrix:
    """Signed fundamental-cycle matrix: rows are edges, columns are cycles."""

    rows: tuple[tuple[int, ...], ...]
    tree: frozenset
    cycle_edges: tuple[int, ...]

    @property
    def n_cycles(self) -> int:
        return len(self.cycle_edges)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)


def lowest_index_spanning_forest(g: Multigraph) -> frozenset:
    parent = list(range(g.vertex_count))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    tree = set()
    for i, (t, h) in enumerate(g.edges):
        a, b = find(t), find(h)
        if a != b:
            parent[a] = b
            tree.add(i)
    return frozenset(tree)


def _tree_path(g: Multigraph, tree: frozenset, src: int, dst: int) -> list[tuple[int, int]]:
    """Edges (index, sign) along the tree path from src to dst; sign +1 if traversed tail->head."""
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(g.vertex_count)}
    for i in tree:
        t, h = g.edges[i]
        adj[t].append((h, i, 1))
        adj[h].append((t, i, -1))
    prev: dict[int, tuple[int, int, int] | None] = {src: None}
    stack = [src]
    while stack:
        x = stack.pop()
        for y, i, s in adj[x]:
            if y not in prev:
                prev[y] = (x, i, s)
                stack.append(y)
    path = []
    v = dst
    while prev[v] is not None:
        x, i, s = prev[v]
        path.append((i, s))
        v = x
    return path[::-1]


def circuit_matrix(g: Multigraph) -> CircuitMatrix:
    """Columns are fundamental cycles of the non-tree edges, oriented along that edge."""
    tree = lowest_index_spanning_forest(g)
    cyc = tuple(i for i in range(len(g.edges)) if i not in tree)
    rows = [[0] * len(cyc) for _ in g.edges]
    for j, i in enumerate(cyc):
        t, h = g.edges[i]
        rows[i][j] = 1
        # close the cycle by walking from head back to tail in the tree
        for k, s in _tree_path(g, tree, h, t):
            rows[k][j] += s
    return CircuitMatrix(tuple(tuple(r) for r in rows), tree, cyc)


def incidence_matrix(g: Multigraph) -> list[list[int]]:
    """V x E matrix with +1 at the head and -1 at the tail (0 for loops)."""
    m = [[0] * len(g.edges) for _ in range(g.vertex_count)]
    for i, (t, h) in enumerate(g.edges):
        if t != h:
            m[h][i] += 1
            m[t][i] -= 1
    return m


def rank_exact(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by Gaussian elimination with fractions."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    rank, ncols = 0, len(m[0])
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


# families and combinations

def banana(n: int) -> Multigraph:
    if n < 1:
        raise ValueError("banana(n) needs n >= 1")
    return Multigraph(2, ((0, 1),) * n)


def cycle(n: int) -> Multigraph:
    """Cycle with n edges (n = 1 is a loop, n = 2 the banana with two edges)."""
    if n < 1:
        raise ValueError("cycle(n) needs n >= 1")
    if n == 1:
        return Multigraph(1, ((0, 0),))
    return Multigraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Multigraph:
    """Path with n edges on n + 1 vertices."""
    if n < 0:
        raise ValueError("path(n) needs n >= 0")
    return Multigraph(n + 1, tuple((i, i + 1) for i in range(n)))


def complete(n: int) -> Multigraph:
    if n < 1:
        raise ValueError("complete(n) needs n >= 1")
    return Multigraph(n, tuple(combinations(range(n), 2)))


def lemon(m: int) -> Multigraph:
    """Lemon wedge with m sections: hub 0 joined to every vertex of the rim path 1..m+1.

    Consecutive triangles share a spoke, giving 2 + m vertices and 2m + 1 edges.
    For m <= 2 this coincides with m triangles on one common edge; at m = 3 the
    two readings differ and only this one matches the known complement class.
    """
    if m < 1:
        raise ValueError("lemon(m) needs m >= 1")
    rim = tuple((i, i + 1) for i in range(1, m + 1))
    spokes = tuple((0, i) for i in range(1, m + 2))
    return Multigraph(m + 2, rim + spokes)


def wheel(spokes: int) -> Multigraph:
    """Hub 0 joined to a rim cycle on vertices 1..spokes; wheel(3) is K4."""
    if spokes < 3:
        raise ValueError("wheel needs at least 3 spokes")
    rim = tuple((1 + i, 1 + (i + 1) % spokes) for i in range(spokes))
    return Multigraph(spokes + 1, rim + tuple((0, 1 + i) for i in range(spokes)))


FAMILIES = {
    "banana": banana,
    "cycle": cycle,
    "lemon": lemon,
    "path": path,
    "complete": complete,
    "wheel": wheel,
}


def family(name: str, n: int) -> Multigraph:
    try:
        return FAMILIES[name](n)
    except KeyError:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}") from None


def disjoint_union(g1: Multigraph, g2: Multigraph) -> Multigraph:
    off = g1.vertex_count
    return Multigraph(off + g2.vertex_count, g1.edges + tuple((t + off, h + off) for t, h in g2.edges))


def one_vertex_join(g1: Multigraph, g2: Multigraph, v1: int = 0, v2: int = 0) -> Multigraph:
    """Glue vertex v2 of g2 onto vertex v1 of g1."""
    u = disjoint_union(g1, g2)
    return quotient_vertices(u, v1, g1.vertex_count + v2)


def quotient_vertices(g: Multigraph, a: int, b: int) -> Multigraph:
    keep, gone = min(a, b), max(a, b)

    def mv(v):
        if v == gone:
            v = keep
        return v - 1 if v > gone else v

    return Multigraph(g.vertex_count - 1, tuple((mv(t), mv(h)) for t, h in g.edges))


def blocks(g: Multigraph) -> list[list[int]]:
    """Edge-index lists of the blocks (2-connected pieces, bridges, loops) of g."""
    # Hopcroft-Tarjan on the multigraph, keeping parallel edges distinct
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.vertex_count)}
    out: list[list[int]] = []
    for i, (t, h) in enumerate(g.edges):
        if t == h:
            out.append([i])
        else:
            adj[t].append((h, i))
            adj[h].append((t, i))
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    stack: list[int] = []
    counter = [0]

    def dfs(u: int, parent_edge: int | None):
        disc[u] = low[u] = counter[0]
        counter[0] += 1
        for w, i in adj[u]:
            if i == parent_edge:
                continue
            if w not in disc:
                stack.append(i)
                dfs(w, i)
                low[u] = min(low[u], low[w])
                if low[w] >= disc[u]:
                    comp = []
                    while True:
                        j = stack.pop()
                        comp.append(j)
                        if j == i:
                            break
                    out.append(sorted(comp))
            elif disc[w] < disc[u]:
                stack.append(i)
                low[u] = min(low[u], disc[w])

    for v in range(g.vertex_count):
        if v not in disc:
            dfs(v, None)
    return sorted(out)


def edge_subgraph(g: Multigraph, edge_idx: Sequence[int]) -> Multigraph:
    """Subgraph on the given edges with its vertices relabelled compactly."""
    vs = sorted({v for i in edge_idx for v in g.edges[i]})
    lab = {v: k for k, v in enumerate(vs)}
    return Multigraph(len(vs), tuple((lab[g.edges[i][0]], lab[g.edges[i][1]]) for i in edge_idx))


def relabel(g: Multigraph, perm: Sequence[int]) -> Multigraph:
    """Apply the vertex permutation v -> perm[v]."""
    return Multigraph(g.vertex_count, tuple((perm[t], perm[h]) for t, h in g.edges))


def canonical_form(g: Multigraph) -> tuple:
    """Isomorphism-invariant key (edges unordered and unoriented), by refined brute force."""
    deg = [0] * g.vertex_count
    loops = [0] * g.vertex_count
    for t, h in g.edges:
        deg[t] += 1
        deg[h] += 1
        if t == h:
            loops[t] += 1
    inv = [(deg[v], loops[v]) for v in range(g.vertex_count)]
    classes: dict[tuple, list[int]] = {}
    for v in range(g.vertex_count):
        classes.setdefault(inv[v], []).append(v)
    order = sorted(classes)
    best = None
    # positions are assigned class by class, so only permutations inside classes are tried
    def rec(ci: int, assigned: dict[int, int], nextpos: int):
        nonlocal best
        if ci == len(order):
            key = tuple(sorted(tuple(sorted((assigned[t], assigned[h]))) for t, h in g.edges))
            if best is None or key < best:
                best = key
            return
        members = classes[order[ci]]
        for p in permutations(members):
            a = dict(assigned)
            for k, v in enumerate(p):
                a[v] = nextpos + k
            rec(ci + 1, a, nextpos + len(members))

    rec(0, {}, 0)
    return (g.vertex_count, best)
