"""Connected multigraphs (loops allowed) up to isomorphism, grown one edge at a time."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterator

from .graphs import Multigraph, canonical_form


def _from_key(key) -> Multigraph:
    v, edges = key
    return Multigraph(v, tuple(edges))


@lru_cache(maxsize=None)
def _level(k: int) -> tuple:
    """Canonical keys of connected graphs with exactly k edges."""
    if k == 0:
        return (canonical_form(Multigraph(1, ())),)
    seen = set()
    for key in _level(k - 1):
        g = _from_key(key)
        v = g.vertex_count
        cands = [Multigraph(v, g.edges + ((a, b),)) for a in range(v) for b in range(a, v)]
        cands += [Multigraph(v + 1, g.edges + ((a, v),)) for a in range(v)]
        for h in cands:
            seen.add(canonical_form(h))
    return tuple(sorted(seen))


def connected_multigraphs(max_edges: int, min_edges: int = 1) -> Iterator[Multigraph]:
    """Each connected multigraph with min_edges..max_edges edges, once, in a fixed order."""
    if max_edges > 7:
        raise ValueError("corpus generation is limited to 7 edges")
    for k in range(min_edges, max_edges + 1):
        for key in _level(k):
            yield _from_key(key)


def connected_multigraphs_bruteforce(k: int) -> set:
    """Oracle: canonical keys of all connected graphs with k edges on at most k + 1 vertices."""
    out = set()
    for v in range(1, k + 2):
        pairs = [(a, b) for a in range(v) for b in range(a, v)]
        for combo in combinations_with_replacement(pairs, k):
            g = Multigraph(v, combo)
            if g.is_connected() and all(g.degree(x) > 0 or v == 1 for x in range(v)):
                out.add(canonical_form(g))
    return out
