"""Undirected graphs over dense vertex ids, chordality and chordal cliques.

Adjacency is stored as one integer bitmask per vertex. The low-level
functions taking ``adj``/``alive`` masks are used directly by the oracle's
enumeration loops; :class:`UGraph` wraps them for everything else.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

Edge = tuple[int, int]


class NotChordalError(ValueError):
    pass


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


# -- mask-level primitives ----------------------------------------------------

def mcs_visit(adj: Sequence[int], alive: int) -> list[int]:
    """Maximum cardinality search visiting order; ties go to the lowest id.

    The reverse of the returned list is a perfect elimination ordering
    whenever the graph is chordal.
    """
    weight = {v: 0 for v in iter_bits(alive)}
    visit = []
    while weight:
        best = max(weight.values())
        v = min(u for u, w in weight.items() if w == best)
        del weight[v]
        visit.append(v)
        for u in iter_bits(adj[v]):
            if u in weight:
                weight[u] += 1
    return visit


def later_masks(adj: Sequence[int], order: Sequence[int]) -> list[tuple[int, int]]:
    """For each vertex in elimination ``order``: (vertex, neighbours later in order)."""
    remaining = mask_of(order)
    out = []
    for v in order:
        remaining &= ~(1 << v)
        out.append((v, adj[v] & remaining))
    return out


def first_violation(adj: Sequence[int], order: Sequence[int]) -> Optional[tuple[int, int, int]]:
    """First vertex whose later neighbourhood is not a clique, as (v, u, w) with u, w
    non-adjacent; None when ``order`` is perfect."""
    for v, later in later_masks(adj, order):
        for u in iter_bits(later):
            missing = later & ~adj[u] & ~(1 << u)
            if missing:
                return v, u, (missing & -missing).bit_length() - 1
    return None


def chordal_peo(adj: Sequence[int], alive: int) -> Optional[list[int]]:
    """Perfect elimination ordering, or None if the graph is not chordal."""
    peo = mcs_visit(adj, alive)[::-1]
    return None if first_violation(adj, peo) is not None else peo


def cliques_from_peo(adj: Sequence[int], peo: Sequence[int]) -> list[int]:
    """Maximal cliques (as masks) of a chordal graph given a perfect ordering."""
    cands = [(1 << v) | later for v, later in later_masks(adj, peo)]
    cands.sort(key=popcount, reverse=True)
    kept: list[int] = []
    for c in cands:
        if not any(c & k == c for k in kept):
            kept.append(c)
    return kept


def _hole_through(adj: Sequence[int], alive: int, v: int, u: int, w: int) -> Optional[list[int]]:
    """Chordless cycle v, u, ..., w via a shortest u-w path avoiding N[v] - {u, w}."""
    allowed = alive & ~(adj[v] | (1 << v)) | (1 << u) | (1 << w)
    prev = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == w:
            path = []
            while x is not None:
                path.append(x)
                x = prev[x]
            return [v] + path[::-1]
        for y in iter_bits(adj[x] & allowed):
            if y not in prev:
                prev[y] = x
                queue.append(y)
    return None


def find_hole(adj: Sequence[int], alive: int, hint: Optional[tuple[int, int, int]] = None) -> Optional[list[int]]:
    if hint is not None:
        hole = _hole_through(adj, alive, *hint)
        if hole is not None:
            return hole
    for v in iter_bits(alive):
        nb = adj[v] & alive
        for u in iter_bits(nb):
            for w in iter_bits(nb & ~adj[u] & ~((1 << (u + 1)) - 1)):
                hole = _hole_through(adj, alive, v, u, w)
                if hole is not None:
                    return hole
    return None


# -- UGraph -------------------------------------------------------------------

@dataclass(frozen=True)
class UGraph:
    n: int
    adj: tuple[int, ...]
    alive: int

    @classmethod
    def empty(cls, n: int) -> "UGraph":
        return cls(n, (0,) * n, (1 << n) - 1)

    @classmethod
    def complete(cls, n: int) -> "UGraph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)), full)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge], alive: Optional[Iterable[int]] = None) -> "UGraph":
        alive_mask = (1 << n) - 1 if alive is None else mask_of(alive)
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (alive_mask >> u & 1 and alive_mask >> v & 1):
                raise ValueError(f"edge {u}-{v} touches a vertex that is not alive")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), alive_mask)

    def vertices(self) -> list[int]:
        return list(iter_bits(self.alive))

    def is_alive(self, v: int) -> bool:
        return 0 <= v < self.n and bool(self.alive >> v & 1)

    def _need(self, v: int) -> None:
        if not self.is_alive(v):
            raise ValueError(f"vertex {v} is not alive")

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(iter_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> frozenset[Edge]:
        return frozenset((u, v) for u in range(self.n) for v in iter_bits(self.adj[u]) if u < v)

    def edge_count(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def non_edges(self) -> list[Edge]:
        vs = self.vertices()
        return [(u, v) for i, u in enumerate(vs) for v in vs[i + 1:] if not self.adj[u] >> v & 1]

    def with_edges(self, edges: Iterable[Edge]) -> "UGraph":
        adj = list(self.adj)
        for u, v in edges:
            if u == v or not (self.alive >> u & 1 and self.alive >> v & 1):
                raise ValueError(f"cannot add edge {u}-{v}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return UGraph(self.n, tuple(adj), self.alive)

    def without_edges(self, edges: Iterable[Edge]) -> "UGraph":
        adj = list(self.adj)
        for u, v in edges:
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
        return UGraph(self.n, tuple(adj), self.alive)

    def is_subgraph_of(self, other: "UGraph") -> bool:
        return all(a & ~b == 0 for a, b in zip(self.adj, other.adj))


@dataclass(frozen=True)
class ChordalityWitness:
    verdict: bool
    peo: Optional[tuple[int, ...]] = None
    hole: Optional[tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.verdict


def is_chordal(g: UGraph) -> ChordalityWitness:
    peo = mcs_visit(g.adj, g.alive)[::-1]
    bad = first_violation(g.adj, peo)
    if bad is None:
        return ChordalityWitness(True, peo=tuple(peo))
    hole = find_hole(g.adj, g.alive, bad)
    assert hole is not None, "MCS violation without a chordless cycle"
    return ChordalityWitness(False, hole=tuple(hole))


def deficiency(g: UGraph, v: int) -> frozenset[Edge]:
    """Missing edges among the neighbours of ``v``."""
    g._need(v)
    nb = g.adj[v]
    return frozenset((u, w) for u in iter_bits(nb) for w in iter_bits(nb & ~g.adj[u]) if u < w)


def eliminate_vertex(g: UGraph, v: int) -> UGraph:
    g._need(v)
    nb = g.adj[v]
    bit = 1 << v
    adj = list(g.adj)
    for u in iter_bits(nb):
        adj[u] = (adj[u] | nb) & ~(1 << u) & ~bit
    adj[v] = 0
    return UGraph(g.n, tuple(adj), g.alive & ~bit)


def is_simplicial(g: UGraph, v: int) -> bool:
    g._need(v)
    nb = g.adj[v]
    return all(nb & ~g.adj[u] == 1 << u for u in iter_bits(nb))


def maximal_cliques_chordal(g: UGraph) -> list[frozenset[int]]:
    peo = chordal_peo(g.adj, g.alive)
    if peo is None:
        raise NotChordalError("graph is not chordal")
    cliques = [frozenset(iter_bits(c)) for c in cliques_from_peo(g.adj, peo)]
    return sorted(cliques, key=lambda c: sorted(c))
