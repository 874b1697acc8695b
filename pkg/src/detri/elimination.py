"""Elimination orders, elimination graphs and elimination-graph detection."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .chordal import (Edge, NotChordalError, UGraph, chordal_peo, cliques_from_peo,
                      iter_bits, mask_of, maximal_cliques_chordal, norm_edge)
from .model import Network, moral_graph
from .statespace import CliqueScorer

EliminationOrder = tuple[int, ...]


def check_order(g: UGraph, order: Sequence[int]) -> EliminationOrder:
    order = tuple(order)
    if len(set(order)) != len(order) or mask_of(order) != g.alive:
        raise ValueError("elimination order must be a permutation of the graph's vertices")
    return order


@dataclass(frozen=True)
class Triangulation:
    """A base graph plus fill edges whose union is chordal."""

    base: UGraph
    fill: frozenset[Edge]

    def __post_init__(self):
        fill = frozenset(norm_edge(u, v) for u, v in self.fill)
        object.__setattr__(self, "fill", fill)
        for u, v in fill:
            if self.base.has_edge(u, v):
                raise ValueError(f"fill edge {u}-{v} is already a base edge")
        if chordal_peo(self.total.adj, self.total.alive) is None:
            raise NotChordalError("base plus fill is not chordal")

    @cached_property
    def total(self) -> UGraph:
        return self.base.with_edges(self.fill)

    def cliques(self) -> list[frozenset[int]]:
        return maximal_cliques_chordal(self.total)


def _eliminate(adj: Sequence[int], order: Sequence[int]) -> list[Edge]:
    work = list(adj)
    remaining = mask_of(order)
    fill: list[Edge] = []
    for v in order:
        remaining &= ~(1 << v)
        nb = work[v] & remaining
        for u in iter_bits(nb):
            missing = nb & ~work[u] & ~(1 << u)
            fill.extend((u, w) for w in iter_bits(missing) if u < w)
        for u in iter_bits(nb):
            work[u] |= nb & ~(1 << u)
    return fill


def elimination_graph(g: UGraph, order: Sequence[int]) -> Triangulation:
    order = check_order(g, order)
    return Triangulation(g, frozenset(_eliminate(g.adj, order)))


def fill_path_predicate(g: UGraph, order: Sequence[int], u: int, v: int) -> bool:
    """True iff u and v are joined by a path whose interior is eliminated before both."""
    order = check_order(g, order)
    if u == v or g.has_edge(u, v):
        raise ValueError(f"{u}-{v} is not a non-adjacent pair")
    pos = {x: i for i, x in enumerate(order)}
    lim = min(pos[u], pos[v])
    allowed = mask_of(x for x in order[:lim])
    reached = 0
    frontier = g.adj[u] & allowed
    while frontier:
        reached |= frontier
        nxt = 0
        for x in iter_bits(frontier):
            nxt |= g.adj[x]
        frontier = nxt & allowed & ~reached
    return bool(g.adj[v] & reached)


def non_minimal_edges(t: Triangulation) -> frozenset[Edge]:
    total = t.total
    out = set()
    for e in t.fill:
        h = total.without_edges([e])
        if chordal_peo(h.adj, h.alive) is not None:
            out.add(e)
    return frozenset(out)


def minimalize(t: Triangulation) -> Triangulation:
    """Drop removable fill edges one at a time (lowest pair first) until minimal."""
    fill = set(t.fill)
    total = t.total
    changed = True
    while changed:
        changed = False
        for e in sorted(fill):
            h = total.without_edges([e])
            if chordal_peo(h.adj, h.alive) is not None:
                fill.discard(e)
                total = h
                changed = True
                break
    return Triangulation(t.base, frozenset(fill))


def is_elimination_graph(t: Triangulation) -> tuple[bool, Optional[EliminationOrder]]:
    """Decide whether some elimination order of ``t.base`` produces exactly ``t.total``.

    At each step the candidates are vertices simplicial in the current
    triangulated graph whose neighbourhood is the same in the current base
    graph; the lowest-id candidate is eliminated from both.
    """
    g = list(t.base.adj)
    tt = list(t.total.adj)
    alive = t.base.alive
    witness = []
    while alive:
        chosen = None
        for v in iter_bits(alive):
            nb = tt[v] & alive
            if g[v] & alive != nb:
                continue
            if all(nb & ~tt[u] == 1 << u for u in iter_bits(nb)):
                chosen = v
                break
        if chosen is None:
            return False, None
        witness.append(chosen)
        nb = g[chosen] & alive
        for u in iter_bits(nb):
            g[u] |= nb & ~(1 << u)
        alive &= ~(1 << chosen)
    return True, tuple(witness)


def delta_state_space_on_removal(t: Triangulation, e: Edge, net: Network) -> int:
    """Change in state space from deleting the non-minimal fill edge ``e``.

    Only valid when every member of the clique holding ``e`` is stochastic.
    ``c`` is the state space of that clique without u and v; the side clique
    keeping u (resp. v) either stays maximal or is absorbed after removal.
    """
    u, v = norm_edge(*e)
    if (u, v) not in non_minimal_edges(t):
        raise ValueError(f"{u}-{v} is not a non-minimal fill edge")
    both = (1 << u) | (1 << v)
    holders = [m for m in _clique_masks(t.total) if m & both == both]
    if len(holders) != 1:
        raise ValueError(f"expected one maximal clique holding {u}-{v}, found {len(holders)}")
    clique = holders[0]
    if any(net.vertices[x].deterministic for x in iter_bits(clique)):
        raise ValueError("clique holding the edge contains a deterministic vertex")
    card = [x.cardinality for x in net.vertices]
    rest = clique & ~both
    c = 1
    for x in iter_bits(rest):
        c *= card[x]
    after = t.total.without_edges([(u, v)])
    keeps_u_maximal = _is_maximal(after, clique & ~(1 << v))
    keeps_v_maximal = _is_maximal(after, clique & ~(1 << u))
    cu, cv = card[u], card[v]
    if keeps_u_maximal and keeps_v_maximal:
        return c * (cu + cv - cu * cv)
    if keeps_v_maximal:
        return (1 - cu) * c * cv
    if keeps_u_maximal:
        return (1 - cv) * c * cu
    return -c * cu * cv


def _clique_masks(g: UGraph) -> list[int]:
    peo = chordal_peo(g.adj, g.alive)
    if peo is None:
        raise NotChordalError("graph is not chordal")
    return cliques_from_peo(g.adj, peo)


def _is_maximal(g: UGraph, clique: int) -> bool:
    common = g.alive & ~clique
    for x in iter_bits(clique):
        common &= g.adj[x]
    return common == 0


def graph_score(g: UGraph, scorer: CliqueScorer) -> int:
    value = scorer.graph(g.adj, g.alive)
    if value is None:
        raise NotChordalError("graph is not chordal")
    return value


# -- triangulation files ------------------------------------------------------

class TriangulationFormatError(ValueError):
    pass


def write_triangulation(t: Triangulation, net: Network) -> str:
    names = net.names()
    pairs = sorted(tuple(sorted((names[u], names[v]))) for u, v in t.fill)
    return "".join([f"tri {net.name}\n"] + [f"fill {a} {b}\n" for a, b in pairs])


def read_triangulation(text: str | bytes, net: Network, base: Optional[UGraph] = None) -> Triangulation:
    """Parse a ``.tri`` file against ``net``; the base defaults to its moral graph."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    base = moral_graph(net) if base is None else base
    ids = {name: i for i, name in enumerate(net.names())}
    header = False
    fill: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if not header:
            if toks[0] != "tri" or len(toks) != 2:
                raise TriangulationFormatError(f"line {lineno}: expected 'tri <network-name>'")
            header = True
            continue
        if toks[0] != "fill" or len(toks) != 3:
            raise TriangulationFormatError(f"line {lineno}: expected 'fill <u> <v>'")
        try:
            u, v = ids[toks[1]], ids[toks[2]]
        except KeyError as exc:
            raise TriangulationFormatError(f"line {lineno}: unknown vertex {exc.args[0]!r}") from None
        if u == v:
            raise TriangulationFormatError(f"line {lineno}: self-loop")
        e = norm_edge(u, v)
        if base.has_edge(*e):
            raise TriangulationFormatError(f"line {lineno}: {toks[1]}-{toks[2]} is already an edge")
        fill.add(e)
    if not header:
        raise TriangulationFormatError("missing 'tri <network-name>' header")
    return Triangulation(base, frozenset(fill))


def edges_by_name(edges: Iterable[Edge], net: Network) -> list[tuple[str, str]]:
    names = net.names()
    return sorted(tuple(sorted((names[u], names[v]))) for u, v in edges)
