"""Exhaustive ground truth for small networks."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Optional

from .chordal import Edge, UGraph, chordal_peo, cliques_from_peo, norm_edge
from .elimination import _eliminate
from .model import Network, moral_graph
from .statespace import CliqueScorer

DEFAULT_MAX_VERTICES = 9
DEFAULT_MAX_FILL_PAIRS = 22


class OracleBoundError(ValueError):
    pass


def best_over_orders(net: Network, max_vertices: int = DEFAULT_MAX_VERTICES,
                     observed_as_unit: bool = False) -> tuple[int, tuple[int, ...]]:
    """Minimum elimination-graph state space over all orders (lexicographically first witness)."""
    if net.n > max_vertices:
        raise OracleBoundError(f"{net.n} vertices exceeds the order-enumeration bound {max_vertices}")
    g = moral_graph(net)
    score = CliqueScorer(net, observed_as_unit)
    best, witness = None, ()
    for order in permutations(range(net.n)):
        adj = list(g.adj)
        for u, v in _eliminate(g.adj, order):
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        s = sum(score(c) for c in cliques_from_peo(adj, order))
        if best is None or s < best:
            best, witness = s, order
    return (0 if best is None else best), witness


def _check_pairs(g: UGraph, max_fill_pairs: int) -> list[Edge]:
    pairs = g.non_edges()
    if len(pairs) > max_fill_pairs:
        raise OracleBoundError(f"{len(pairs)} non-adjacent pairs exceeds the bound {max_fill_pairs}")
    return pairs


def triangulation_table(net: Network, max_fill_pairs: int = DEFAULT_MAX_FILL_PAIRS,
                        observed_as_unit: bool = False) -> tuple[list[Edge], dict[int, int]]:
    """Every chordal supergraph of the moral graph.

    Returns the non-adjacent pairs and a map from fill bitmask (bit i = pair i)
    to state space.
    """
    g = moral_graph(net)
    pairs = _check_pairs(g, max_fill_pairs)
    score = CliqueScorer(net, observed_as_unit)
    table = {}
    for mask in range(1 << len(pairs)):
        adj = list(g.adj)
        m, i = mask, 0
        while m:
            if m & 1:
                u, v = pairs[i]
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            m >>= 1
            i += 1
        s = score.graph(adj, g.alive)
        if s is not None:
            table[mask] = s
    return pairs, table


def best_over_triangulations(net: Network, max_fill_pairs: int = DEFAULT_MAX_FILL_PAIRS,
                             observed_as_unit: bool = False) -> tuple[int, frozenset[Edge]]:
    """Minimum state space over all chordal supergraphs of the moral graph.

    Ties go to the fill set with the fewest edges, then the lexicographically
    smallest sorted edge list.
    """
    g = moral_graph(net)
    pairs = _check_pairs(g, max_fill_pairs)
    score = CliqueScorer(net, observed_as_unit)
    best, witness = None, ()
    for k in range(len(pairs) + 1):
        for combo in combinations(pairs, k):
            adj = list(g.adj)
            for u, v in combo:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            s = score.graph(adj, g.alive)
            if s is not None and (best is None or s < best):
                best, witness = s, combo
    return best, frozenset(witness)


def maxstatspace_decide(net: Network, alpha: int, max_fill_pairs: int = DEFAULT_MAX_FILL_PAIRS) -> bool:
    """Does some triangulation have state space strictly below ``alpha``?"""
    return best_over_triangulations(net, max_fill_pairs)[0] < alpha


def verify_certificate(net: Network, fill: Iterable[Edge], alpha: int) -> bool:
    """Accept iff moral graph plus ``fill`` is chordal with state space below ``alpha``."""
    g = moral_graph(net)
    fill = [norm_edge(u, v) for u, v in fill]
    for e in fill:
        if g.has_edge(*e):
            raise ValueError(f"fill edge {e} is already a moral edge")
    h = g.with_edges(fill)
    if chordal_peo(h.adj, h.alive) is None:
        return False
    return CliqueScorer(net).graph(h.adj, h.alive) < alpha


@dataclass(frozen=True)
class OracleReport:
    best_elim_score: int
    best_elim_order: tuple[int, ...]
    best_tri_score: int
    best_tri_fill: frozenset[Edge]

    @property
    def gap(self) -> bool:
        return self.best_tri_score < self.best_elim_score

    def tsv(self, net: Network) -> str:
        names = net.names()
        order = ",".join(names[v] for v in self.best_elim_order)
        fill = ",".join("-".join(sorted((names[u], names[v]))) for u, v in sorted(self.best_tri_fill))
        head = "best_elim_score\tbest_elim_order\tbest_tri_score\tbest_tri_fill\tgap"
        row = f"{self.best_elim_score}\t{order}\t{self.best_tri_score}\t{fill}\t{str(self.gap).lower()}"
        return head + "\n" + row + "\n"


def oracle_report(net: Network, max_vertices: int = DEFAULT_MAX_VERTICES,
                  max_fill_pairs: int = DEFAULT_MAX_FILL_PAIRS,
                  observed_as_unit: bool = False) -> OracleReport:
    e_score, e_order = best_over_orders(net, max_vertices, observed_as_unit)
    t_score, t_fill = best_over_triangulations(net, max_fill_pairs, observed_as_unit)
    return OracleReport(e_score, e_order, t_score, t_fill)
