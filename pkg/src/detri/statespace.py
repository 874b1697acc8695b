"""Determinism-aware clique and graph state space.

A deterministic vertex costs nothing inside a clique that also holds all of
its parents; everywhere else it is iterated like a stochastic vertex.
Values are exact Python integers.
"""

from __future__ import annotations

from typing import Iterable, Union

from .chordal import NotChordalError, UGraph, chordal_peo, cliques_from_peo, iter_bits, mask_of
from .model import Network

StateSpace = int


class CliqueScorer:
    """Scores clique bitmasks for one network.

    ``deterministic=False`` gives the plain product over all members.
    """

    def __init__(self, net: Network, observed_as_unit: bool = False, deterministic: bool = True):
        self.net = net
        self.card = [1 if (observed_as_unit and v.observed) else v.cardinality for v in net.vertices]
        # (vertex, parent mask) for every vertex that can drop out of a product
        self.det = [(v.id, net.parent_mask(v.id)) for v in net.vertices if v.deterministic] if deterministic else []
        self._cache: dict[int, int] = {}

    def excluded(self, mask: int) -> int:
        out = 0
        for d, pm in self.det:
            if mask >> d & 1 and pm & mask == pm:
                out |= 1 << d
        return out

    def __call__(self, mask: int) -> int:
        hit = self._cache.get(mask)
        if hit is not None:
            return hit
        keep = mask & ~self.excluded(mask)
        s = 1
        for v in iter_bits(keep):
            s *= self.card[v]
        self._cache[mask] = s
        return s

    def graph(self, adj, alive: int) -> int | None:
        """Sum over maximal cliques, or None when the graph is not chordal."""
        peo = chordal_peo(adj, alive)
        if peo is None:
            return None
        return sum(self(c) for c in cliques_from_peo(adj, peo))


def clique_state_space(clique: Iterable[int], net: Network, observed_as_unit: bool = False) -> StateSpace:
    return CliqueScorer(net, observed_as_unit)(mask_of(clique))


def graph_state_space(t: Union["Triangulation", UGraph], net: Network,  # noqa: F821
                      observed_as_unit: bool = False) -> StateSpace:
    g = t if isinstance(t, UGraph) else t.total
    value = CliqueScorer(net, observed_as_unit).graph(g.adj, g.alive)
    if value is None:
        raise NotChordalError("state space is defined for chordal graphs only")
    return value
