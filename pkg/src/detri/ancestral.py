"""Ancestral pairs and the extra-edge heuristics built on them.

An ancestral edge joins a parent of a deterministic vertex ``d`` to a
non-parent neighbour of ``d``. Edges are handled in groups: one group per
(``d``, neighbour) wires the neighbour to every parent of ``d`` it is not
yet adjacent to, since ``d`` only drops out of a clique once all of its
parents are present.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .chordal import Edge, UGraph, iter_bits, norm_edge
from .elimination import Triangulation, _eliminate, check_order
from .model import Network
from .statespace import CliqueScorer

CHILD = "child"
UNDIRECTED = "undirected"
MODES = ("all", "some", "lo", "sampled")


@dataclass(frozen=True)
class AncestralGroup:
    det: int
    endpoint: int
    edges: frozenset[Edge]
    cause: str


@dataclass(frozen=True)
class AncestralPlan:
    groups: tuple[AncestralGroup, ...] = ()
    chosen_edges: frozenset[Edge] = field(default_factory=frozenset)

    @classmethod
    def from_groups(cls, groups: Iterable[AncestralGroup]) -> "AncestralPlan":
        groups = tuple(groups)
        chosen = frozenset(e for g in groups for e in g.edges)
        return cls(groups, chosen)


def is_ancestral_pair(g: UGraph, net: Network, u: int, v: int) -> bool:
    """True when an edge u-v would be ancestral given the adjacency of ``g``."""
    for p, c in ((u, v), (v, u)):
        for d in net.children(p):
            vd = net.vertices[d]
            if vd.deterministic and c != d and c not in vd.parents and g.has_edge(d, c):
                return True
    return False


def _child_sets(net: Network) -> list[int]:
    kids = [0] * net.n
    for v in net.vertices:
        for p in v.parents:
            kids[p] |= 1 << v.id
    return kids


def ancestral_groups(g: UGraph, net: Network) -> list[AncestralGroup]:
    kids = _child_sets(net)
    out = []
    for d in net.deterministic_ids():
        pa = net.parent_mask(d)
        for c in iter_bits(g.adj[d] & ~pa):
            missing = pa & ~g.adj[c]
            if not missing:
                continue
            edges = frozenset(norm_edge(p, c) for p in iter_bits(missing))
            out.append(AncestralGroup(d, c, edges, CHILD if kids[d] >> c & 1 else UNDIRECTED))
    return out


def _closure(g: UGraph, net: Network, select: Callable[[AncestralGroup, set[Edge]], bool]) -> AncestralPlan:
    """Add selected groups round by round until no selected group has missing edges.

    ``select`` sees each (det, endpoint) group once per round; rounds process
    groups in ascending (det, endpoint) order.
    """
    current = g
    added: set[Edge] = set()
    chosen: list[AncestralGroup] = []
    while True:
        progress = False
        for grp in ancestral_groups(current, net):
            missing = frozenset(e for e in grp.edges if not current.has_edge(*e))
            if not missing or not select(grp, added):
                continue
            grp = AncestralGroup(grp.det, grp.endpoint, missing, grp.cause)
            chosen.append(grp)
            added.update(missing)
            current = current.with_edges(missing)
            progress = True
        if not progress:
            return AncestralPlan.from_groups(chosen)


def pretriangulation_closure(g: UGraph, net: Network, mode: str = "all") -> AncestralPlan:
    if mode == "all":
        return _closure(g, net, lambda grp, added: True)
    if mode == "some":
        # skip neighbours that d only has through pre-existing undirected edges
        def select(grp, added):
            return grp.cause == CHILD or norm_edge(grp.det, grp.endpoint) in added
        return _closure(g, net, select)
    raise ValueError(f"closure mode must be 'all' or 'some', not {mode!r}")


def lo_extra(g: UGraph, net: Network, observed_as_unit: bool = False) -> AncestralPlan:
    score = CliqueScorer(net, observed_as_unit)

    def select(grp, added):
        d, c = grp.det, grp.endpoint
        pa = net.parent_mask(d)
        merged = score(pa | 1 << d | 1 << c)
        return merged < score(1 << d | 1 << c) + score(pa | 1 << d)

    return _closure(g, net, select)


def sampled_extra(g: UGraph, net: Network, rng_seed: int, q: float = 0.5) -> AncestralPlan:
    """Closure where each newly seen (det, endpoint) group is kept with probability ``q``."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    rng = random.Random(rng_seed)
    decided: dict[tuple[int, int], bool] = {}

    def select(grp, added):
        key = (grp.det, grp.endpoint)
        if key not in decided:
            decided[key] = rng.random() < q
        return decided[key]

    return _closure(g, net, select)


def make_plan(g: UGraph, net: Network, mode: str, *, q: float = 0.5, seed: int = 0,
              observed_as_unit: bool = False) -> AncestralPlan:
    if mode == "none":
        return AncestralPlan()
    if mode in ("all", "some"):
        return pretriangulation_closure(g, net, mode)
    if mode == "lo":
        return lo_extra(g, net, observed_as_unit)
    if mode == "sampled":
        return sampled_extra(g, net, seed, q)
    raise ValueError(f"unknown extra mode {mode!r}")


def extra_eliminate(g: UGraph, net: Network, plan: AncestralPlan, order: Sequence[int]) -> Triangulation:
    """Add the plan's edges up front, then eliminate along ``order``."""
    for u, v in plan.chosen_edges:
        if not (g.is_alive(u) and g.is_alive(v)):
            raise ValueError(f"plan edge {u}-{v} leaves the graph")
    order = check_order(g, order)
    extra = frozenset(e for e in plan.chosen_edges if not g.has_edge(*e))
    augmented = g.with_edges(extra)
    return Triangulation(g, extra | frozenset(_eliminate(augmented.adj, order)))


def plan_lines(plan: AncestralPlan, net: Network, mode: str) -> list[str]:
    names = net.names()
    lines = []
    for grp in plan.groups:
        for u, v in sorted(grp.edges):
            a, b = sorted((names[u], names[v]))
            lines.append(f"extra {a} {b} {mode} {names[grp.det]} {grp.cause}")
    return lines


def ancestral_fill(t: Triangulation, net: Network, graph: Optional[UGraph] = None) -> frozenset[Edge]:
    """Fill edges of ``t`` that are ancestral with respect to ``graph`` (default: ``t.total``)."""
    h = t.total if graph is None else graph
    return frozenset(e for e in t.fill if is_ancestral_pair(h, net, *e))
