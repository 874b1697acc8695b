"""Greedy elimination heuristics and the pool-based triangulation search.

Spec strings select a heuristic, e.g. ``la:weight+fill,topx=2,extra=all,pool=100,seed=7``
or ``mcs,extra=lo``. Keys: ``topx``, ``extra`` (none/all/some/lo/sampled),
``q``, ``pool``, ``seed``, plus ``tie`` (id/random) and ``wmode``
(det/stochastic, which product the weight criterion uses).
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import permutations
from typing import Optional, Sequence

from .ancestral import make_plan, extra_eliminate
from .chordal import UGraph, iter_bits, popcount
from .elimination import Triangulation, is_elimination_graph
from .model import Network, moral_graph
from .statespace import CliqueScorer, graph_state_space

CRITERIA = ("weight", "fill", "size")
EXTRA_MODES = ("none", "all", "some", "lo", "sampled")


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class HeuristicSpec:
    kind: str = "lookahead"
    criteria: tuple[str, ...] = ("weight",)
    top_x: int = 1
    extra_mode: str = "none"
    sampled_q: float = 0.5
    pool: int = 1
    seed: int = 0
    tiebreak: str = "id"
    weight_mode: str = "det"

    def __post_init__(self):
        if self.kind not in ("lookahead", "mcs"):
            raise SpecError(f"unknown heuristic kind {self.kind!r}")
        if self.kind == "lookahead" and not self.criteria:
            raise SpecError("lookahead needs at least one criterion")
        if any(c not in CRITERIA for c in self.criteria):
            raise SpecError(f"criteria must come from {CRITERIA}")
        if self.top_x < 1 or self.pool < 1:
            raise SpecError("topx and pool must be >= 1")
        if self.extra_mode not in EXTRA_MODES:
            raise SpecError(f"extra must be one of {EXTRA_MODES}")
        if not 0.0 <= self.sampled_q <= 1.0:
            raise SpecError("q must lie in [0, 1]")
        if self.tiebreak not in ("id", "random"):
            raise SpecError("tie must be 'id' or 'random'")
        if self.weight_mode not in ("det", "stochastic"):
            raise SpecError("wmode must be 'det' or 'stochastic'")

    def __str__(self) -> str:
        head = "mcs" if self.kind == "mcs" else "la:" + "+".join(self.criteria)
        parts = [head, f"topx={self.top_x}", f"extra={self.extra_mode}"]
        if self.extra_mode == "sampled":
            parts.append(f"q={self.sampled_q:g}")
        parts += [f"pool={self.pool}", f"seed={self.seed}"]
        if self.tiebreak != "id":
            parts.append(f"tie={self.tiebreak}")
        if self.weight_mode != "det":
            parts.append(f"wmode={self.weight_mode}")
        return ",".join(parts)


def parse_spec(text: str) -> HeuristicSpec:
    fields = [f.strip() for f in text.strip().split(",") if f.strip()]
    kw: dict = {}
    if fields and "=" not in fields[0]:
        head = fields.pop(0)
        if head == "mcs":
            kw.update(kind="mcs", criteria=())
        elif head.startswith("la:"):
            kw["criteria"] = tuple(head[3:].split("+"))
        else:
            raise SpecError(f"bad heuristic {head!r}")
    conv = {"topx": ("top_x", int), "extra": ("extra_mode", str), "q": ("sampled_q", float),
            "pool": ("pool", int), "seed": ("seed", int), "tie": ("tiebreak", str),
            "wmode": ("weight_mode", str)}
    for f in fields:
        key, sep, val = f.partition("=")
        if not sep or key not in conv:
            raise SpecError(f"bad spec field {f!r}")
        name, typ = conv[key]
        try:
            kw[name] = typ(val)
        except ValueError:
            raise SpecError(f"bad value in {f!r}") from None
    return HeuristicSpec(**kw)


def default_catalog(extra_mode: str = "none", pool: int = 1, seed: int = 0) -> list[HeuristicSpec]:
    """Lookahead chains of length <= 2, each with top-x 1..3, random-tie singletons and MCS."""
    chains = [(c,) for c in CRITERIA] + list(permutations(CRITERIA, 2))
    base = HeuristicSpec(extra_mode=extra_mode, pool=pool, seed=seed)
    out = [replace(base, criteria=ch, top_x=x) for ch in chains for x in (1, 2, 3)]
    out += [replace(base, criteria=(c,), top_x=x, tiebreak="random") for c in CRITERIA for x in (1, 2, 3)]
    out += [replace(base, kind="mcs", criteria=(), top_x=x) for x in (1, 2, 3)]
    return out


def _vertex_key(v: int, adj: Sequence[int], alive: int, criteria, scorer: CliqueScorer) -> tuple:
    nb = adj[v] & alive
    key = []
    for c in criteria:
        if c == "weight":
            key.append(scorer(nb | 1 << v))
        elif c == "fill":
            key.append(sum(popcount(nb & ~adj[u] & ~(1 << u)) for u in iter_bits(nb)) // 2)
        else:
            key.append(popcount(nb))
    return tuple(key)


def next_vertex(g: UGraph, net: Network, spec: HeuristicSpec, rng: random.Random,
                numbered: int = 0, scorer: Optional[CliqueScorer] = None) -> int:
    """Choose the next vertex for ``spec``.

    Lookahead: rank alive vertices by the criteria chain and pick uniformly
    among the best ``top_x``. MCS: rank the alive, not yet ``numbered``
    vertices by how many numbered neighbours they have (most first).
    """
    if spec.kind == "mcs":
        cand = g.alive & ~numbered
        if not cand:
            raise ValueError("no vertex left to choose")
        ranked = sorted(iter_bits(cand), key=lambda v: (-popcount(g.adj[v] & numbered), v))
    else:
        if not g.alive:
            raise ValueError("empty graph")
        if scorer is None:
            scorer = CliqueScorer(net, deterministic=spec.weight_mode == "det")
        keys = {v: _vertex_key(v, g.adj, g.alive, spec.criteria, scorer) for v in iter_bits(g.alive)}
        if spec.tiebreak == "random":
            tie = {v: rng.random() for v in keys}
            ranked = sorted(keys, key=lambda v: (keys[v], tie[v]))
        else:
            ranked = sorted(keys, key=lambda v: (keys[v], v))
    top = ranked[:spec.top_x]
    return top[0] if len(top) == 1 else rng.choice(top)


def heuristic_order(g: UGraph, net: Network, spec: HeuristicSpec, rng: random.Random) -> list[int]:
    if spec.kind == "mcs":
        visit, numbered = [], 0
        while numbered != g.alive:
            v = next_vertex(g, net, spec, rng, numbered)
            visit.append(v)
            numbered |= 1 << v
        return visit[::-1]
    scorer = CliqueScorer(net, deterministic=spec.weight_mode == "det")
    adj = list(g.adj)
    alive = g.alive
    order = []
    while alive:
        cur = UGraph(g.n, tuple(adj), alive)
        v = next_vertex(cur, net, spec, rng, scorer=scorer)
        order.append(v)
        nb = adj[v] & alive
        for u in iter_bits(nb):
            adj[u] = (adj[u] | nb) & ~(1 << u)
        alive &= ~(1 << v)
    return order


def run_heuristic(net: Network, spec: HeuristicSpec, seed: Optional[int] = None,
                  moral: Optional[UGraph] = None) -> Triangulation:
    seed = spec.seed if seed is None else seed
    rng = random.Random(seed)
    g = moral_graph(net) if moral is None else moral
    plan = make_plan(g, net, spec.extra_mode, q=spec.sampled_q, seed=rng.getrandbits(63))
    augmented = g.with_edges(plan.chosen_edges)
    order = heuristic_order(augmented, net, spec, rng)
    return extra_eliminate(g, net, plan, order)


@dataclass(frozen=True)
class Candidate:
    index: int
    seed: int
    score: int
    is_elimination: bool
    spec: HeuristicSpec = field(repr=False)


@dataclass(frozen=True)
class SearchResult:
    best: Triangulation
    best_score: int
    per_candidate: tuple[Candidate, ...]

    @property
    def best_index(self) -> int:
        return min(self.per_candidate, key=lambda c: (c.score, c.index)).index


def _candidate(args):
    net, spec, index = args
    seed = spec.seed ^ index
    t = run_heuristic(net, spec, seed)
    return index, seed, t, graph_state_space(t, net), is_elimination_graph(t)[0]


def run_pool(net: Network, spec: HeuristicSpec, jobs: int = 1) -> SearchResult:
    """Run ``spec.pool`` candidates (seed XOR index) and keep the lowest state space."""
    work = [(net, spec, i) for i in range(spec.pool)]
    if jobs > 1 and spec.pool > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_candidate, work))
    else:
        rows = [_candidate(w) for w in work]
    rows.sort(key=lambda r: r[0])
    best = min(rows, key=lambda r: (r[3], r[0]))
    cands = tuple(Candidate(i, s, score, elim, spec) for i, s, _, score, elim in rows)
    return SearchResult(best[2], best[3], cands)
