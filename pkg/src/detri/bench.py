"""Random network generation and the heuristic comparison harness."""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .model import Network, Vertex, moral_graph
from .search import HeuristicSpec, run_pool
from .elimination import is_elimination_graph

FIX_A = """\
net fixA
var a 3 -
var b 3 -
var d 8 det | a b
var c 3 - | d a
var e 3 - | d b
"""

FIX_B = """\
net fixB
var a 10 -
var b 10 -
var d 40 det | a b
var c 10 - | d
var e 10 - | d
"""

BUCKETS = ("best", "<x2", "x2-x4", "x4-x8", "x8-x16", ">=x16")

GENERATOR_NOTE = ("parent sets drawn uniformly per node over a random topological order "
                  "(approximates uniform sampling of bounded in-degree DAGs)")


def fix_a(eta: int = 3) -> Network:
    """The five-vertex separation network with stochastic cardinality ``eta``."""
    from .model import parse_network
    if eta == 3:
        return parse_network(FIX_A)
    return Network.build("fixA", [("a", eta, "-", ()), ("b", eta, "-", ()),
                                  ("d", eta * eta - 1, "det", ("a", "b")),
                                  ("c", eta, "-", ("d", "a")), ("e", eta, "-", ("d", "b"))])


def fix_b() -> Network:
    from .model import parse_network
    return parse_network(FIX_B)


@dataclass(frozen=True)
class GenParams:
    nodes: int = 30
    max_in_degree: int = 4
    p_det: float = 0.5
    p_obs: float = 0.1
    stoch_card_range: tuple[int, int] = (2, 5)
    obs_card: int = 50
    det_card_cap: int = 125
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.stoch_card_range
        if not (0 <= self.p_det <= 1 and 0 <= self.p_obs <= 1):
            raise ValueError("probabilities must lie in [0, 1]")
        if lo < 1 or hi < lo:
            raise ValueError("bad stochastic cardinality range")
        if self.det_card_cap < 2 or self.max_in_degree < 0 or self.obs_card < 1:
            raise ValueError("bad generator parameters")


def gen_random_network(p: GenParams) -> Network:
    """Seeded random DAG following the benchmark protocol.

    Parentless deterministic draws become stochastic. Deterministic nodes
    take a cardinality in [2, min(product of parent cardinalities, cap)];
    observed stochastic nodes take ``obs_card``.
    """
    if p.nodes <= 0:
        raise ValueError("nodes must be positive")
    rng = random.Random(p.seed)
    labels = list(range(p.nodes))
    rng.shuffle(labels)
    verts: list[Vertex] = []
    for i in range(p.nodes):
        kmax = min(i, p.max_in_degree)
        weights = [math.comb(i, k) for k in range(kmax + 1)]
        k = rng.choices(range(kmax + 1), weights=weights)[0]
        parents = tuple(sorted(rng.sample(range(i), k)))
        det = rng.random() < p.p_det and bool(parents)
        obs = rng.random() < p.p_obs
        if det:
            prod = math.prod(verts[q].cardinality for q in parents)
            card = rng.randint(2, max(2, min(prod, p.det_card_cap)))
        elif obs:
            card = p.obs_card
        else:
            card = rng.randint(*p.stoch_card_range)
        verts.append(Vertex(i, f"v{labels[i]}", card, det, obs, parents))
    return Network(tuple(verts), f"rand{p.seed}")


def graph_seed(master: int, index: int) -> int:
    return (master * 1_000_003 + index) & ((1 << 63) - 1)


def bucket_of(score: int, best: int) -> int:
    """Index into BUCKETS[1:] for a non-winning score."""
    r = score / best if best else 1.0
    if r < 2:
        return 1
    if r < 4:
        return 2
    if r < 8:
        return 3
    if r < 16:
        return 4
    return 5


@dataclass
class GraphRow:
    graph: int
    seed: int
    n_det: int
    scores: list[int]
    winner: int
    winner_is_elimination: bool


@dataclass
class BenchReport:
    methods: list[HeuristicSpec]
    rows: list[GraphRow] = field(default_factory=list)
    params: Optional[GenParams] = None

    def buckets(self) -> list[list[int]]:
        out = [[0] * len(BUCKETS) for _ in self.methods]
        for row in self.rows:
            best = row.scores[row.winner]
            for m, s in enumerate(row.scores):
                out[m][0 if m == row.winner else bucket_of(s, best)] += 1
        return out

    def ties(self) -> list[int]:
        """Graphs where a method matched the best score but lost on method index."""
        out = [0] * len(self.methods)
        for row in self.rows:
            best = row.scores[row.winner]
            for m, s in enumerate(row.scores):
                if s == best and m != row.winner:
                    out[m] += 1
        return out

    def win_or_tie(self) -> list[int]:
        b, t = self.buckets(), self.ties()
        return [b[m][0] + t[m] for m in range(len(self.methods))]

    def table2(self) -> dict[int, list[float]]:
        """Per deterministic-node count: % of graphs where each method was best or < 2x best."""
        groups: dict[int, list[GraphRow]] = {}
        for row in self.rows:
            groups.setdefault(row.n_det, []).append(row)
        out = {}
        for k in sorted(groups):
            rows = groups[k]
            out[k] = [100.0 * sum(r.scores[m] < 2 * r.scores[r.winner] for r in rows) / len(rows)
                      for m in range(len(self.methods))]
        return out

    def elimination_counts(self) -> tuple[int, int]:
        """(graphs whose winner is an elimination graph, graphs whose winner is not)."""
        yes = sum(r.winner_is_elimination for r in self.rows)
        return yes, len(self.rows) - yes

    def to_tsv(self, table2: bool = False) -> str:
        lines = [f"# cost: determinism-aware state space; generator: {GENERATOR_NOTE}"]
        if self.params is not None:
            p = self.params
            lines.append(f"# nodes={p.nodes} max_in_degree={p.max_in_degree} p_det={p.p_det} "
                         f"p_obs={p.p_obs} seed={p.seed}")
        for m, spec in enumerate(self.methods):
            lines.append(f"# method{m}: {spec}")
        names = [f"method{m}" for m in range(len(self.methods))]
        lines.append("\t".join(["graph", "seed", "n_det"] + names + ["winner", "winner_is_elimination"]))
        for r in self.rows:
            lines.append("\t".join([str(r.graph), str(r.seed), str(r.n_det)] + [str(s) for s in r.scores]
                                   + [names[r.winner], str(r.winner_is_elimination).lower()]))
        lines.append("")
        lines.append("\t".join(["method", *BUCKETS, "ties"]))
        for m, (b, t) in enumerate(zip(self.buckets(), self.ties())):
            lines.append("\t".join([names[m]] + [str(x) for x in b] + [str(t)]))
        if table2:
            lines.append("")
            lines.append("\t".join(["n_det", *names]))
            for k, pct in self.table2().items():
                lines.append("\t".join([str(k)] + [f"{x:.1f}" for x in pct]))
        return "\n".join(lines) + "\n"


def _bench_graph(args):
    params, index, methods = args
    seed = graph_seed(params.seed, index)
    net = gen_random_network(GenParams(**{**params.__dict__, "seed": seed}))
    results = [run_pool(net, spec) for spec in methods]
    scores = [r.best_score for r in results]
    winner = min(range(len(scores)), key=lambda m: (scores[m], m))
    elim = is_elimination_graph(results[winner].best)[0]
    return GraphRow(index, seed, len(net.deterministic_ids()), scores, winner, elim)


def run_benchmark(p: GenParams, n_graphs: int, methods: Sequence[HeuristicSpec], jobs: int = 1) -> BenchReport:
    if not methods:
        raise ValueError("at least one method is required")
    work = [(p, i, list(methods)) for i in range(n_graphs)]
    if jobs > 1 and n_graphs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_bench_graph, work))
    else:
        rows = [_bench_graph(w) for w in work]
    return BenchReport(list(methods), rows, p)
