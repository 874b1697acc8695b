"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Lines are collected in ``conftest.ACCEPTANCE_LINES`` and shown in the
terminal summary, so ``pytest tests/test_acceptance.py`` ends with the list.
"""

import random
import time
from fractions import Fraction

import conftest
from detri.ancestral import ancestral_fill, is_ancestral_pair, pretriangulation_closure
from detri.bench import FIX_A, FIX_B, GenParams, fix_a, fix_b, gen_random_network, run_benchmark
from detri.chordal import UGraph
from detri.elimination import (Triangulation, delta_state_space_on_removal, elimination_graph,
                               fill_path_predicate, is_elimination_graph, minimalize, non_minimal_edges)
from detri.model import Network, moral_graph, parse_network, serialize_network
from detri.oracle import best_over_orders, best_over_triangulations, triangulation_table
from detri.search import parse_spec, run_pool
from detri.statespace import graph_state_space

import brute
from conftest import named_edges, random_graph, random_net, random_order


def record(k, ok, what, start, limit=None):
    elapsed = time.perf_counter() - start
    ok = ok and (limit is None or elapsed < limit)
    budget = f" (limit {limit:g}s)" if limit is not None else ""
    conftest.ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {k:>2}: {what}; "
                                     f"{elapsed:.2f}s{budget}")
    return ok


def test_criterion_01_fixture_values():
    start = time.perf_counter()
    net = fix_a()
    g = moral_graph(net)
    eta = 3
    cases = [((), 2 * eta**4 - eta**2), ((("b", "c"),), eta**4 + eta**3 - eta**2),
             ((("b", "c"), ("c", "e"), ("a", "e")), eta**4), ((("b", "c"), ("a", "e")), 2 * eta**3)]
    got = [graph_state_space(Triangulation(g, named_edges(net, *fill)), net) for fill, _ in cases]
    want = [w for _, w in cases]
    ok = got == want == [153, 99, 81, 54]
    assert record(1, ok, f"separation network values {got} == {want}", start, 1.0)


def test_criterion_02_separation():
    start = time.perf_counter()
    net = fix_a()
    orders, _ = best_over_orders(net)
    tri, fill = best_over_triangulations(net)
    elim, _ = is_elimination_graph(Triangulation(moral_graph(net), fill))
    ratios = {}
    for eta in (3, 4, 5):
        n = fix_a(eta)
        ratios[eta] = Fraction(best_over_orders(n)[0], best_over_triangulations(n)[0])
    ok = orders == 81 and tri == 54 and not elim and all(ratios[e] == Fraction(e, 2) for e in ratios)
    shown = {e: float(r) for e, r in ratios.items()}
    assert record(2, ok, f"orders {orders}, triangulations {tri}, optimum is elimination graph: {elim}, "
                         f"ratios {shown}", start, 10.0)


def test_criterion_03_second_fixture():
    start = time.perf_counter()
    net = fix_b()
    g = moral_graph(net)
    none = graph_state_space(g, net)
    every = graph_state_space(g.with_edges(pretriangulation_closure(g, net, "all").chosen_edges), net)
    lo = run_pool(net, parse_spec("la:weight,extra=lo"))
    ok = (none, every, lo.best_score) == (900, 2000, 900) and not lo.best.fill
    assert record(3, ok, f"no fill {none}, all-extra {every}, lo-extra {lo.best_score}", start, 1.0)


def test_criterion_04_elimination_detection():
    start = time.perf_counter()
    rng = random.Random(404)
    bad = 0
    for _ in range(500):
        g = random_graph(rng, rng.randint(1, 10), rng.uniform(0.1, 0.7))
        t = elimination_graph(g, random_order(rng, g))
        ok, witness = is_elimination_graph(t)
        if not ok or elimination_graph(g, witness).fill != t.fill:
            bad += 1
    bad_min = 0
    for _ in range(200):
        g = random_graph(rng, rng.randint(2, 10), rng.uniform(0.1, 0.6))
        extra = [e for e in g.non_edges() if rng.random() < 0.3]
        h = elimination_graph(g.with_edges(extra), random_order(rng, g)).total
        t = Triangulation(g, h.edges() - g.edges())
        m = minimalize(t)
        ok, witness = is_elimination_graph(m)
        if not (ok and m.fill <= t.fill and not non_minimal_edges(m)
                and elimination_graph(g, witness).fill == m.fill):
            bad_min += 1
    assert record(4, bad == bad_min == 0, f"elimination graphs misdetected {bad}/500, "
                                          f"minimalized supergraphs misdetected {bad_min}/200", start, 120.0)


def test_criterion_05_fill_path():
    start = time.perf_counter()
    rng = random.Random(505)
    pairs = mismatches = 0
    for _ in range(500):
        g = random_graph(rng, rng.randint(2, 10), rng.uniform(0.1, 0.7))
        order = random_order(rng, g)
        fill = brute.eliminate(g.n, g.edges(), order)
        for u, v in g.non_edges():
            pairs += 1
            if fill_path_predicate(g, order, u, v) != ((u, v) in fill):
                mismatches += 1
    assert record(5, mismatches == 0, f"{mismatches} disagreements over {pairs} pairs", start, 120.0)


def test_criterion_06_stochastic_orders_suffice():
    start = time.perf_counter()
    rng = random.Random(606)
    unequal = []
    for _ in range(200):
        net = random_net(rng.randrange(10**9), 2, 6, p_det=0.0, cards=(2, 4))
        a, b = best_over_orders(net)[0], best_over_triangulations(net)[0]
        if a != b:
            unequal.append((net.name, a, b))
    assert record(6, not unequal, f"orders vs triangulations unequal on {len(unequal)}/200 "
                                  f"all-stochastic networks", start, 600.0)


def test_criterion_07_improving_edges_are_ancestral():
    start = time.perf_counter()
    rng = random.Random(707)
    improving = violations = 0
    bad_nets = set()
    for _ in range(200):
        net = random_net(rng.randrange(10**9), 2, 6)
        g = moral_graph(net)
        pairs, table = triangulation_table(net)
        for mask, score in table.items():
            for i, (u, v) in enumerate(pairs):
                bigger = mask | 1 << i
                if bigger == mask or table.get(bigger, score) >= score:
                    continue
                improving += 1
                adj = list(g.adj)
                for j, (a, b) in enumerate(pairs):
                    if bigger >> j & 1:
                        adj[a] |= 1 << b
                        adj[b] |= 1 << a
                if not is_ancestral_pair(UGraph(net.n, tuple(adj), g.alive), net, u, v):
                    violations += 1
                    bad_nets.add(net.name)
    assert record(7, violations == 0, f"{violations}/{improving} improving single-edge additions are not "
                                      f"ancestral, on {len(bad_nets)}/200 networks", start, 600.0)


def test_criterion_08_optimum_decomposes():
    start = time.perf_counter()
    rng = random.Random(808)
    bad = []
    for _ in range(100):
        net = random_net(rng.randrange(10**9), 2, 6)
        g = moral_graph(net)
        _, fill = best_over_triangulations(net)
        best = Triangulation(g, fill)
        anc = ancestral_fill(best, net)
        rest = Triangulation(g.with_edges(anc), fill - anc)
        if non_minimal_edges(rest):
            bad.append(net.name)
    assert record(8, not bad, f"non-ancestral optimal fill is not minimal over the ancestral-augmented base "
                              f"on {len(bad)}/100 networks", start, 600.0)


def _removal_instance(rng, absorb_u, absorb_v):
    """Chordal graph with one removable fill edge u-v inside a single maximal clique.

    Optional vertices a (joined to C - {v}) and b (joined to C - {u}) make the
    corresponding side clique non-maximal once u-v is gone. Extra simplicial
    vertices hang off random cliques that do not hold both u and v.
    """
    k = rng.randint(1, 3)
    u, v = 0, 1
    rest = list(range(2, 2 + k))
    edges = {(x, y) for x in [u, v] + rest for y in [u, v] + rest if x < y} - {(u, v)}
    n = 2 + k
    for flag, side in ((absorb_u, u), (absorb_v, v)):
        if flag:
            edges |= {(x, n) for x in rest + [side]}
            n += 1
    for _ in range(rng.randint(0, 3)):
        cur = UGraph.from_edges(n, edges | {(u, v)})
        seed = rng.randrange(n)
        group = [seed] + [x for x in cur.neighbors(seed) if rng.random() < 0.5]
        group = [x for x in group if all(cur.has_edge(x, y) for y in group if y != x)]
        if u in group and v in group:
            group.remove(rng.choice([u, v]))
        edges |= {(x, n) for x in group}
        n += 1
    net = Network.build("iso", [(f"x{i}", rng.randint(2, 5), "-", ()) for i in range(n)])
    return net, Triangulation(UGraph.from_edges(n, edges), [(u, v)])


def _side_cliques_maximal(net, t):
    """(C - {v} maximal, C - {u} maximal) after deleting u-v, from brute-force cliques."""
    after = brute.maximal_cliques(brute.adjacency(net.n, t.base.edges()))
    c = next(x for x in brute.maximal_cliques(brute.adjacency(net.n, t.total.edges())) if {0, 1} <= x)
    return c - {1} in after, c - {0} in after


def test_criterion_09_removal_delta():
    start = time.perf_counter()
    rng = random.Random(909)
    wrong = 0
    cases = {}
    for absorb_u in (False, True):
        for absorb_v in (False, True):
            want = (not absorb_u, not absorb_v)
            while cases.get(want, 0) < 25:
                net, t = _removal_instance(rng, absorb_u, absorb_v)
                # attachments can absorb a side clique too; keep the intended case only
                if _side_cliques_maximal(net, t) != want:
                    continue
                cases[want] = cases.get(want, 0) + 1
                before = brute.graph_value(net, brute.adjacency(net.n, t.total.edges()))
                after = brute.graph_value(net, brute.adjacency(net.n, t.base.edges()))
                if delta_state_space_on_removal(t, (0, 1), net) != after - before:
                    wrong += 1
    ok = wrong == 0 and len(cases) == 4 and sum(cases.values()) == 100
    assert record(9, ok, f"{wrong}/100 wrong deltas; instances per (u side maximal, v side maximal) "
                         f"{dict(sorted(cases.items()))}", start, 10.0)


def test_criterion_10_benchmark_trend():
    start = time.perf_counter()
    methods = [parse_spec("la:weight,topx=2,extra=none,pool=50,seed=1"),
               parse_spec("la:weight,topx=2,extra=all,pool=50,seed=1")]
    rep = run_benchmark(GenParams(nodes=15, p_det=0.5, seed=2024), 100, methods, jobs=4)
    none, every = rep.win_or_tie()
    assert record(10, every >= none, f"win-or-tie: extra=all {every}/100, extra=none {none}/100", start, 900.0)


def test_criterion_11_round_trip_and_jobs():
    start = time.perf_counter()
    texts = [FIX_A, FIX_B, serialize_network(fix_a(4)), serialize_network(fix_a(5))]
    nets = [parse_network(t) for t in texts]
    nets += [gen_random_network(GenParams(nodes=1 + i % 30, seed=1000 + i)) for i in range(100)]
    round_trip = all(parse_network(serialize_network(n)) == n for n in nets)
    fixed = all(serialize_network(parse_network(t)) == t for t in texts[:2])
    methods = [parse_spec("la:fill,topx=3,extra=sampled,pool=6,seed=8"), parse_spec("mcs,topx=2,pool=6,seed=8")]
    p = GenParams(nodes=12, seed=77)
    reports = {jobs: run_benchmark(p, 8, methods, jobs=jobs).to_tsv(table2=True) for jobs in (1, 2, 4)}
    spec = parse_spec("la:weight+fill,topx=3,extra=some,pool=12,seed=3")
    pools = {jobs: run_pool(nets[-1], spec, jobs=jobs) for jobs in (1, 3)}
    same = len(set(reports.values())) == 1 and pools[1] == pools[3]
    assert record(11, round_trip and fixed and same, f"round trip on {len(nets)} networks: {round_trip and fixed}, "
                                                     f"identical output across jobs: {same}", start)


def test_removal_instances_are_well_formed():
    rng = random.Random(1)
    for _ in range(40):
        _, t = _removal_instance(rng, rng.random() < 0.5, rng.random() < 0.5)
        assert non_minimal_edges(t) == frozenset({(0, 1)})
