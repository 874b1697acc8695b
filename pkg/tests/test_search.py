import random

import pytest

from detri.chordal import UGraph, is_chordal
from detri.elimination import is_elimination_graph
from detri.model import moral_graph, parse_network
from detri.search import (HeuristicSpec, SpecError, default_catalog, next_vertex, parse_spec,
                          run_heuristic, run_pool)
from detri.statespace import graph_state_space

from conftest import random_net


def test_parse_spec_example():
    spec = parse_spec("la:weight+fill,topx=2,extra=all,pool=100,seed=7")
    assert spec == HeuristicSpec(criteria=("weight", "fill"), top_x=2, extra_mode="all", pool=100, seed=7)
    assert parse_spec(str(spec)) == spec
    assert parse_spec("mcs,extra=sampled,q=0.25").kind == "mcs"


@pytest.mark.parametrize("text", ["la:", "la:speed", "foo", "la:fill,topx=0", "la:fill,extra=most",
                                  "la:fill,q=2", "la:fill,pool=x", "la:fill,colour=red"])
def test_parse_spec_errors(text):
    with pytest.raises(SpecError):
        parse_spec(text)


def test_catalog_round_trips():
    cat = default_catalog()
    assert len(cat) == len(set(map(str, cat))) == 39
    assert all(parse_spec(str(s)) == s for s in cat)


def test_next_vertex_fill(net_a, moral_a):
    spec = HeuristicSpec(criteria=("fill",))
    assert next_vertex(moral_a, net_a, spec, random.Random(0)) == net_a.index("c")


def test_next_vertex_distinct_scores_ignores_seed():
    net = parse_network("net t\nvar a 2 -\nvar b 3 - | a\nvar c 5 - | b")
    g = moral_graph(net)
    spec = HeuristicSpec(criteria=("weight",))
    picks = {next_vertex(g, net, spec, random.Random(s)) for s in range(20)}
    assert picks == {net.index("a")}


def test_next_vertex_topx_spreads(net_a, moral_a):
    spec = HeuristicSpec(criteria=("size",), top_x=3)
    picks = {next_vertex(moral_a, net_a, spec, random.Random(s)) for s in range(40)}
    assert len(picks) == 3


def test_next_vertex_single_and_empty():
    net = parse_network("net t\nvar a 2 -")
    g = moral_graph(net)
    assert next_vertex(g, net, HeuristicSpec(), random.Random(0)) == 0
    with pytest.raises(ValueError):
        next_vertex(UGraph.empty(0), net, HeuristicSpec(), random.Random(0))


@pytest.mark.parametrize("crit", [("weight",), ("fill",), ("size",), ("fill", "weight")])
def test_run_heuristic_fix_a_all_extra(net_a, crit):
    t = run_heuristic(net_a, HeuristicSpec(criteria=crit, extra_mode="all"))
    assert graph_state_space(t, net_a) == 54


def test_run_heuristic_fix_b(net_b):
    assert graph_state_space(run_heuristic(net_b, HeuristicSpec(extra_mode="lo")), net_b) == 900
    assert graph_state_space(run_heuristic(net_b, HeuristicSpec(extra_mode="none")), net_b) == 900
    assert is_chordal(moral_graph(net_b)).verdict


def test_run_heuristic_reproducible():
    net = random_net(77, 12, 12)
    for text in ["la:weight,topx=3,extra=sampled", "mcs,topx=2,extra=some", "la:size,tie=random"]:
        spec = parse_spec(text)
        assert run_heuristic(net, spec, 5) == run_heuristic(net, spec, 5)


def test_run_pool_fix_a_sweep(net_a):
    none = run_pool(net_a, parse_spec("la:weight,topx=3,extra=none,pool=30,seed=2"))
    every = run_pool(net_a, parse_spec("la:weight,topx=3,extra=all,pool=30,seed=2"))
    assert none.best_score >= 81
    assert every.best_score == 54
    assert all(c.is_elimination for c in none.per_candidate)


def test_run_pool_single_matches_heuristic(net_a):
    spec = parse_spec("la:fill,topx=2,seed=4")
    res = run_pool(net_a, spec)
    assert res.best == run_heuristic(net_a, spec, 4 ^ 0)
    assert len(res.per_candidate) == 1


def test_pool_invariants():
    rng = random.Random(15)
    for _ in range(15):
        net = random_net(rng.randrange(10**9), 8, 14)
        for mode in ("none", "all", "lo", "sampled", "some"):
            spec = parse_spec(f"la:weight+fill,topx=3,extra={mode},pool=12,seed={rng.randrange(99)}")
            res = run_pool(net, spec)
            assert res.best_score == min(c.score for c in res.per_candidate)
            assert not (res.best.fill & res.best.base.edges())
            assert is_chordal(res.best.total).verdict
            assert graph_state_space(res.best, net) == res.best_score
            if mode == "none":
                assert all(c.is_elimination for c in res.per_candidate)
            assert is_elimination_graph(res.best)[0] == res.per_candidate[res.best_index].is_elimination


def test_pool_monotone_in_size():
    net = random_net(99, 14, 14)
    scores = [run_pool(net, parse_spec(f"la:weight,topx=3,extra=sampled,pool={p},seed=3")).best_score
              for p in (1, 10, 50, 100)]
    assert scores == sorted(scores, reverse=True)


def test_pool_parallel_matches_serial():
    net = random_net(5, 12, 12)
    spec = parse_spec("la:weight,topx=3,extra=sampled,pool=16,seed=9")
    assert run_pool(net, spec, jobs=3) == run_pool(net, spec, jobs=1)
