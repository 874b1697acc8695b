import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from detri.bench import GenParams, fix_a, fix_b, gen_random_network  # noqa: E402
from detri.chordal import UGraph, norm_edge  # noqa: E402
from detri.model import moral_graph  # noqa: E402

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def net_a():
    return fix_a()


@pytest.fixture
def net_b():
    return fix_b()


@pytest.fixture
def moral_a(net_a):
    return moral_graph(net_a)


def named_edges(net, *pairs):
    return frozenset(norm_edge(net.index(a), net.index(b)) for a, b in pairs)


def random_graph(rng, n, p):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return UGraph.from_edges(n, edges)


def random_order(rng, g):
    order = g.vertices()
    rng.shuffle(order)
    return order


def random_net(seed, lo=2, hi=6, p_det=0.5, cards=(2, 5), max_in_degree=4):
    rng = random.Random(seed)
    return gen_random_network(GenParams(nodes=rng.randint(lo, hi), max_in_degree=max_in_degree,
                                        p_det=p_det, p_obs=0.0, stoch_card_range=cards, seed=seed))
