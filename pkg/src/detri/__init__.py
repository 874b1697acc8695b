"""Triangulation of graphical models with deterministic variables."""

from .chordal import (ChordalityWitness, NotChordalError, UGraph, deficiency, eliminate_vertex,
                      is_chordal, is_simplicial, maximal_cliques_chordal)
from .elimination import (Triangulation, delta_state_space_on_removal, elimination_graph,
                          fill_path_predicate, is_elimination_graph, minimalize, non_minimal_edges,
                          read_triangulation, write_triangulation)
from .model import MoralGraph, Network, NetworkError, Vertex, moralize, parse_network, serialize_network
from .statespace import clique_state_space, graph_state_space

__version__ = "0.1.0"
