"""Mixed stochastic/deterministic networks, moralization and the ``.net`` format.

A network file looks like::

    net fixA
    var a 3 -
    var b 3 -
    var d 8 det | a b
    var c 3 - | d a
    var e 3 - | d b

Parents must be declared before their children. ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .chordal import UGraph, norm_edge

DIRECTED = "directed-child"
MORAL = "moral"
BOTH = "both"


class NetworkError(ValueError):
    """Raised for structurally invalid networks."""


class NetworkFormatError(NetworkError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


@dataclass(frozen=True)
class Vertex:
    id: int
    name: str
    cardinality: int
    deterministic: bool = False
    observed: bool = False
    parents: tuple[int, ...] = ()


@dataclass(frozen=True)
class Network:
    vertices: tuple[Vertex, ...]
    name: str = "net"

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        _validate(self)

    @classmethod
    def build(cls, name: str, rows: Iterable[Sequence]) -> "Network":
        """Build from ``(name, cardinality, flags, parent_names)`` rows.

        ``flags`` is a string such as ``"-"``, ``"det"`` or ``"det,obs"``.
        """
        ids: dict[str, int] = {}
        verts = []
        for i, (vname, card, flags, parents) in enumerate(rows):
            det, obs = _parse_flags(flags)
            try:
                pids = tuple(ids[p] for p in parents)
            except KeyError as exc:
                raise NetworkError(f"unknown parent {exc.args[0]!r} of {vname!r}") from None
            ids.setdefault(vname, i)
            verts.append(Vertex(i, vname, int(card), det, obs, pids))
        return cls(tuple(verts), name)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, name: str) -> int:
        for v in self.vertices:
            if v.name == name:
                return v.id
        raise KeyError(name)

    def names(self) -> list[str]:
        return [v.name for v in self.vertices]

    def children(self, vid: int) -> list[int]:
        return [v.id for v in self.vertices if vid in v.parents]

    def parent_mask(self, vid: int) -> int:
        m = 0
        for p in self.vertices[vid].parents:
            m |= 1 << p
        return m

    def deterministic_ids(self) -> list[int]:
        return [v.id for v in self.vertices if v.deterministic]

    def topological_order(self) -> list[int]:
        """Stable topological order (lowest id first among ready vertices)."""
        order = _topo(self.vertices)
        if order is None:
            raise NetworkError("cycle detected")
        return order


def _parse_flags(flags: str) -> tuple[bool, bool]:
    if flags == "-":
        return False, False
    parts = flags.split(",")
    bad = [p for p in parts if p not in ("det", "obs")]
    if bad or len(set(parts)) != len(parts):
        raise NetworkError(f"bad flags {flags!r}")
    return "det" in parts, "obs" in parts


def _topo(vertices: Sequence[Vertex]) -> list[int] | None:
    import heapq

    n = len(vertices)
    indeg = [len(v.parents) for v in vertices]
    kids: list[list[int]] = [[] for _ in range(n)]
    for v in vertices:
        for p in v.parents:
            kids[p].append(v.id)
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for w in kids[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    return order if len(order) == n else None


def _validate(net: Network) -> None:
    n = len(net.vertices)
    seen: set[str] = set()
    for i, v in enumerate(net.vertices):
        if v.id != i:
            raise NetworkError(f"vertex ids must be 0..{n - 1} in order, got {v.id} at {i}")
        if not v.name or any(ch.isspace() for ch in v.name):
            raise NetworkError(f"bad vertex name {v.name!r}")
        if v.name in seen:
            raise NetworkError(f"duplicate name {v.name!r}")
        seen.add(v.name)
        if v.cardinality < 1:
            raise NetworkError(f"cardinality of {v.name!r} must be >= 1")
        if len(set(v.parents)) != len(v.parents):
            raise NetworkError(f"duplicate parent of {v.name!r}")
        for p in v.parents:
            if p == i:
                raise NetworkError(f"cycle detected: {v.name!r} is its own parent")
            if not 0 <= p < n:
                raise NetworkError(f"unknown parent id {p} of {v.name!r}")
    if _topo(net.vertices) is None:
        raise NetworkError("cycle detected")


def parse_network(text: str | bytes) -> Network:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    name = None
    rows: list[Vertex] = []
    ids: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if name is None:
            if toks[0] != "net" or len(toks) != 2:
                raise NetworkFormatError(lineno, "expected 'net <name>'")
            name = toks[1]
            continue
        if toks[0] != "var":
            raise NetworkFormatError(lineno, f"unexpected keyword {toks[0]!r}")
        head, parents = toks, []
        if "|" in toks:
            k = toks.index("|")
            head, parents = toks[:k], toks[k + 1:]
            if not parents:
                raise NetworkFormatError(lineno, "'|' without parents")
        if len(head) != 4:
            raise NetworkFormatError(lineno, "expected 'var <name> <cardinality> <flags>'")
        _, vname, card_s, flags = head
        try:
            card = int(card_s)
        except ValueError:
            raise NetworkFormatError(lineno, f"bad cardinality {card_s!r}") from None
        if card < 1:
            raise NetworkFormatError(lineno, f"cardinality of {vname!r} must be >= 1")
        if vname in ids:
            raise NetworkFormatError(lineno, f"duplicate name {vname!r}")
        try:
            det, obs = _parse_flags(flags)
        except NetworkError as exc:
            raise NetworkFormatError(lineno, str(exc)) from None
        pids = []
        for p in parents:
            if p == vname:
                raise NetworkFormatError(lineno, f"cycle detected: {vname!r} is its own parent")
            if p not in ids:
                raise NetworkFormatError(lineno, f"unknown parent {p!r}")
            if ids[p] in pids:
                raise NetworkFormatError(lineno, f"duplicate parent {p!r}")
            pids.append(ids[p])
        ids[vname] = len(rows)
        rows.append(Vertex(len(rows), vname, card, det, obs, tuple(pids)))
    if name is None:
        raise NetworkFormatError(1, "missing 'net <name>' header")
    return Network(tuple(rows), name)


def serialize_network(net: Network) -> str:
    """Render ``net`` in the line format, vertices in stable topological order."""
    out = [f"net {net.name}"]
    for vid in net.topological_order():
        v = net.vertices[vid]
        flags = ",".join(f for f, on in (("det", v.deterministic), ("obs", v.observed)) if on) or "-"
        line = f"var {v.name} {v.cardinality} {flags}"
        if v.parents:
            line += " | " + " ".join(net.vertices[p].name for p in v.parents)
        out.append(line)
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class MoralGraph:
    graph: UGraph
    edge_provenance: dict = field(compare=False)


def moralize(net: Network) -> MoralGraph:
    prov: dict[tuple[int, int], str] = {}
    for v in net.vertices:
        for p in v.parents:
            prov[norm_edge(p, v.id)] = DIRECTED
    for v in net.vertices:
        ps = v.parents
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                e = norm_edge(ps[i], ps[j])
                tag = prov.get(e)
                if tag is None:
                    prov[e] = MORAL
                elif tag == DIRECTED:
                    prov[e] = BOTH
    return MoralGraph(UGraph.from_edges(net.n, prov), prov)


def moral_graph(net: Network) -> UGraph:
    return moralize(net).graph
