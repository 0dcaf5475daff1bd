"""Undirected unit-weight graphs and deterministic hop-count searches.

Node identifiers are 1-based integers.  Every shortest-path search breaks
ties toward the smallest predecessor id, so derived paths (and everything
built on top of them) are fully deterministic and independent of input
ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

BUNDLED_TOPOLOGIES = ("nsf", "cost239", "longhaul")


class TopologyParseError(ValueError):
    """Malformed topology file; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Topology:
    """Undirected simple graph with unit-weight (one hop) edges.

    Immutable after construction and safe to share between concurrent
    routing runs.
    """

    __slots__ = ("node_count", "edges", "name", "adj")

    def __init__(self, node_count: int, edges, name: str = ""):
        if node_count < 1:
            raise ValueError("node_count must be >= 1")
        seen = set()
        neighbors = [[] for _ in range(node_count + 1)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (1 <= u <= node_count and 1 <= v <= node_count):
                raise ValueError(f"edge ({u}, {v}) out of range 1..{node_count}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)
            neighbors[u].append(v)
            neighbors[v].append(u)
        self.node_count = node_count
        self.edges = frozenset(seen)
        self.name = name
        # adjacency indexed by node id (slot 0 unused), sorted ascending
        self.adj = tuple(tuple(sorted(ns)) for ns in neighbors)

    @property
    def nodes(self) -> range:
        return range(1, self.node_count + 1)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_node(self, v: int) -> bool:
        return 1 <= v <= self.node_count

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        if not self.has_node(v):
            raise ValueError(f"node {v} not in topology")
        return self.adj[v]

    def __repr__(self):
        label = self.name or "topology"
        return f"Topology({label!r}, nodes={self.node_count}, edges={self.edge_count})"


@dataclass(frozen=True)
class DistanceMap:
    """Hop distances and deterministic predecessors from one origin.

    ``dist[v]`` is None for unreachable nodes; ``parent[origin]`` is None.
    Among equal-distance predecessors the smallest node id wins.
    """

    origin: int
    dist: dict[int, int | None]
    parent: dict[int, int | None]


def _bfs(adj, node_count: int, origin: int, blocked) -> tuple[list[int], list[int]]:
    """Level-order BFS with smallest-id parent tie-breaking.

    Returns (dist, parent) lists indexed by node id; dist -1 marks
    unreachable, parent 0 marks none.  ``blocked`` nodes are treated as
    deleted from the graph.
    """
    dist = [-1] * (node_count + 1)
    parent = [0] * (node_count + 1)
    dist[origin] = 0
    frontier = [origin]
    level = 0
    while frontier:
        level += 1
        nxt = []
        for u in frontier:  # ascending ids: first discovery = smallest parent
            for v in adj[u]:
                if dist[v] < 0 and v not in blocked:
                    dist[v] = level
                    parent[v] = u
                    nxt.append(v)
        nxt.sort()
        frontier = nxt
    return dist, parent


def _as_distance_map(topo: Topology, origin: int, dist, parent) -> DistanceMap:
    dmap: dict[int, int | None] = {}
    pmap: dict[int, int | None] = {}
    for v in topo.nodes:
        dmap[v] = dist[v] if dist[v] >= 0 else None
        pmap[v] = parent[v] if parent[v] else None
    return DistanceMap(origin=origin, dist=dmap, parent=pmap)


def shortest_distances(topo: Topology, origin: int) -> DistanceMap:
    """Hop distances from ``origin`` over the whole graph."""
    if not topo.has_node(origin):
        raise ValueError(f"origin {origin} not in topology")
    dist, parent = _bfs(topo.adj, topo.node_count, origin, frozenset())
    return _as_distance_map(topo, origin, dist, parent)


def constrained_distances(topo: Topology, origin: int, forbidden) -> DistanceMap:
    """Hop distances with ``forbidden`` nodes deleted from the graph.

    A forbidden node can appear nowhere on a path, neither interior nor
    endpoint; forbidden nodes are reported unreachable.
    """
    forbidden = frozenset(forbidden)
    if not topo.has_node(origin):
        raise ValueError(f"origin {origin} not in topology")
    if origin in forbidden:
        raise ValueError(f"origin {origin} is forbidden")
    dist, parent = _bfs(topo.adj, topo.node_count, origin, forbidden)
    return _as_distance_map(topo, origin, dist, parent)


def extract_path(dm: DistanceMap, target: int) -> list[int] | None:
    """Walk predecessors from ``target`` back to the origin.

    Returns the node list oriented origin -> target, or None if the target
    is unreachable.
    """
    if target == dm.origin:
        return [target]
    if dm.dist.get(target) is None:
        return None
    path = [target]
    v = target
    while v != dm.origin:
        v = dm.parent[v]
        path.append(v)
    path.reverse()
    return path


def parse_topology(text: str, name: str = "") -> Topology:
    """Parse the line-oriented topology format.

    Blank lines and ``#`` comments are ignored.  The first significant
    line must be ``nodes N``; every following line ``edge U V``.  Only
    unit-weight edges exist, so any extra tokens are rejected.
    """
    node_count = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if node_count is None:
            if tokens[0] != "nodes" or len(tokens) != 2:
                raise TopologyParseError(
                    f"expected 'nodes N' before anything else, got {line!r}", lineno
                )
            try:
                node_count = int(tokens[1])
            except ValueError:
                raise TopologyParseError(f"invalid node count {tokens[1]!r}", lineno) from None
            if node_count < 1:
                raise TopologyParseError(f"node count must be >= 1, got {node_count}", lineno)
            continue
        if tokens[0] != "edge" or len(tokens) != 3:
            raise TopologyParseError(f"expected 'edge U V', got {line!r}", lineno)
        try:
            u, v = int(tokens[1]), int(tokens[2])
        except ValueError:
            raise TopologyParseError(f"invalid edge endpoints in {line!r}", lineno) from None
        if u == v:
            raise TopologyParseError(f"self-loop at node {u}", lineno)
        if not (1 <= u <= node_count and 1 <= v <= node_count):
            raise TopologyParseError(
                f"edge ({u}, {v}) out of range 1..{node_count}", lineno
            )
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise TopologyParseError(f"duplicate edge ({u}, {v})", lineno)
        seen.add(key)
        edges.append(key)
    if node_count is None:
        raise TopologyParseError("empty topology file", 1)
    return Topology(node_count, edges, name=name)


def load_topology(path) -> Topology:
    """Parse a topology file from disk; the name is the file stem."""
    p = Path(path)
    return parse_topology(p.read_text(), name=p.stem)


def bundled_topology(name: str) -> Topology:
    """Load one of the packaged reference networks (nsf, cost239, longhaul)."""
    if name not in BUNDLED_TOPOLOGIES:
        raise ValueError(f"unknown bundled topology {name!r}; have {BUNDLED_TOPOLOGIES}")
    text = resources.files("lightforest.data").joinpath(f"{name}.topo").read_text()
    return parse_topology(text, name=name)
