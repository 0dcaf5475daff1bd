"""Shortest-constraint-path search and the two tree-construction heuristics.

A constraint path runs from an unserved node to an attachable tree node
(the connector) without traversing any blocked MI node.  Both heuristics
repeatedly attach the globally nearest unserved destination along such a
path; they differ only in how ties are resolved:

* member-only: any tie goes to the smallest node id (the reproducible
  stand-in for an arbitrary choice);
* distance-priority: tied destinations are ranked by their hop count from
  the source in the plain shortest-path tree (nearer first), and tied
  connectors by their hop count from the source inside the tree under
  construction (shallower first).

When a tree cannot reach any remaining destination, a new tree is started
at the source on the next wavelength, until everything is served.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .model import (
    CapabilityMap,
    ContractError,
    LightForest,
    MulticastSession,
    RoutingState,
    attach_path,
    new_state,
)
from .topology import Topology, shortest_distances


class UnreachableDestinationError(ValueError):
    """A destination cannot be reached from the source at all."""

    def __init__(self, node: int, source: int):
        super().__init__(f"destination {node} is unreachable from source {source}")
        self.node = node


@dataclass(frozen=True)
class ScpResult:
    """Outcome of one shortest-constraint-path search.

    ``connectors`` is the full set of attachable nodes at the minimum
    distance, ascending; ``path_to[c]`` is the deterministic shortest
    constraint path oriented destination -> connector.
    """

    dist: int
    connectors: tuple[int, ...]
    path_to: dict[int, list[int]]


@dataclass(frozen=True)
class StepRecord:
    """One attachment step, as seen by a routing observer."""

    tree_index: int
    min_dist: int
    candidates: tuple[int, ...]
    destination: int
    connectors: tuple[int, ...]
    connector: int
    path: tuple[int, ...]


def _scp_min_dist(adj, origin, mc_set, mi_set):
    """Hop count of the shortest constraint path from ``origin``, or None.

    BFS discovers nodes in level order, so the first attachable node hit
    is at the minimum distance; no parents are tracked here.
    """
    if origin in mc_set:
        return 0
    seen = {origin}
    frontier = [origin]
    level = 0
    while frontier:
        level += 1
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v in seen or v in mi_set:
                    continue
                if v in mc_set:
                    return level
                seen.add(v)
                nxt.append(v)
        frontier = nxt
    return None


def scp(state: RoutingState, topo: Topology, d: int) -> ScpResult | None:
    """All minimum-length constraint paths from destination ``d`` to the tree.

    Runs the deterministic constrained search from ``d`` (blocked MI nodes
    deleted) and stops after the first BFS level containing attachable
    nodes; every connector at that distance is reported with its path.
    Attachable nodes closer than the minimum cannot exist by construction,
    so the truncated search is exact.
    """
    if d not in state.unserved:
        raise ValueError(f"{d} is not an unserved destination")
    adj = topo.adj
    mc_set = state.mc_set
    mi_set = state.mi_set
    parent = [0] * (topo.node_count + 1)
    seen = [False] * (topo.node_count + 1)
    seen[d] = True
    frontier = [d]
    level = 0
    found: list[int] = []
    while frontier and not found:
        level += 1
        nxt = []
        for u in frontier:  # ascending ids give smallest-id parents
            for v in adj[u]:
                if seen[v] or v in mi_set:
                    continue
                seen[v] = True
                parent[v] = u
                if v in mc_set:
                    found.append(v)
                else:
                    nxt.append(v)
        nxt.sort()
        frontier = nxt
    if not found:
        return None
    found.sort()
    paths = {}
    for c in found:
        path = [c]
        v = c
        while v != d:
            v = parent[v]
            path.append(v)
        path.reverse()  # oriented d -> c
        paths[c] = path
    return ScpResult(dist=level, connectors=tuple(found), path_to=paths)


def assign_priorities(topo: Topology, session: MulticastSession) -> dict[int, int]:
    """Destination priorities: plain shortest-path hops from the source.

    Lower distance means higher priority; equal distances rank by node id.
    """
    dm = shortest_distances(topo, session.source)
    prio = {}
    for d in session.destinations:
        if dm.dist[d] is None:
            raise UnreachableDestinationError(d, session.source)
        prio[d] = dm.dist[d]
    return prio


def _scan_unserved(state: RoutingState, topo: Topology):
    """Minimum constraint distance over unserved destinations and its argmin set."""
    adj = topo.adj
    best = None
    cands: list[int] = []
    for d in sorted(state.unserved):
        dist = _scp_min_dist(adj, d, state.mc_set, state.mi_set)
        if dist is None:
            continue
        if best is None or dist < best:
            best = dist
            cands = [d]
        elif dist == best:
            cands.append(d)
    return best, cands


def candidate_destinations(state: RoutingState, topo: Topology) -> list[int]:
    """Unserved destinations whose constraint distance ties the global minimum."""
    if not state.unserved:
        raise ValueError("no unserved destinations")
    return _scan_unserved(state, topo)[1]


def select_destination(cands, prio: dict[int, int]) -> int:
    """Highest-priority candidate: nearest to the source in the SPT, then id."""
    if not cands:
        raise ContractError("no candidate destinations to select from")
    return min(cands, key=lambda d: (prio[d], d))


def candidate_connectors(state: RoutingState, topo: Topology, d: int) -> list[int]:
    """Attachable nodes whose constraint path to ``d`` has the minimum length."""
    res = scp(state, topo, d)
    if res is None:
        raise ValueError(f"destination {d} has no constraint path to the tree")
    return list(res.connectors)


def select_connector(state: RoutingState, cands) -> int:
    """Connector nearest to the source within the tree, then smallest id."""
    if not cands:
        raise ContractError("no candidate connectors to select from")
    depth = state.tree.depth
    return min(cands, key=lambda c: (depth[c], c))


def _route(topo: Topology, caps: CapabilityMap, session: MulticastSession,
           pick_destination, pick_connector,
           observer: Callable[[StepRecord], None] | None = None) -> LightForest:
    session.validate_against(topo)
    if caps.node_count != topo.node_count:
        raise ValueError("capability map does not cover this topology")
    base = shortest_distances(topo, session.source)
    for d in session.destinations:
        if base.dist[d] is None:
            raise UnreachableDestinationError(d, session.source)
    prio = {d: base.dist[d] for d in session.destinations}

    unserved = set(session.destinations)
    trees = []
    served: dict[int, int] = {}
    while unserved:
        state = new_state(topo, caps, session, unserved=unserved)
        grew = False
        while state.unserved:
            min_dist, cands = _scan_unserved(state, topo)
            if not cands:
                break  # this wavelength is exhausted; start a new tree
            d = pick_destination(cands, prio)
            res = scp(state, topo, d)
            connectors = list(res.connectors)
            c = pick_connector(state, connectors)
            path = list(reversed(res.path_to[c]))
            # every attachment must realize the global minimum distance
            if res.dist != min_dist or len(path) - 1 != min_dist:
                raise ContractError(
                    f"attached path length {len(path) - 1} differs from the "
                    f"minimum constraint distance {min_dist}"
                )
            before = set(state.unserved)
            attach_path(state, caps, path)
            for v in before - state.unserved:
                served[v] = len(trees)
            grew = True
            if observer is not None:
                observer(StepRecord(
                    tree_index=len(trees),
                    min_dist=min_dist,
                    candidates=tuple(cands),
                    destination=d,
                    connectors=tuple(connectors),
                    connector=c,
                    path=tuple(path),
                ))
        if not grew:
            # a fresh tree always reaches the nearest destination unblocked
            raise ContractError("routing made no progress on a fresh tree")
        trees.append(state.tree)
        unserved = state.unserved
    return LightForest(source=session.source, trees=tuple(trees), served=served)


def route_distance_priority(topo: Topology, caps: CapabilityMap,
                            session: MulticastSession,
                            observer=None) -> LightForest:
    """Tree construction with distance-based tie-breaking on both choices."""
    return _route(
        topo, caps, session,
        pick_destination=select_destination,
        pick_connector=select_connector,
        observer=observer,
    )


def route_member_only(topo: Topology, caps: CapabilityMap,
                      session: MulticastSession,
                      observer=None) -> LightForest:
    """Baseline construction: nearest destination, arbitrary-but-fixed ties.

    The candidate destination and the connector are both taken at the
    smallest node id, standing in for the baseline's unspecified choices.
    """
    return _route(
        topo, caps, session,
        pick_destination=lambda cands, prio: cands[0],
        pick_connector=lambda state, cands: cands[0],
        observer=observer,
    )


ALGORITHMS: dict[str, Callable[..., LightForest]] = {
    "dp": route_distance_priority,
    "mo": route_member_only,
}


def route(topo: Topology, caps: CapabilityMap, session: MulticastSession,
          algorithm: str, observer=None) -> LightForest:
    """Dispatch by algorithm name ('dp' or 'mo')."""
    try:
        fn = ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; have {sorted(ALGORITHMS)}") from None
    return fn(topo, caps, session, observer=observer)
