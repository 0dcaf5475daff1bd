"""Brute-force reference implementations, used only for verification.

Everything here enumerates simple paths outright and shares no search code
with the production modules; independence is the point.
"""

from __future__ import annotations

from dataclasses import dataclass

from .topology import Topology


@dataclass(frozen=True)
class OracleBudget:
    """Guards against factorial blow-up of exhaustive enumeration."""

    max_nodes: int = 8
    max_paths: int = 1_000_000

    def __post_init__(self):
        if self.max_nodes > 10:
            raise ValueError("max_nodes capped at 10")


class BudgetExceeded(RuntimeError):
    """The instance is too large for exhaustive search."""


def all_simple_paths(topo: Topology, start: int, budget: OracleBudget = OracleBudget()):
    """Yield every simple path starting at ``start`` (including [start])."""
    if topo.node_count > budget.max_nodes:
        raise BudgetExceeded(
            f"{topo.node_count} nodes exceeds oracle budget of {budget.max_nodes}"
        )
    count = 0
    path = [start]
    on_path = {start}

    def walk():
        nonlocal count
        count += 1
        if count > budget.max_paths:
            raise BudgetExceeded(f"more than {budget.max_paths} simple paths")
        yield list(path)
        for v in topo.adj[path[-1]]:
            if v not in on_path:
                path.append(v)
                on_path.add(v)
                yield from walk()
                on_path.discard(v)
                path.pop()

    yield from walk()


def brute_shortest_hops(topo, start, goal, forbidden=frozenset(),
                        budget: OracleBudget = OracleBudget()):
    """Minimum hops between two nodes avoiding ``forbidden`` entirely, or None."""
    forbidden = frozenset(forbidden)
    if start in forbidden or goal in forbidden:
        return None
    best = None
    for path in all_simple_paths(topo, start, budget):
        if path[-1] != goal or any(x in forbidden for x in path):
            continue
        hops = len(path) - 1
        if best is None or hops < best:
            best = hops
    return best


def brute_scp(topo, mc_set, mi_set, u, budget: OracleBudget = OracleBudget()):
    """Exhaustive shortest-constraint-path search from node ``u``.

    Enumerates all simple paths from ``u``, keeps those that end in
    ``mc_set`` and touch no ``mi_set`` node (endpoints included), and
    returns ``(distance, frozenset of connectors attaining it)`` or None.
    """
    mc_set = frozenset(mc_set)
    mi_set = frozenset(mi_set)
    best = None
    connectors = set()
    for path in all_simple_paths(topo, u, budget):
        if path[-1] not in mc_set or any(x in mi_set for x in path):
            continue
        hops = len(path) - 1
        if best is None or hops < best:
            best = hops
            connectors = {path[-1]}
        elif hops == best:
            connectors.add(path[-1])
    if best is None:
        return None
    return best, frozenset(connectors)


def spt_delay_lower_bound(topo, session) -> dict[int, int]:
    """Per-destination shortest-path hops from the source.

    No light-tree can deliver to a destination in fewer hops, so this
    floors the per-destination delay of any heuristic.
    """
    from .topology import shortest_distances

    dm = shortest_distances(topo, session.source)
    return {d: dm.dist[d] for d in session.destinations}
