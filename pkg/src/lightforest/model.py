"""Node capabilities, multicast sessions, light-trees and routing state.

A light-tree occupies one wavelength on all of its links.  Nodes are
either multicast capable (MC, can split a signal to any number of output
links) or multicast incapable (MI, drop-and-continue only: at most one
output link per wavelength).  The per-tree bookkeeping keeps three sets:

* ``mc_set``  - nodes a new branch may attach to (MC nodes plus leaf MI
  nodes of the tree),
* ``mi_set``  - non-leaf MI nodes, which no constraint path may traverse,
* ``unserved`` - session destinations not yet reached by any tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .topology import Topology


class ContractError(RuntimeError):
    """An internal precondition was violated; indicates a heuristic bug."""


@dataclass(frozen=True)
class CapabilityMap:
    """Per-node MI/MC classification covering every topology node."""

    node_count: int
    mc_nodes: frozenset[int]

    def __post_init__(self):
        bad = [v for v in self.mc_nodes if not 1 <= v <= self.node_count]
        if bad:
            raise ValueError(f"MC node ids out of range: {sorted(bad)}")

    @classmethod
    def all_mi(cls, node_count: int) -> "CapabilityMap":
        return cls(node_count, frozenset())

    @classmethod
    def all_mc(cls, node_count: int) -> "CapabilityMap":
        return cls(node_count, frozenset(range(1, node_count + 1)))

    @classmethod
    def with_mc(cls, node_count: int, mc_nodes) -> "CapabilityMap":
        return cls(node_count, frozenset(mc_nodes))

    def is_mc(self, v: int) -> bool:
        return v in self.mc_nodes

    def is_mi(self, v: int) -> bool:
        return v not in self.mc_nodes

    @property
    def mc_count(self) -> int:
        return len(self.mc_nodes)


@dataclass(frozen=True)
class MulticastSession:
    """A source plus a non-empty, id-ordered destination set."""

    source: int
    destinations: tuple[int, ...]

    def __post_init__(self):
        dests = tuple(sorted(set(self.destinations)))
        object.__setattr__(self, "destinations", dests)
        if not dests:
            raise ValueError("session needs at least one destination")
        if self.source in dests:
            raise ValueError(f"source {self.source} cannot be its own destination")
        if self.source < 1 or dests[0] < 1:
            raise ValueError("node ids are 1-based positive integers")

    @property
    def n(self) -> int:
        return len(self.destinations)

    def validate_against(self, topo: Topology) -> None:
        if not topo.has_node(self.source):
            raise ValueError(f"source {self.source} not in topology")
        bad = [d for d in self.destinations if not topo.has_node(d)]
        if bad:
            raise ValueError(f"destinations not in topology: {bad}")


class LightTree:
    """Rooted tree on topology nodes; parent pointers plus ordered children."""

    __slots__ = ("root", "parent", "children", "depth")

    def __init__(self, root: int):
        self.root = root
        self.parent: dict[int, int | None] = {root: None}
        self.children: dict[int, list[int]] = {root: []}
        self.depth: dict[int, int] = {root: 0}

    def __contains__(self, v: int) -> bool:
        return v in self.parent

    def nodes(self):
        return self.parent.keys()

    @property
    def edge_count(self) -> int:
        return len(self.parent) - 1

    def edges(self):
        """Tree edges as normalized (small, large) node pairs."""
        for v, p in self.parent.items():
            if p is not None:
                yield (v, p) if v < p else (p, v)

    def add_child(self, parent: int, v: int) -> None:
        if parent not in self.parent:
            raise ContractError(f"parent {parent} not in tree")
        if v in self.parent:
            raise ContractError(f"node {v} already in tree")
        self.parent[v] = parent
        self.children[parent].append(v)
        self.children[v] = []
        self.depth[v] = self.depth[parent] + 1


def tree_distance(tree: LightTree, v: int) -> int:
    """Hop count from the tree root down to ``v``."""
    if v not in tree:
        raise ValueError(f"node {v} not in tree")
    return tree.depth[v]


@dataclass(frozen=True)
class LightForest:
    """Trees all rooted at the session source, one wavelength per tree.

    ``served`` maps each destination to the index of the tree delivering
    to it.  A destination may also appear as a plain relay node in a later
    tree; that occurrence does not serve it.
    """

    source: int
    trees: tuple[LightTree, ...]
    served: dict[int, int]


@dataclass
class RoutingState:
    """Mutable per-tree construction state, confined to one routing run."""

    tree: LightTree
    mc_set: set[int]
    mi_set: set[int]
    unserved: set[int]


def new_state(topo: Topology, caps: CapabilityMap, session: MulticastSession,
              unserved=None) -> RoutingState:
    """Fresh single-node tree at the source: attachable set is {source}.

    The source starts attachable regardless of capability; it only moves
    to ``mi_set`` once an MI source gains its first (and then only) child.
    """
    session.validate_against(topo)
    if caps.node_count != topo.node_count:
        raise ValueError("capability map does not cover this topology")
    remaining = set(session.destinations) if unserved is None else set(unserved)
    return RoutingState(
        tree=LightTree(session.source),
        mc_set={session.source},
        mi_set=set(),
        unserved=remaining,
    )


def attach_path(state: RoutingState, caps: CapabilityMap, path) -> RoutingState:
    """Graft ``path`` (connector first, destination last) onto the tree.

    Set updates: the destination and interior MC nodes become attachable;
    interior MI nodes are now non-leaf and blocked; an MI connector (leaf
    or bare source until now) has spent its single output and is blocked
    too.  Destinations lying on the path interior are served immediately.
    Returns the mutated state.
    """
    if len(path) < 2:
        raise ContractError("attachment path needs at least one edge")
    c, d = path[0], path[-1]
    tree = state.tree
    if c not in state.mc_set:
        raise ContractError(f"connector {c} not attachable")
    if d not in state.unserved:
        raise ContractError(f"endpoint {d} is not an unserved destination")
    for v in path[1:]:
        if v in tree:
            raise ContractError(f"path node {v} already in tree")
        if v in state.mi_set:
            raise ContractError(f"path node {v} is a blocked MI node")

    for prev, v in zip(path, path[1:]):
        tree.add_child(prev, v)

    served = []
    for v in path[1:-1]:
        if caps.is_mc(v):
            state.mc_set.add(v)
        else:
            state.mi_set.add(v)  # interior MI node now has a child
        if v in state.unserved:
            state.unserved.discard(v)
            served.append(v)
    state.mc_set.add(d)
    state.unserved.discard(d)
    served.append(d)
    if caps.is_mi(c):
        state.mc_set.discard(c)
        state.mi_set.add(c)
    return state


def classify_nodes(tree: LightTree, caps: CapabilityMap) -> tuple[set[int], set[int]]:
    """Recompute (mc_set, mi_set) of a tree from scratch.

    MC nodes and leaf MI nodes are attachable; non-leaf MI nodes are not.
    The bare single-node tree keeps its root attachable whatever its
    capability, matching the initial state.
    """
    mc, mi = set(), set()
    for v in tree.nodes():
        if caps.is_mc(v) or not tree.children[v]:
            mc.add(v)
        else:
            mi.add(v)
    return mc, mi


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_forest(forest: LightForest, topo: Topology, caps: CapabilityMap,
                    session: MulticastSession) -> ValidationReport:
    """Check every structural invariant of a routing output.

    Violations are returned as data, not raised: rooted-tree consistency,
    edges existing in the topology, MI out-degree at most 1, every leaf a
    destination served by its own tree, and every destination served
    exactly once.
    """
    issues = []
    dests = set(session.destinations)
    for k, tree in enumerate(forest.trees):
        if tree.root != forest.source:
            issues.append(f"tree {k}: rooted at {tree.root}, not source {forest.source}")
        for v in tree.nodes():
            p = tree.parent[v]
            if v == tree.root:
                if p is not None:
                    issues.append(f"tree {k}: root has a parent")
                continue
            if p is None or p not in tree.parent:
                issues.append(f"tree {k}: node {v} has no valid parent")
                continue
            if v not in tree.children[p]:
                issues.append(f"tree {k}: node {v} missing from children of {p}")
            if tree.depth[v] != tree.depth[p] + 1:
                issues.append(f"tree {k}: depth of {v} inconsistent with parent {p}")
            if not topo.has_edge(p, v):
                issues.append(f"tree {k}: edge ({p}, {v}) not in topology")
            if not topo.has_node(v):
                issues.append(f"tree {k}: node {v} not in topology")
        for v in tree.nodes():
            if caps.is_mi(v) and len(tree.children[v]) > 1:
                issues.append(f"tree {k}: MI out-degree {len(tree.children[v])} at node {v}")
            if not tree.children[v] and v != tree.root:
                if v not in dests:
                    issues.append(f"tree {k}: leaf {v} is not a destination")
                elif forest.served.get(v) != k:
                    issues.append(f"duplicate service: destination {v} is a leaf of tree {k} "
                                  f"but served by tree {forest.served.get(v)}")
    for d in dests:
        k = forest.served.get(d)
        if k is None:
            issues.append(f"destination {d} not served")
        elif not (0 <= k < len(forest.trees)) or d not in forest.trees[k]:
            issues.append(f"destination {d} marked served by tree {k} but absent from it")
    for d in forest.served:
        if d not in dests:
            issues.append(f"spurious service entry for non-destination {d}")
    return ValidationReport(tuple(issues))
