"""DOT serialization of light-forests.

One cluster per tree, labeled with its wavelength number.  Destination
nodes are double-circled in the tree serving them; MC nodes are boxes.
The reader understands exactly the format the writer emits, so a forest
survives a round trip with node and edge membership intact.
"""

from __future__ import annotations

import re

from .model import CapabilityMap, LightForest, LightTree

_NODE_RE = re.compile(r'^"t(\d+)_(\d+)" \[label="(\d+)"(?:, shape=(\w+))?\];$')
_EDGE_RE = re.compile(r'^"t(\d+)_(\d+)" -> "t(\d+)_(\d+)";$')


def forest_to_dot(forest: LightForest, caps: CapabilityMap) -> str:
    lines = ["digraph lightforest {"]
    for k, tree in enumerate(forest.trees):
        lines.append(f"  subgraph cluster_{k} {{")
        lines.append(f'    label="wavelength {k + 1}";')
        for v in sorted(tree.nodes()):
            attrs = [f'label="{v}"']
            if forest.served.get(v) == k:
                attrs.append("shape=doublecircle")
            elif caps.is_mc(v):
                attrs.append("shape=box")
            lines.append(f'    "t{k}_{v}" [{", ".join(attrs)}];')
        for v in sorted(tree.nodes()):
            p = tree.parent[v]
            if p is not None:
                lines.append(f'    "t{k}_{p}" -> "t{k}_{v}";')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def forest_from_dot(text: str) -> LightForest:
    """Rebuild a forest from DOT text produced by :func:`forest_to_dot`."""
    tree_nodes: dict[int, set[int]] = {}
    tree_edges: dict[int, list[tuple[int, int]]] = {}
    served: dict[int, int] = {}
    for raw in text.splitlines():
        line = raw.strip()
        m = _NODE_RE.match(line)
        if m:
            k, v, label, shape = int(m.group(1)), int(m.group(2)), int(m.group(3)), m.group(4)
            if v != label:
                raise ValueError(f"inconsistent node declaration: {line!r}")
            tree_nodes.setdefault(k, set()).add(v)
            tree_edges.setdefault(k, [])
            if shape == "doublecircle":
                served[v] = k
            continue
        m = _EDGE_RE.match(line)
        if m:
            k1, p, k2, v = (int(g) for g in m.groups())
            if k1 != k2:
                raise ValueError(f"edge crosses clusters: {line!r}")
            tree_edges.setdefault(k1, []).append((p, v))
    if not tree_nodes:
        raise ValueError("no trees found in DOT text")

    trees = []
    root = None
    for k in sorted(tree_nodes):
        nodes = tree_nodes[k]
        edges = tree_edges.get(k, [])
        has_parent = {v for _, v in edges}
        roots = sorted(nodes - has_parent)
        if len(roots) != 1:
            raise ValueError(f"cluster {k} does not describe a single rooted tree")
        if root is None:
            root = roots[0]
        elif roots[0] != root:
            raise ValueError("trees are rooted at different nodes")
        tree = LightTree(roots[0])
        pending = list(edges)
        while pending:
            rest = []
            for p, v in pending:
                if p in tree:
                    tree.add_child(p, v)
                else:
                    rest.append((p, v))
            if len(rest) == len(pending):
                raise ValueError(f"cluster {k} contains disconnected edges")
            pending = rest
        trees.append(tree)
    return LightForest(source=root, trees=tuple(trees), served=served)
