"""Seeded batch experiments: random sessions, random splitter placement.

Every instance draws from its own RNG substream keyed by
``SeedSequence(seed, spawn_key=(group_size, mc_count, source, session))``,
with the session drawn before the capability set.  Instances are therefore
independent of execution order, and rows always come out in
(group_size, mc_count, source, session, algorithm) lexicographic order
whether or not a process pool is used.

Group sizes count the source among the session members, so a session of
group size g draws g - 1 destinations.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .metrics import measure
from .model import CapabilityMap, MulticastSession, validate_forest
from .routing import ALGORITHMS, route
from .topology import (
    BUNDLED_TOPOLOGIES,
    Topology,
    bundled_topology,
    load_topology,
    shortest_distances,
)

ROW_FIELDS = (
    "topology", "algorithm", "source", "session", "group_size", "mc_count",
    "seed", "diameter", "avg_delay", "avg_delay_num", "avg_delay_den",
    "link_stress", "total_cost", "num_trees",
)


class DisconnectedTopologyError(ValueError):
    """Experiment topologies must be connected; carries the components."""

    def __init__(self, components):
        self.components = components
        parts = "; ".join(",".join(map(str, comp)) for comp in components)
        super().__init__(f"topology is disconnected: components [{parts}]")


@dataclass(frozen=True)
class ExperimentConfig:
    topology: str
    group_sizes: tuple[int, ...]
    mc_counts: tuple[int, ...]
    seed: int
    algorithms: tuple[str, ...] = ("dp", "mo")
    sessions_per_source: int = 100
    sources: tuple[int, ...] | None = None  # None: every node in sequence
    workers: int = 1


@dataclass(frozen=True)
class ResultRow:
    topology: str
    algorithm: str
    source: int
    session: int
    group_size: int
    mc_count: int
    seed: int
    diameter: int
    avg_delay: Fraction
    link_stress: int
    total_cost: int
    num_trees: int


def resolve_topology(spec: str) -> Topology:
    """Bundled network name or a path to a topology file."""
    if spec in BUNDLED_TOPOLOGIES:
        return bundled_topology(spec)
    return load_topology(spec)


def connected_components(topo: Topology) -> list[list[int]]:
    seen = set()
    components = []
    for start in topo.nodes:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            u = stack.pop()
            for v in topo.adj[u]:
                if v not in seen:
                    seen.add(v)
                    comp.append(v)
                    stack.append(v)
        components.append(sorted(comp))
    return components


def instance_rng(seed: int, group_size: int, mc_count: int, source: int,
                 session_index: int) -> np.random.Generator:
    """The documented per-instance substream."""
    ss = np.random.SeedSequence(seed, spawn_key=(group_size, mc_count, source, session_index))
    return np.random.Generator(np.random.PCG64(ss))


def generate_session(rng: np.random.Generator, topo: Topology, source: int,
                     group_size: int) -> MulticastSession:
    """Uniform random (group_size - 1)-subset of the non-source nodes."""
    if not topo.has_node(source):
        raise ValueError(f"source {source} not in topology")
    if not 2 <= group_size <= topo.node_count:
        raise ValueError(
            f"group size {group_size} out of range 2..{topo.node_count}"
        )
    pool = np.array([v for v in topo.nodes if v != source], dtype=np.int64)
    picked = rng.choice(pool, size=group_size - 1, replace=False)
    return MulticastSession(source, tuple(int(v) for v in picked))


def generate_capabilities(rng: np.random.Generator, topo: Topology,
                          mc_count: int) -> CapabilityMap:
    """Uniform random mc_count-subset of all nodes flagged MC."""
    if not 0 <= mc_count <= topo.node_count:
        raise ValueError(f"mc count {mc_count} out of range 0..{topo.node_count}")
    nodes = np.arange(1, topo.node_count + 1, dtype=np.int64)
    picked = rng.choice(nodes, size=mc_count, replace=False)
    return CapabilityMap.with_mc(topo.node_count, (int(v) for v in picked))


def _run_cell(args):
    """All sessions of one (group_size, mc_count, source) grid cell."""
    topo, algorithms, seed, group_size, mc_count, source, sessions = args
    rows = []
    for idx in range(sessions):
        rng = instance_rng(seed, group_size, mc_count, source, idx)
        session = generate_session(rng, topo, source, group_size)
        caps = generate_capabilities(rng, topo, mc_count)
        for algo in algorithms:
            forest = route(topo, caps, session, algo)
            report = validate_forest(forest, topo, caps, session)
            if not report.ok:
                raise RuntimeError(
                    f"invalid forest from {algo} on source={source} session={idx}: "
                    f"{report.violations}"
                )
            m = measure(forest, session)
            rows.append(ResultRow(
                topology=topo.name or "topology",
                algorithm=algo,
                source=source,
                session=idx,
                group_size=group_size,
                mc_count=mc_count,
                seed=seed,
                diameter=m.diameter,
                avg_delay=m.average_delay,
                link_stress=m.link_stress,
                total_cost=m.total_cost,
                num_trees=m.num_trees,
            ))
    return rows


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    """Run the full grid; both algorithms see identical instances."""
    topo = resolve_topology(config.topology)
    components = connected_components(topo)
    if len(components) > 1:
        raise DisconnectedTopologyError(components)
    if config.sessions_per_source < 1:
        raise ValueError("sessions_per_source must be >= 1")
    if config.seed < 0:
        raise ValueError("seed must be a non-negative integer")
    for g in config.group_sizes:
        if not 2 <= g <= topo.node_count:
            raise ValueError(f"group size {g} out of range 2..{topo.node_count}")
    for m in config.mc_counts:
        if not 0 <= m <= topo.node_count:
            raise ValueError(f"mc count {m} out of range 0..{topo.node_count}")
    algorithms = tuple(sorted(set(config.algorithms)))
    for a in algorithms:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}")
    sources = config.sources if config.sources is not None else tuple(topo.nodes)
    for s in sources:
        if not topo.has_node(s):
            raise ValueError(f"source {s} not in topology")

    tasks = [
        (topo, algorithms, config.seed, gs, mc, src, config.sessions_per_source)
        for gs in config.group_sizes
        for mc in config.mc_counts
        for src in sources
    ]
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunksize = max(1, len(tasks) // (config.workers * 8))
            cells = list(pool.map(_run_cell, tasks, chunksize=chunksize))
    else:
        cells = [_run_cell(t) for t in tasks]
    return [row for cell in cells for row in cell]


def _sig6(x: Fraction | float) -> str:
    return f"{float(x):.6g}"


def write_rows_csv(rows, out) -> None:
    """Emit result rows with the fixed header, '\\n' line endings."""
    close = False
    if isinstance(out, (str, Path)):
        out = open(out, "w", newline="")
        close = True
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(ROW_FIELDS)
        for r in rows:
            w.writerow([
                r.topology, r.algorithm, r.source, r.session, r.group_size,
                r.mc_count, r.seed, r.diameter, _sig6(r.avg_delay),
                r.avg_delay.numerator, r.avg_delay.denominator,
                r.link_stress, r.total_cost, r.num_trees,
            ])
    finally:
        if close:
            out.close()


def rows_csv_text(rows) -> str:
    buf = io.StringIO()
    write_rows_csv(rows, buf)
    return buf.getvalue()


def read_rows_csv(path) -> list[ResultRow]:
    rows = []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        missing = set(ROW_FIELDS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"result CSV missing columns: {sorted(missing)}")
        for rec in reader:
            rows.append(ResultRow(
                topology=rec["topology"],
                algorithm=rec["algorithm"],
                source=int(rec["source"]),
                session=int(rec["session"]),
                group_size=int(rec["group_size"]),
                mc_count=int(rec["mc_count"]),
                seed=int(rec["seed"]),
                diameter=int(rec["diameter"]),
                avg_delay=Fraction(int(rec["avg_delay_num"]), int(rec["avg_delay_den"])),
                link_stress=int(rec["link_stress"]),
                total_cost=int(rec["total_cost"]),
                num_trees=int(rec["num_trees"]),
            ))
    return rows


@dataclass(frozen=True)
class SummaryPoint:
    """Per-(topology, group_size, mc_count) means and baseline reductions.

    Mean fields are exact rationals; a field is None when that algorithm
    is absent from the input.  Reductions are present only when both
    algorithms are.
    """

    topology: str
    group_size: int
    mc_count: int
    instances: int
    mo_diameter: Fraction | None
    mo_avg_delay: Fraction | None
    mo_link_stress: Fraction | None
    mo_total_cost: Fraction | None
    dp_diameter: Fraction | None
    dp_avg_delay: Fraction | None
    dp_link_stress: Fraction | None
    dp_total_cost: Fraction | None
    diameter_reduction: Fraction | None
    delay_reduction: Fraction | None
    diameter_reduction_rel: Fraction | None
    delay_reduction_rel: Fraction | None


SUMMARY_FIELDS = (
    "topology", "group_size", "mc_count", "instances",
    "mo_diameter", "mo_avg_delay", "mo_link_stress", "mo_total_cost",
    "dp_diameter", "dp_avg_delay", "dp_link_stress", "dp_total_cost",
    "diameter_reduction", "delay_reduction",
    "diameter_reduction_rel", "delay_reduction_rel",
)


def _mean_metrics(rows) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    n = len(rows)
    return (
        Fraction(sum(r.diameter for r in rows), n),
        sum((r.avg_delay for r in rows), Fraction(0)) / n,
        Fraction(sum(r.link_stress for r in rows), n),
        Fraction(sum(r.total_cost for r in rows), n),
    )


def summarize(rows) -> list[SummaryPoint]:
    """Aggregate result rows into per-point means and MO-vs-DP reductions.

    Rows for the two algorithms are paired by instance identity
    (source, session); a point where both algorithms appear but over
    different instances is an error.
    """
    points: dict[tuple[str, int, int], dict[str, list[ResultRow]]] = {}
    for r in rows:
        key = (r.topology, r.group_size, r.mc_count)
        points.setdefault(key, {}).setdefault(r.algorithm, []).append(r)

    out = []
    for key in sorted(points):
        by_algo = points[key]
        mo_rows = by_algo.get("mo")
        dp_rows = by_algo.get("dp")
        if mo_rows and dp_rows:
            mo_ids = {(r.source, r.session) for r in mo_rows}
            dp_ids = {(r.source, r.session) for r in dp_rows}
            if mo_ids != dp_ids:
                raise ValueError(
                    f"unpaired rows at {key}: instance sets differ between algorithms"
                )
        mo = _mean_metrics(mo_rows) if mo_rows else (None,) * 4
        dp = _mean_metrics(dp_rows) if dp_rows else (None,) * 4
        red = (None,) * 4
        if mo_rows and dp_rows:
            ddiff = mo[0] - dp[0]
            ldiff = mo[1] - dp[1]
            red = (ddiff, ldiff, ddiff / mo[0], ldiff / mo[1])
        out.append(SummaryPoint(
            topology=key[0], group_size=key[1], mc_count=key[2],
            instances=len(mo_rows or dp_rows or ()),
            mo_diameter=mo[0], mo_avg_delay=mo[1],
            mo_link_stress=mo[2], mo_total_cost=mo[3],
            dp_diameter=dp[0], dp_avg_delay=dp[1],
            dp_link_stress=dp[2], dp_total_cost=dp[3],
            diameter_reduction=red[0], delay_reduction=red[1],
            diameter_reduction_rel=red[2], delay_reduction_rel=red[3],
        ))
    return out


def write_summary_csv(points, out) -> None:
    close = False
    if isinstance(out, (str, Path)):
        out = open(out, "w", newline="")
        close = True
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(SUMMARY_FIELDS)
        for p in points:
            w.writerow([
                p.topology, p.group_size, p.mc_count, p.instances,
                *("" if v is None else _sig6(v) for v in (
                    p.mo_diameter, p.mo_avg_delay, p.mo_link_stress, p.mo_total_cost,
                    p.dp_diameter, p.dp_avg_delay, p.dp_link_stress, p.dp_total_cost,
                    p.diameter_reduction, p.delay_reduction,
                    p.diameter_reduction_rel, p.delay_reduction_rel,
                )),
            ])
    finally:
        if close:
            out.close()
