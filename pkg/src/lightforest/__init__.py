"""Multicast light-tree construction for WDM networks with sparse splitting."""

from .dot import forest_from_dot, forest_to_dot
from .harness import (
    DisconnectedTopologyError,
    ExperimentConfig,
    ResultRow,
    generate_capabilities,
    generate_session,
    instance_rng,
    read_rows_csv,
    resolve_topology,
    run_experiment,
    summarize,
    write_rows_csv,
    write_summary_csv,
)
from .metrics import MetricsReport, ReductionReport, measure, reductions
from .model import (
    CapabilityMap,
    ContractError,
    LightForest,
    LightTree,
    MulticastSession,
    RoutingState,
    ValidationReport,
    attach_path,
    new_state,
    tree_distance,
    validate_forest,
)
from .oracle import OracleBudget, brute_scp, spt_delay_lower_bound
from .routing import (
    ALGORITHMS,
    ScpResult,
    UnreachableDestinationError,
    assign_priorities,
    candidate_connectors,
    candidate_destinations,
    route,
    route_distance_priority,
    route_member_only,
    scp,
    select_connector,
    select_destination,
)
from .topology import (
    BUNDLED_TOPOLOGIES,
    DistanceMap,
    Topology,
    TopologyParseError,
    bundled_topology,
    constrained_distances,
    extract_path,
    load_topology,
    parse_topology,
    shortest_distances,
)

__version__ = "0.1.0"
