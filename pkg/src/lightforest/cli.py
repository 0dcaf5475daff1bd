"""Command-line interface: route one session, run experiments, summarize.

Exit codes: 0 success, 1 usage error, 2 topology parse error,
3 unreachable destination or disconnected topology.
"""

from __future__ import annotations

import argparse
import json
import sys

from .dot import forest_to_dot
from .harness import (
    DisconnectedTopologyError,
    ExperimentConfig,
    read_rows_csv,
    resolve_topology,
    run_experiment,
    summarize,
    write_rows_csv,
    write_summary_csv,
)
from .metrics import measure
from .model import CapabilityMap, MulticastSession, validate_forest
from .routing import ALGORITHMS, UnreachableDestinationError, route
from .topology import BUNDLED_TOPOLOGIES, TopologyParseError

EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_UNREACHABLE = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the contract here reserves 2 for parse errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="lightforest",
        description="Multicast light-tree construction in WDM networks "
                    "with sparse light splitting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_route = sub.add_parser(
        "route", help="route one multicast session and print its metrics"
    )
    p_route.add_argument("--topology", required=True,
                         help=f"topology file or bundled name {BUNDLED_TOPOLOGIES}")
    p_route.add_argument("--source", required=True, type=int)
    p_route.add_argument("--members", required=True, type=_int_list,
                         help="comma-separated member ids; the source may be "
                              "listed and is not treated as a destination")
    p_route.add_argument("--mc", required=True,
                         help="comma-separated MC node ids, or 'all' / 'none'")
    p_route.add_argument("--algo", required=True, choices=sorted(ALGORITHMS))
    p_route.add_argument("--dot", metavar="FILE", help="write the forest as DOT")
    p_route.add_argument("--json", action="store_true", help="print metrics as JSON")

    p_exp = sub.add_parser("experiment", help="run the batch protocol, write a CSV")
    p_exp.add_argument("--topology", required=True)
    p_exp.add_argument("--sessions-per-source", type=int, default=100)
    p_exp.add_argument("--group-sizes", required=True, type=_int_list,
                       help="member counts including the source")
    p_exp.add_argument("--mc-counts", required=True, type=_int_list)
    p_exp.add_argument("--algos", type=lambda s: s.split(","), default=["dp", "mo"])
    p_exp.add_argument("--seed", required=True, type=int)
    p_exp.add_argument("--out", required=True)
    p_exp.add_argument("--source", type=int, default=None,
                       help="restrict to one source instead of all nodes")
    p_exp.add_argument("--workers", type=int, default=1)

    p_sum = sub.add_parser("summarize", help="aggregate a result CSV into per-point means")
    p_sum.add_argument("--in", dest="infile", required=True)
    p_sum.add_argument("--out", required=True)
    return parser


def _cmd_route(args) -> int:
    topo = resolve_topology(args.topology)
    destinations = [m for m in args.members if m != args.source]
    if not destinations:
        print("error: no destinations besides the source", file=sys.stderr)
        return EXIT_USAGE
    session = MulticastSession(args.source, tuple(destinations))
    if args.mc == "all":
        caps = CapabilityMap.all_mc(topo.node_count)
    elif args.mc == "none":
        caps = CapabilityMap.all_mi(topo.node_count)
    else:
        caps = CapabilityMap.with_mc(topo.node_count, _int_list(args.mc))
    forest = route(topo, caps, session, args.algo)
    report = validate_forest(forest, topo, caps, session)
    if not report.ok:
        raise RuntimeError(f"internal error, invalid forest: {report.violations}")
    m = measure(forest, session)
    if args.dot:
        with open(args.dot, "w") as f:
            f.write(forest_to_dot(forest, caps))
    if args.json:
        print(json.dumps({
            "topology": topo.name or args.topology,
            "algorithm": args.algo,
            "source": session.source,
            "destinations": list(session.destinations),
            "num_trees": m.num_trees,
            "diameter": m.diameter,
            "average_delay": [m.average_delay.numerator, m.average_delay.denominator],
            "average_delay_decimal": float(m.average_delay),
            "link_stress": m.link_stress,
            "total_cost": m.total_cost,
        }))
    else:
        print(f"topology: {topo.name or args.topology} "
              f"({topo.node_count} nodes, {topo.edge_count} edges)")
        print(f"algorithm: {args.algo}")
        print(f"source: {session.source}")
        print(f"destinations: {','.join(map(str, session.destinations))}")
        print(f"trees (wavelengths): {m.num_trees}")
        print(f"diameter: {m.diameter}")
        print(f"average delay: {m.average_delay} ({float(m.average_delay):.6g})")
        print(f"link stress: {m.link_stress}")
        print(f"total cost: {m.total_cost}")
    return 0


def _cmd_experiment(args) -> int:
    config = ExperimentConfig(
        topology=args.topology,
        group_sizes=tuple(args.group_sizes),
        mc_counts=tuple(args.mc_counts),
        seed=args.seed,
        algorithms=tuple(args.algos),
        sessions_per_source=args.sessions_per_source,
        sources=(args.source,) if args.source is not None else None,
        workers=args.workers,
    )
    rows = run_experiment(config)
    write_rows_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_summarize(args) -> int:
    rows = read_rows_csv(args.infile)
    points = summarize(rows)
    write_summary_csv(points, args.out)
    print(f"wrote {len(points)} summary points to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "route":
            return _cmd_route(args)
        if args.command == "experiment":
            return _cmd_experiment(args)
        return _cmd_summarize(args)
    except TopologyParseError as exc:
        print(f"topology parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UnreachableDestinationError, DisconnectedTopologyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
