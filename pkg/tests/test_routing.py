from fractions import Fraction

import pytest

from lightforest import (
    CapabilityMap,
    ContractError,
    MulticastSession,
    UnreachableDestinationError,
    assign_priorities,
    bundled_topology,
    candidate_connectors,
    candidate_destinations,
    measure,
    new_state,
    attach_path,
    parse_topology,
    route,
    route_distance_priority,
    route_member_only,
    scp,
    select_connector,
    select_destination,
    validate_forest,
)


def _state_after(topo, caps, session, paths):
    state = new_state(topo, caps, session)
    for path in paths:
        attach_path(state, caps, path)
    return state


class TestScp:
    def test_f1_avoiding_blocked_interior(self, f1):
        caps = CapabilityMap.with_mc(6, [1])
        state = _state_after(f1, caps, MulticastSession(1, (4, 5, 6)), [[1, 2, 5]])
        res = scp(state, f1, 4)
        assert res.dist == 2
        assert res.connectors == (5,)
        assert res.path_to[5] == [4, 6, 5]

    def test_bare_tree_is_plain_shortest_path(self, f1):
        caps = CapabilityMap.with_mc(6, [1])
        state = new_state(f1, caps, MulticastSession(1, (4, 5, 6)))
        res = scp(state, f1, 4)
        assert res.dist == 3 and res.connectors == (1,)
        assert res.path_to[1] == [4, 3, 2, 1]

    def test_blocked_everywhere_returns_none(self, f2):
        caps = CapabilityMap.all_mi(6)
        state = _state_after(f2, caps, MulticastSession(1, (4, 5)), [[1, 2, 5]])
        assert state.mi_set == {1, 2}
        assert scp(state, f2, 4) is None

    def test_served_destination_rejected(self, f1):
        caps = CapabilityMap.with_mc(6, [1])
        state = new_state(f1, caps, MulticastSession(1, (4, 5, 6)))
        with pytest.raises(ValueError):
            scp(state, f1, 1)


class TestPriorities:
    def test_f1_order(self, f1):
        prio = assign_priorities(f1, MulticastSession(1, (4, 5, 6)))
        assert prio == {5: 2, 4: 3, 6: 3}
        ordered = sorted(prio, key=lambda d: (prio[d], d))
        assert ordered == [5, 4, 6]

    def test_single_destination(self, f1):
        assert assign_priorities(f1, MulticastSession(1, (3,))) == {3: 2}

    def test_all_adjacent_ranks_by_id(self, f1):
        prio = assign_priorities(f1, MulticastSession(2, (1, 3, 5)))
        assert prio == {1: 1, 3: 1, 5: 1}
        assert sorted(prio, key=lambda d: (prio[d], d)) == [1, 3, 5]

    def test_unreachable_destination_flagged(self):
        topo = parse_topology("nodes 3\nedge 1 2")
        with pytest.raises(UnreachableDestinationError):
            assign_priorities(topo, MulticastSession(1, (3,)))


class TestCandidates:
    def test_initial_candidates_f1(self, f1):
        caps = CapabilityMap.with_mc(6, [1])
        state = new_state(f1, caps, MulticastSession(1, (4, 5, 6)))
        assert candidate_destinations(state, f1) == [5]

    def test_tied_candidates_f1(self, f1):
        caps = CapabilityMap.with_mc(6, [1])
        state = new_state(f1, caps, MulticastSession(1, (4, 6)))
        assert candidate_destinations(state, f1) == [4, 6]

    def test_no_reachable_candidates(self, f2):
        caps = CapabilityMap.all_mi(6)
        state = _state_after(f2, caps, MulticastSession(1, (4, 5)), [[1, 2, 5]])
        assert candidate_destinations(state, f2) == []

    def test_select_destination_id_tiebreak(self):
        assert select_destination([4, 6], {4: 3, 6: 3}) == 4

    def test_select_destination_singleton(self):
        assert select_destination([5], {5: 2}) == 5

    def test_select_destination_strict_priority(self):
        assert select_destination([9, 12], {9: 4, 12: 3}) == 12

    def test_select_destination_empty_is_contract_error(self):
        with pytest.raises(ContractError):
            select_destination([], {})


class TestConnectors:
    def test_two_connectors_on_f1p(self, f1p):
        caps = CapabilityMap.with_mc(6, [1])
        state = _state_after(f1p, caps, MulticastSession(1, (4, 6)),
                             [[1, 2, 3, 4]])
        assert state.mc_set == {1, 4} and state.mi_set == {2, 3}
        assert candidate_connectors(state, f1p, 6) == [1, 4]
        assert select_connector(state, [1, 4]) == 1  # depth 0 beats depth 3

    def test_bare_tree_connector_is_source(self, f1):
        caps = CapabilityMap.with_mc(6, [1])
        state = new_state(f1, caps, MulticastSession(1, (4, 5, 6)))
        assert candidate_connectors(state, f1, 5) == [1]

    def test_f1_mid_run_connector(self, f1):
        caps = CapabilityMap.with_mc(6, [1])
        state = _state_after(f1, caps, MulticastSession(1, (4, 5, 6)), [[1, 2, 5]])
        assert candidate_connectors(state, f1, 4) == [5]

    def test_equal_depth_breaks_by_id(self, f1):
        caps = CapabilityMap.all_mc(6)
        state = _state_after(f1, caps, MulticastSession(1, (2, 3, 5)),
                             [[1, 2], [2, 3], [2, 5]])
        assert state.tree.depth[3] == state.tree.depth[5] == 2
        assert select_connector(state, [5, 3]) == 3

    def test_empty_connectors_is_contract_error(self, f1):
        caps = CapabilityMap.with_mc(6, [1])
        state = new_state(f1, caps, MulticastSession(1, (4,)))
        with pytest.raises(ContractError):
            select_connector(state, [])


class TestRouteDistancePriority:
    def test_f1_single_tree(self, f1):
        caps = CapabilityMap.with_mc(6, [1])
        session = MulticastSession(1, (4, 5, 6))
        forest = route_distance_priority(f1, caps, session)
        assert len(forest.trees) == 1
        tree = forest.trees[0]
        assert set(tree.edges()) == {(1, 2), (2, 5), (5, 6), (4, 6)}
        assert {d: tree.depth[d] for d in (5, 6, 4)} == {5: 2, 6: 3, 4: 4}
        assert validate_forest(forest, f1, caps, session).ok

    def test_f2_forest_fallback(self, f2):
        caps = CapabilityMap.all_mi(6)
        session = MulticastSession(1, (4, 5))
        forest = route_distance_priority(f2, caps, session)
        assert [sorted(t.edges()) for t in forest.trees] == [
            [(1, 2), (2, 5)],
            [(1, 2), (2, 3), (3, 4)],
        ]
        report = measure(forest, session)
        assert report.link_stress == 2 and report.total_cost == 5

    def test_destination_order_never_matters(self, f1):
        caps = CapabilityMap.all_mi(6)
        a = route_distance_priority(f1, caps, MulticastSession(1, (4, 5, 6)))
        b = route_distance_priority(f1, caps, MulticastSession(1, (6, 5, 4)))
        assert [sorted(t.edges()) for t in a.trees] == [sorted(t.edges()) for t in b.trees]
        assert a.served == b.served

    def test_unreachable_destination_names_node(self):
        topo = parse_topology("nodes 4\nedge 1 2\nedge 3 4")
        caps = CapabilityMap.all_mc(4)
        with pytest.raises(UnreachableDestinationError) as exc:
            route_distance_priority(topo, caps, MulticastSession(1, (2, 4)))
        assert exc.value.node == 4

    def test_dispatch_by_name(self, f1):
        caps = CapabilityMap.with_mc(6, [1])
        session = MulticastSession(1, (4, 5, 6))
        a = route(f1, caps, session, "dp")
        b = route_distance_priority(f1, caps, session)
        assert [sorted(t.edges()) for t in a.trees] == [sorted(t.edges()) for t in b.trees]
        with pytest.raises(ValueError):
            route(f1, caps, session, "rts")


class TestRouteMemberOnly:
    def test_f1_same_tree_as_dp(self, f1):
        caps = CapabilityMap.with_mc(6, [1])
        session = MulticastSession(1, (4, 5, 6))
        mo = route_member_only(f1, caps, session)
        dp = route_distance_priority(f1, caps, session)
        assert sorted(mo.trees[0].edges()) == sorted(dp.trees[0].edges())

    def test_single_destination_is_shortest_path(self, f1):
        caps = CapabilityMap.all_mi(6)
        session = MulticastSession(1, (4,))
        mo = route_member_only(f1, caps, session)
        dp = route_distance_priority(f1, caps, session)
        assert sorted(mo.trees[0].edges()) == sorted(dp.trees[0].edges()) == [
            (1, 2), (2, 3), (3, 4),
        ]

    def test_outputs_always_validate(self, f1p):
        caps = CapabilityMap.with_mc(6, [1])
        session = MulticastSession(1, (4, 6))
        mo = route_member_only(f1p, caps, session)
        assert validate_forest(mo, f1p, caps, session).ok


NSF_DESTS = tuple(d for d in range(1, 13) if d != 2)


class TestReferenceNetworkSession:
    """Broadcast-style session on the 14-node reference network, source 2,
    members 1..12, with the source as the only splitter."""

    def test_dp_golden_metrics(self):
        topo = bundled_topology("nsf")
        caps = CapabilityMap.with_mc(14, [2])
        session = MulticastSession(2, NSF_DESTS)
        forest = route_distance_priority(topo, caps, session)
        report = measure(forest, session)
        assert report.diameter == 5
        assert report.average_delay == Fraction(27, 11)
        assert report.total_cost == 11
        assert report.link_stress == 1
        assert report.num_trees == 1

    def test_dp_step_trace(self):
        topo = bundled_topology("nsf")
        caps = CapabilityMap.with_mc(14, [2])
        session = MulticastSession(2, NSF_DESTS)
        steps = []
        route_distance_priority(topo, caps, session, observer=steps.append)
        trace = [(s.candidates, s.destination, s.connectors, s.connector) for s in steps]
        assert trace == [
            ((1, 3, 4), 1, (2,), 2),
            ((3, 4, 8), 3, (1, 2), 2),
            ((4, 6, 8), 4, (2,), 2),
            ((5, 6, 8, 9), 5, (4,), 4),
            ((6, 7, 8), 6, (3, 5), 3),
            ((7, 8, 11), 8, (1,), 1),
            ((7, 10, 11), 7, (5, 8), 5),
            ((10, 11), 10, (8,), 8),
            ((11, 12), 11, (6, 10), 6),
            ((12,), 12, (10,), 10),
            ((9,), 9, (12,), 12),
        ]

    def test_mo_frozen_metrics(self):
        # The baseline's arbitrary choices are pinned to smallest-id here;
        # these are the resulting values on this instance.
        topo = bundled_topology("nsf")
        caps = CapabilityMap.with_mc(14, [2])
        session = MulticastSession(2, NSF_DESTS)
        forest = route_member_only(topo, caps, session)
        report = measure(forest, session)
        assert report.average_delay == Fraction(38, 11)
        assert report.diameter == 7
        assert report.total_cost == 11
        assert report.link_stress == 1
        assert report.num_trees == 1

    def test_dp_dominates_mo_here(self):
        topo = bundled_topology("nsf")
        caps = CapabilityMap.with_mc(14, [2])
        session = MulticastSession(2, NSF_DESTS)
        dp = measure(route_distance_priority(topo, caps, session), session)
        mo = measure(route_member_only(topo, caps, session), session)
        assert dp.diameter <= mo.diameter
        assert dp.average_delay <= mo.average_delay
        assert dp.total_cost == mo.total_cost
