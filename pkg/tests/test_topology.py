import pytest
from hypothesis import given, settings

from circuits import FROZEN_CHAIN, JJ_C_CHAIN, KITE, SEVEN_NODE, SHUNTED_TRANSMON, ZERO_PI
from circq.errors import TopologyError
from circq.netlist import parse_netlist
from circq.topology import (
    boundary,
    detect_islands,
    fundamental_loop,
    loop_branches,
    reference_node,
    spanning_tree,
)
from oracles import brute_islands, cycle_space_dimension
from strategies import circuits


def test_transmon_tree():
    t = spanning_tree(parse_netlist(SHUNTED_TRANSMON))
    assert t.tree_branches == {1}
    assert t.closure_branches == (2,)
    assert t.flux_symbols == ("Φ1",)
    assert fundamental_loop(t, 2) == (0, 1, 0)


def test_chain_has_no_loops():
    g = parse_netlist("branches:\n- [L, 0, 1, 1]\n- [C, 1, 2, 1]\n")
    t = spanning_tree(g)
    assert len(t.tree_branches) == 2 and t.closure_branches == ()
    assert t.node_path[2] == (1, 2)


def test_square_of_inductors():
    g = parse_netlist("branches:\n- [L, 0, 1, 1]\n- [L, 1, 2, 1]\n- [L, 2, 3, 1]\n- [L, 3, 0, 1]\n")
    t = spanning_tree(g)
    (c,) = t.closure_branches
    loop = fundamental_loop(t, c)
    assert len(loop) == 5 and loop[0] == loop[-1]
    assert len(set(loop)) == 4


def test_capacitive_closures_carry_no_flux():
    t = spanning_tree(parse_netlist(ZERO_PI))
    assert t.closure_branches == (2, 3, 6)
    assert dict(t.flux_assignment) == {2: "Φ1", 3: "Φ2"}


def test_preferred_closure_and_ordering():
    g = parse_netlist(KITE)
    t = spanning_tree(g, [5, 6])
    assert t.closure_branches[:2] == (5, 6)
    assert t.flux_symbols == ("Φ1", "Φ2")
    for cid in t.closure_branches:
        assert sum(1 for b, _ in loop_branches(t, cid) if b in t.closure_branches) == 1


def test_preferred_closure_that_disconnects():
    g = parse_netlist("branches:\n- [C, 0, 1, 1]\n- [L, 1, 2, 1]\n- [C, 0, 2, 1]\n")
    with pytest.raises(TopologyError, match="branch 3 disconnects"):
        spanning_tree(g, [1, 3])
    with pytest.raises(TopologyError, match="does not exist"):
        spanning_tree(g, [9])


def test_loop_of_non_closure_rejected():
    t = spanning_tree(parse_netlist(SHUNTED_TRANSMON))
    with pytest.raises(TopologyError, match="not a closure branch"):
        fundamental_loop(t, 1)


def test_loop_signs_sum_to_zero_flux():
    # orientation signs make the loop sum of node differences vanish identically
    g = parse_netlist(SEVEN_NODE)
    t = spanning_tree(g)
    for cid in t.closure_branches:
        total = {}
        for bid, sign in loop_branches(t, cid):
            b = g.branch(bid)
            total[b.node_b] = total.get(b.node_b, 0) + sign
            total[b.node_a] = total.get(b.node_a, 0) - sign
        assert all(v == 0 for v in total.values())


def test_islands_of_textbook_circuits():
    r = detect_islands(parse_netlist(SHUNTED_TRANSMON))
    assert r.superconducting_islands == ({1},) and r.isolated_islands == () and r.inductive_islands == ()
    r = detect_islands(parse_netlist(JJ_C_CHAIN))
    assert r.superconducting_islands == ({1},) and r.isolated_islands == ({2},)
    r = detect_islands(parse_netlist(FROZEN_CHAIN))
    assert r.inductive_islands == ({1},) and r.superconducting_islands == ()


def test_floating_reference():
    g = parse_netlist(ZERO_PI)
    assert reference_node(g) == 1
    r = detect_islands(g)
    assert r.floating and r.superconducting_islands == ({2, 3},)


def test_pruning_of_tiled_isolated_island():
    # two L-components joined by a junction, coupled to ground by capacitors only
    g = parse_netlist("branches:\n- [C, 0, 1, 1]\n- [JJ, 1, 2, 3, 1]\n- [C, 2, 0, 1]\n")
    r = detect_islands(g)
    assert r.isolated_islands == ({1, 2},)
    assert r.superconducting_islands == ({1},) and r.pruned == ({2},)


@settings(max_examples=80, deadline=None)
@given(circuits(max_nodes=5, max_extra=3))
def test_closure_count_matches_cycle_space(graph):
    t = spanning_tree(graph)
    edges = [b.nodes for b in graph.branches]
    assert len(t.closure_branches) == cycle_space_dimension(edges)
    assert len(t.tree_branches) == graph.num_nodes if graph.grounded else graph.num_nodes - 1
    assert t.tree_branches.isdisjoint(t.closure_branches)
    assert t.tree_branches | set(t.closure_branches) == {b.id for b in graph.branches}


@settings(max_examples=40, deadline=None)
@given(circuits(max_nodes=5, max_extra=3))
def test_every_fundamental_loop_has_one_closure_branch(graph):
    t = spanning_tree(graph)
    for cid in t.closure_branches:
        loop = fundamental_loop(t, cid)
        assert loop[0] == loop[-1]
        ids = [b for b, _ in loop_branches(t, cid)]
        assert [b for b in ids if b in t.closure_branches] == [cid]


@settings(max_examples=40, deadline=None)
@given(circuits(max_nodes=5))
def test_tree_is_deterministic(graph):
    assert spanning_tree(graph) == spanning_tree(graph)


@settings(max_examples=80, deadline=None)
@given(circuits(max_nodes=5, max_extra=3))
def test_islands_match_subset_enumeration(graph):
    r = detect_islands(graph)
    ref = r.reference
    sc = brute_islands(graph, {"L"}, lambda k: "JJ" in k, ref)
    iso = brute_islands(graph, {"L", "JJ"}, lambda k: bool(k) and set(k) <= {"C"}, ref)
    ind = brute_islands(graph, {"C", "JJ"}, lambda k: bool(k) and set(k) <= {"L"}, ref)
    assert sorted(r.superconducting_islands + r.pruned, key=min) == sc
    assert list(r.isolated_islands) == iso
    assert list(r.inductive_islands) == ind


@settings(max_examples=60, deadline=None)
@given(circuits(max_nodes=5, max_extra=3))
def test_island_boundaries(graph):
    r = detect_islands(graph)
    for s in r.superconducting_islands:
        kinds = {b.kind.value for b in boundary(graph, s)}
        assert "JJ" in kinds and "L" not in kinds and r.reference not in s
    for s in r.isolated_islands:
        assert {b.kind.value for b in boundary(graph, s)} == {"C"}
    for s in r.inductive_islands:
        assert {b.kind.value for b in boundary(graph, s)} == {"L"}
    for group in (r.superconducting_islands, r.isolated_islands, r.inductive_islands):
        flat = [n for s in group for n in s]
        assert len(flat) == len(set(flat))
