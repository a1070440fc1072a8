from fractions import Fraction

import pytest
from hypothesis import given, settings

from circuits import KITE, SHUNTED_TRANSMON
from circq.errors import NetlistError
from circq.netlist import Branch, BranchKind, CircuitGraph, parse_netlist, render_netlist, validate
from strategies import circuits


def test_shunted_transmon_parses():
    g = parse_netlist(SHUNTED_TRANSMON)
    assert g.node_count == 2
    assert [b.kind for b in g.branches] == [BranchKind.CAPACITANCE, BranchKind.JOSEPHSON_JUNCTION]
    assert g.branches[1].params == {"EJ": Fraction(10), "ECJ": Fraction(1, 5)}
    assert g.grounded


def test_flow_style_entries_with_quoted_kinds():
    g = parse_netlist('branches: [["C",0,1,EC=0.25],["JJ",0,1,EJ=10.0,ECJ=0.2]]')
    assert len(g.branches) == 2 and g.num_nodes == 1


def test_kite_registers_symbolic_names():
    g = parse_netlist(KITE)
    assert g.node_count == 5
    assert not g.grounded
    assert g.param_names == {
        "EJ": Fraction(59, 10), "ECJ": Fraction(33, 5), "EL1": Fraction(23, 100),
        "EC": Fraction(5, 2), "EL2": Fraction(9, 25),
    }
    assert g.branch(6).symbols == {"EL": "EL2"}


def test_bare_and_named_parameters_mix():
    g = parse_netlist("branches:\n- [JJ, 0, 1, 3.5, ECJ = 1/4]\n")
    assert g.branches[0].params["ECJ"] == Fraction(1, 4)
    assert g.param_names == {"ECJ": Fraction(1, 4)}


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('branches: [["L",0,1,EL=-1]]', "must be positive"),
        ("branches:\n- [X, 0, 1, 1.0]\n", "unknown branch kind"),
        ("branches:\n- [JJ, 0, 1, 1.0]\n", "needs 2 parameter"),
        ("branches:\n- [C, 0, 1, EC=1]\n- [C, 0, 1, EC=2]\n", "conflicting default"),
        ("branches:\n- [C, 0, 1, one]\n", "cannot parse"),
        ("branches:\n- [C, 0, 0, 1.0]\n", "both ends"),
        ("nodes: []\n", "unknown top-level key"),
        ("", "empty netlist"),
        ("branches:\n- [C, 0, 1, 1.0]\n- [C, 2, 3, 1.0]\n", "graph not connected"),
        ("branches:\n- [C, 0, 2, 1.0]\n", "have no branches"),
    ],
)
def test_rejections(text, fragment):
    with pytest.raises(NetlistError, match=fragment):
        parse_netlist(text)


def test_syntax_error_reports_position():
    with pytest.raises(NetlistError) as info:
        parse_netlist("branches:\n- [C, 0, 1, 1.0\n")
    assert info.value.line is not None and info.value.column is not None
    assert str(info.value).startswith(f"line {info.value.line}, column")


def test_parameter_error_points_at_entry():
    with pytest.raises(NetlistError) as info:
        parse_netlist("branches:\n- [C, 0, 1, 1.0]\n- [L, 0, 1, EL=-2]\n")
    assert info.value.line == 3


def test_validate_reports_every_problem():
    g = CircuitGraph(3, (Branch(1, BranchKind.CAPACITANCE, 0, 5, {"EC": Fraction(1)}),))
    assert any("node index 5 out of range" in p for p in validate(g))
    ok = parse_netlist(SHUNTED_TRANSMON)
    assert validate(ok) == []
    split = CircuitGraph(4, (
        Branch(1, BranchKind.CAPACITANCE, 0, 1, {"EC": Fraction(1)}),
        Branch(2, BranchKind.CAPACITANCE, 2, 3, {"EC": Fraction(1)}),
    ))
    assert validate(split) == ["graph not connected"]


def test_junction_without_capacitance_rejected_by_validate():
    g = CircuitGraph(2, (Branch(1, BranchKind.JOSEPHSON_JUNCTION, 0, 1, {"EJ": Fraction(1)}),))
    assert any("requires exactly ['EJ', 'ECJ']" in p for p in validate(g))


def test_with_params_rebinds_every_alias():
    g = parse_netlist(KITE).with_params({"EL2": 0.5})
    assert g.branch(5).params["EL"] == g.branch(6).params["EL"] == Fraction(1, 2)
    with pytest.raises(NetlistError, match="unknown parameter"):
        g.with_params({"nope": 1})


@settings(max_examples=60, deadline=None)
@given(circuits())
def test_render_parse_round_trip(graph):
    again = parse_netlist(render_netlist(graph))
    assert again.node_count == graph.node_count
    assert [(b.kind, b.node_a, b.node_b, dict(b.params)) for b in again.branches] == [
        (b.kind, b.node_a, b.node_b, dict(b.params)) for b in graph.branches
    ]


def test_round_trip_keeps_names():
    g = parse_netlist(KITE)
    again = parse_netlist(render_netlist(g))
    assert again == g
