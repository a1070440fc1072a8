import warnings
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings

from circuits import FROZEN_CHAIN, JJ_C_CHAIN, KITE, KITE_TRANSFORM, SEVEN_NODE, SHUNTED_TRANSMON, ZERO_PI
from circq.errors import TransformationError
from circq.netlist import parse_netlist
from circq.topology import detect_islands, spanning_tree
from circq.transform import (
    TransformationWarning,
    VariableClass,
    apply_user_transformation,
    branch_differences,
    build_node_capacitance,
    build_transformation,
    classify_column,
    parse_matrix,
    transformed_capacitance,
)
from oracles import classify_numerically
from strategies import circuits

P, E, FREE, FROZEN = VariableClass.PERIODIC, VariableClass.EXTENDED, VariableClass.FREE, VariableClass.FROZEN


def test_parallel_capacitances_add():
    C = build_node_capacitance(parse_netlist(SHUNTED_TRANSMON))
    assert C == sp.Matrix([[sp.Rational(1, 1) / sp.Rational(1, 4) + 5]])


def test_tridiagonal_chain():
    g = parse_netlist("branches:\n- [C, 0, 1, 0.5]\n- [C, 1, 2, 0.25]\n")
    assert build_node_capacitance(g) == sp.Matrix([[6, -4], [-4, 4]])


def test_transmon_is_periodic():
    t = build_transformation(parse_netlist(SHUNTED_TRANSMON))
    assert t.Z == sp.Matrix([[1]]) and t.classes == (P,)


def test_seven_node_circuit_has_one_of_each_special_class():
    g = parse_netlist(SEVEN_NODE)
    t = build_transformation(g)
    assert t.counts() == {FREE: 1, FROZEN: 1, P: 1, E: 4}
    assert list(t.Z[:, 0]) == [1, 1, 0, 0, 0, 0, 0]
    assert list(t.Z[:, 1]) == [0, 0, 0, 1, 0, 0, 0]
    assert list(t.Z[:, 2]) == [0, 0, 1, 0, 0, 1, 0]


def test_zero_pi_classes():
    t = build_transformation(parse_netlist(ZERO_PI))
    assert t.classes == (FREE, P, E, E)


def test_kite_user_matrix():
    g = parse_netlist(KITE)
    Z = [[Fraction(x, 4) for x in row] for row in KITE_TRANSFORM]
    t = apply_user_transformation(g, Z)
    assert t.counts()[E] == 3 and t.counts()[FREE] == 1
    assert t.classes[3] is FREE


def test_user_identity_and_singular():
    g = parse_netlist(SHUNTED_TRANSMON)
    assert apply_user_transformation(g, [[1]]).classes == (P,)
    with pytest.raises(TransformationError, match="singular"):
        apply_user_transformation(parse_netlist(JJ_C_CHAIN), [[1, 0], [0, 0]])
    with pytest.raises(TransformationError, match="2x2"):
        apply_user_transformation(parse_netlist(JJ_C_CHAIN), [[1]])


def test_non_integer_junction_difference_demotes_to_extended():
    g = parse_netlist(JJ_C_CHAIN)
    with pytest.warns(TransformationWarning, match="non-integer"):
        assert classify_column(g, [Fraction(1, 2), Fraction(1, 2)]) is E


def test_frozen_row_of_transformed_capacitance_vanishes():
    g = parse_netlist(FROZEN_CHAIN)
    t = build_transformation(g)
    Ct = transformed_capacitance(g, t)
    i = t.indices(FROZEN)[0]
    assert all(x == 0 for x in Ct[i, :]) and all(x == 0 for x in Ct[:, i])
    assert transformed_capacitance(g, sp.eye(2)) == build_node_capacitance(g)


def test_parse_matrix_formats():
    assert parse_matrix('[[1, 0.5], ["1/3", 2]]') == [[1, Fraction(1, 2)], [Fraction(1, 3), 2]]
    assert parse_matrix("# Z\n-1/4, 3/4\n0.25,1\n") == [[Fraction(-1, 4), Fraction(3, 4)], [Fraction(1, 4), 1]]
    with pytest.raises(TransformationError):
        parse_matrix("a, b\n")


def _check_invariants(graph, t):
    Z = sp.Matrix(t.Z)
    assert Z.det() != 0
    for i, cls in enumerate(t.classes):
        d = branch_differences(graph, list(Z[:, i]))
        if cls in (P, FREE):
            assert all(x == 0 for x in d[next(k for k in d if k.value == "L")])
        if cls is FREE:
            assert all(x == 0 for k in d if k.value == "JJ" for x in d[k])
        if cls is P:
            assert all(x.is_integer for k in d if k.value == "JJ" for x in d[k])
        if cls is FROZEN:
            assert all(x == 0 for k in d if k.value in ("C", "JJ") for x in d[k])


@settings(max_examples=80, deadline=None)
@given(circuits(max_nodes=5, max_extra=3))
def test_built_transformation_invariants(graph):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TransformationWarning)
        r = detect_islands(graph)
        t = build_transformation(graph, r)
    _check_invariants(graph, t)
    counts = t.counts()
    assert counts[P] == len(r.superconducting_islands)
    assert counts[FREE] == len(r.isolated_islands) + (1 if r.floating else 0)
    assert counts[FROZEN] == len(r.inductive_islands)
    order = [c for c in t.classes]
    rank = {FREE: 0, FROZEN: 1, P: 2, E: 3}
    assert order == sorted(order, key=rank.get)


@settings(max_examples=40, deadline=None)
@given(circuits(max_nodes=4, max_extra=2))
def test_classes_agree_with_numerical_symmetry_oracle(graph):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TransformationWarning)
        t = build_transformation(graph)
    tree = spanning_tree(graph)
    found = classify_numerically(graph, tree, np.array(t.Z.tolist(), dtype=float), np.random.default_rng(0))
    assert found == [c.value for c in t.classes]


@settings(max_examples=60, deadline=None)
@given(circuits(max_nodes=5))
def test_transformed_capacitance_is_symmetric_psd(graph):
    t = build_transformation(graph)
    Ct = np.array(transformed_capacitance(graph, t).tolist(), dtype=float)
    assert np.allclose(Ct, Ct.T)
    assert np.linalg.eigvalsh(Ct).min() > -1e-9
