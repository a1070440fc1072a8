"""Hypothesis strategies for small random circuits."""

from fractions import Fraction

from hypothesis import strategies as st

from circq.netlist import Branch, BranchKind, CircuitGraph

ENERGIES = st.fractions(min_value=Fraction(1, 10), max_value=Fraction(20), max_denominator=40)


@st.composite
def branches_for(draw, kind):
    if kind is BranchKind.JOSEPHSON_JUNCTION:
        return {"EJ": draw(ENERGIES), "ECJ": draw(ENERGIES)}
    return {"EC" if kind is BranchKind.CAPACITANCE else "EL": draw(ENERGIES)}


@st.composite
def circuits(draw, max_nodes=5, max_extra=3, grounded=None):
    """Connected graphs: a random tree plus a few extra branches."""
    n = draw(st.integers(2, max_nodes))
    ground = draw(st.booleans()) if grounded is None else grounded
    first = 0 if ground else 1
    nodes = list(range(first, first + n))
    pairs = [(nodes[draw(st.integers(0, i - 1))], nodes[i]) for i in range(1, n)]
    for _ in range(draw(st.integers(0, max_extra))):
        a, b = draw(st.sampled_from(nodes)), draw(st.sampled_from(nodes))
        if a != b:
            pairs.append((min(a, b), max(a, b)))
    kinds = list(BranchKind)
    branches = []
    for i, (a, b) in enumerate(pairs, start=1):
        kind = draw(st.sampled_from(kinds))
        branches.append(Branch(i, kind, a, b, draw(branches_for(kind))))
    return CircuitGraph(max(nodes) + 1, tuple(branches))
