"""Quantize lumped-element superconducting circuits and compute their spectra.

Typical use::

    from circq import Circuit
    c = Circuit.from_text(netlist_text, cutoff_charge=15)
    print(c.render())
    print(c.eigenvals(k=4).eigenvalues)
"""

from circq.circuit import Circuit
from circq.diag import HierarchySpec, SpectrumResult, SpectrumTable, eigenvals, hierarchical_eigenvals, sweep
from circq.errors import (
    BasisError,
    CircuitError,
    ConvergenceError,
    HamiltonianError,
    NetlistError,
    TopologyError,
    TransformationError,
)
from circq.netlist import Branch, BranchKind, CircuitGraph, parse_netlist, read_netlist, render_netlist, validate
from circq.operators import Charge, Grid, Harmonic, assemble, charge_ops, default_basis, grid_ops, harmonic_ops
from circq.symham import SymbolicHamiltonian, build_hamiltonian, render
from circq.topology import IslandReport, SpanningTree, detect_islands, fundamental_loop, spanning_tree
from circq.transform import (
    Transformation,
    VariableClass,
    apply_user_transformation,
    build_node_capacitance,
    build_transformation,
    transformed_capacitance,
)

__version__ = "0.1.0"

__all__ = [
    "BasisError", "Branch", "BranchKind", "Charge", "Circuit", "CircuitError", "CircuitGraph",
    "ConvergenceError", "Grid", "HamiltonianError", "Harmonic", "HierarchySpec", "IslandReport",
    "NetlistError", "SpanningTree", "SpectrumResult", "SpectrumTable", "SymbolicHamiltonian",
    "TopologyError", "Transformation", "TransformationError", "VariableClass",
    "apply_user_transformation", "assemble", "build_hamiltonian", "build_node_capacitance",
    "build_transformation", "charge_ops", "default_basis", "detect_islands", "eigenvals",
    "fundamental_loop", "grid_ops", "harmonic_ops", "hierarchical_eigenvals", "parse_netlist",
    "read_netlist", "render", "render_netlist", "spanning_tree", "sweep", "transformed_capacitance",
    "validate",
]
