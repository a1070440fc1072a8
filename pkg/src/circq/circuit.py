"""One object holding a circuit from netlist to spectrum."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

from circq.diag import HierarchySpec, SpectrumResult, eigenvals, hierarchical_eigenvals
from circq.errors import CircuitError
from circq.netlist import CircuitGraph, parse_netlist, read_netlist
from circq.operators import AssembledHamiltonian, BasisSpec, assemble, default_basis
from circq.symham import SymbolicHamiltonian, build_hamiltonian, render
from circq.topology import IslandReport, SpanningTree, detect_islands, spanning_tree
from circq.transform import Transformation, apply_user_transformation, build_transformation


@dataclass(frozen=True)
class Circuit:
    """Graph, spanning tree, transformation and symbolic Hamiltonian, plus basis settings.

    Examples
    --------
    >>> c = Circuit.from_text('branches:\\n- [C, 0, 1, 0.25]\\n- [JJ, 0, 1, 10.0, 1.0e6]')
    >>> [cls.value for cls in c.transformation.classes]
    ['periodic']
    """

    graph: CircuitGraph
    tree: SpanningTree
    islands: IslandReport
    transformation: Transformation
    hamiltonian: SymbolicHamiltonian
    cutoff_charge: int | tuple[int, ...] = 10
    ext_basis: str = "harmonic"
    cutoff_ext: int | tuple[int, ...] = 30
    grid_width: float = 6 * math.pi
    stencil: int = 3
    closure: tuple[int, ...] | None = field(default=None, repr=False)

    @classmethod
    def from_graph(
        cls,
        graph: CircuitGraph,
        closure: Sequence[int] | None = None,
        transformation=None,
        offsets: Mapping | None = None,
        **basis_options,
    ) -> Circuit:
        """Run the symbolic pipeline.

        ``transformation`` is either a :class:`Transformation` (reused as is) or
        a user matrix with rows indexed by nodes 1..N.
        """
        tree = spanning_tree(graph, closure)
        islands = detect_islands(graph)
        if transformation is None:
            trans = build_transformation(graph, islands)
        elif isinstance(transformation, Transformation):
            trans = transformation
        else:
            trans = apply_user_transformation(graph, transformation)
        ham = build_hamiltonian(graph, tree, trans, offsets)
        closure_t = tuple(closure) if closure else None
        return cls(graph, tree, islands, trans, ham, closure=closure_t, **basis_options)

    @classmethod
    def from_text(cls, text: str, **kwargs) -> Circuit:
        return cls.from_graph(parse_netlist(text), **kwargs)

    @classmethod
    def from_file(cls, path: str | Path, **kwargs) -> Circuit:
        return cls.from_graph(read_netlist(path), **kwargs)

    def configure(self, **basis_options) -> Circuit:
        return replace(self, **basis_options)

    def basis(self) -> tuple[BasisSpec, ...]:
        return default_basis(
            self.hamiltonian, self.cutoff_charge, self.ext_basis, self.cutoff_ext, self.grid_width, self.stencil
        )

    def render(self, precision: int = 3, note: bool = False) -> str:
        return render(self.hamiltonian, precision, note)

    def assemble(self, params: Mapping[str, float] | None = None) -> AssembledHamiltonian:
        return assemble(self.hamiltonian, self.basis(), params)

    def eigenvals(
        self,
        k: int = 6,
        params: Mapping[str, float] | None = None,
        hierarchy: HierarchySpec | None = None,
        vectors: bool = False,
    ) -> SpectrumResult:
        if hierarchy is not None:
            return hierarchical_eigenvals(self.hamiltonian, self.basis(), params, hierarchy, k)
        return eigenvals(self.assemble(params), k, vectors=vectors)

    def parameter_kind(self, name: str) -> str:
        """``"flux"``, ``"offset"`` or ``"element"``; unknown names raise."""
        ham = self.hamiltonian
        if name in ham.flux_symbols or (name.startswith("Phi") and "Φ" + name[3:] in ham.flux_symbols):
            return "flux"
        if name in ham.offset_defaults:
            return "offset"
        if name in self.graph.param_names:
            return "element"
        known = list(ham.flux_symbols) + list(ham.offset_defaults) + list(self.graph.param_names)
        raise CircuitError(f"unknown parameter {name!r} (known: {', '.join(known) or 'none'})")

    def with_params(self, values: Mapping[str, float]) -> Circuit:
        """Rebind named element parameters, keeping tree and transformation."""
        graph = self.graph.with_params(values)
        tree = spanning_tree(graph, self.closure)
        ham = build_hamiltonian(graph, tree, self.transformation, dict(self.hamiltonian.offset_defaults))
        return replace(self, graph=graph, tree=tree, hamiltonian=ham)
