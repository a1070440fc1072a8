"""Spanning trees, closure branches, fundamental loops and subcircuit islands."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

from circq.errors import TopologyError
from circq.netlist import Branch, BranchKind, CircuitGraph, _components

C, L, JJ = BranchKind.CAPACITANCE, BranchKind.INDUCTANCE, BranchKind.JOSEPHSON_JUNCTION


def reference_node(graph: CircuitGraph) -> int:
    """Ground for grounded circuits; the lowest node of a floating circuit."""
    if graph.grounded:
        return 0
    return min(n for b in graph.branches for n in b.nodes)


@dataclass(frozen=True)
class SpanningTree:
    """Partition of branches into tree and closure branches.

    Only inductive closure branches (L or JJ) carry an external-flux symbol: a
    static flux through a loop closed by a capacitance never enters the
    Lagrangian.
    """

    graph: CircuitGraph
    root: int
    tree_branches: frozenset[int]
    closure_branches: tuple[int, ...]
    flux_assignment: Mapping[int, str]
    node_path: Mapping[int, tuple[int, ...]]
    _parent: Mapping[int, tuple[int, int]] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "flux_assignment", MappingProxyType(dict(self.flux_assignment)))
        object.__setattr__(self, "node_path", MappingProxyType(dict(self.node_path)))
        object.__setattr__(self, "_parent", MappingProxyType(dict(self._parent)))

    @property
    def flux_symbols(self) -> tuple[str, ...]:
        return tuple(self.flux_assignment[b] for b in self.closure_branches if b in self.flux_assignment)


def _adjacency(graph: CircuitGraph, skip: set[int]) -> dict[int, list[Branch]]:
    adj: dict[int, list[Branch]] = {}
    for b in sorted(graph.branches, key=lambda b: b.id):
        if b.id in skip:
            continue
        adj.setdefault(b.node_a, []).append(b)
        adj.setdefault(b.node_b, []).append(b)
    return adj


def _bfs(graph: CircuitGraph, root: int, skip: set[int]):
    adj = _adjacency(graph, skip)
    parent = {root: None}
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for b in adj.get(node, []):
            nxt = b.other(node)
            if nxt not in parent:
                parent[nxt] = (b.id, node)
                queue.append(nxt)
    return parent


def spanning_tree(graph: CircuitGraph, preferred_closure: Sequence[int] | None = None) -> SpanningTree:
    """Breadth-first spanning tree from the reference node.

    Branches are visited in ascending id order, so among parallel branches the
    lowest id joins the tree.  Branches listed in ``preferred_closure`` are kept
    out of the tree and come first in the closure order; the remaining closure
    branches follow in ascending id order.
    """
    preferred = list(preferred_closure or [])
    ids = {b.id for b in graph.branches}
    for bid in preferred:
        if bid not in ids:
            raise TopologyError(f"closure branch {bid} does not exist")
    if len(set(preferred)) != len(preferred):
        raise TopologyError("closure branches listed more than once")

    root = reference_node(graph)
    nodes = {n for b in graph.branches for n in b.nodes}
    parent = _bfs(graph, root, set(preferred))
    if set(parent) != nodes:
        for i, bid in enumerate(preferred):
            if set(_bfs(graph, root, set(preferred[: i + 1]))) != nodes:
                raise TopologyError(f"removing closure branch {bid} disconnects the circuit")
        raise TopologyError("preferred closure set disconnects the circuit")  # pragma: no cover

    tree = frozenset(p[0] for p in parent.values() if p is not None)
    rest = sorted(ids - tree - set(preferred))
    closure = tuple(preferred) + tuple(rest)
    flux = {}
    for bid in closure:
        if graph.branch(bid).kind is not C:
            flux[bid] = f"Φ{len(flux) + 1}"

    paths = {}
    for n in nodes:
        path, cur = [], n
        while parent[cur] is not None:
            path.append(parent[cur][0])
            cur = parent[cur][1]
        paths[n] = tuple(reversed(path))
    tparent = {n: p for n, p in parent.items() if p is not None}
    return SpanningTree(graph, root, tree, closure, flux, paths, tparent)


def _path_to_root(tree: SpanningTree, node: int) -> list[int]:
    out = [node]
    while node in tree._parent:
        node = tree._parent[node][1]
        out.append(node)
    return out


def _tree_path(tree: SpanningTree, u: int, v: int) -> list[tuple[int, int, int]]:
    """Tree walk u -> v as (from, to, branch id) steps."""
    up = _path_to_root(tree, u)
    vp = _path_to_root(tree, v)
    common = set(up) & set(vp)
    lca = next(n for n in up if n in common)
    steps = []
    for n in up[: up.index(lca)]:
        bid, p = tree._parent[n]
        steps.append((n, p, bid))
    down = []
    for n in vp[: vp.index(lca)]:
        bid, p = tree._parent[n]
        down.append((p, n, bid))
    return steps + down[::-1]


def fundamental_loop(tree: SpanningTree, closure_id: int) -> tuple[int, ...]:
    """Node cycle closed by ``closure_id``: node_a, node_b, then the tree path back to node_a."""
    return tuple(n for n, _ in _loop_steps(tree, closure_id)) + (tree.graph.branch(closure_id).node_a,)


def loop_branches(tree: SpanningTree, closure_id: int) -> list[tuple[int, int]]:
    """Branches of the fundamental loop as (branch id, ±1) relative to the loop orientation."""
    out = []
    for n, (bid, nxt) in _loop_steps(tree, closure_id):
        b = tree.graph.branch(bid)
        out.append((bid, 1 if (b.node_a, b.node_b) == (n, nxt) else -1))
    return out


def _loop_steps(tree: SpanningTree, closure_id: int):
    if closure_id not in tree.closure_branches:
        raise TopologyError(f"branch {closure_id} is not a closure branch")
    b = tree.graph.branch(closure_id)
    steps = [(b.node_a, (closure_id, b.node_b))]
    for frm, to, bid in _tree_path(tree, b.node_b, b.node_a):
        steps.append((frm, (bid, to)))
    return steps


@dataclass(frozen=True)
class IslandReport:
    """Subcircuits that give rise to periodic, free and frozen variables.

    ``floating`` marks an ungrounded circuit: its uniform shift of all node
    fluxes is an extra free variable not listed in ``isolated_islands``.  Islands
    are computed relative to ``reference``, which plays the role of ground.
    ``pruned`` lists superconducting islands dropped because they tile an
    isolated island together with the islands that were kept.
    """

    superconducting_islands: tuple[frozenset[int], ...]
    isolated_islands: tuple[frozenset[int], ...]
    inductive_islands: tuple[frozenset[int], ...]
    floating: bool = False
    reference: int = 0
    pruned: tuple[frozenset[int], ...] = ()


def boundary(graph: CircuitGraph, island: set[int] | frozenset[int]) -> list[Branch]:
    return [b for b in graph.branches if (b.node_a in island) != (b.node_b in island)]


def _islands(graph: CircuitGraph, ref: int, kinds, accept) -> list[frozenset[int]]:
    nodes = {n for b in graph.branches for n in b.nodes}
    comps = _components(nodes, [b for b in graph.branches if b.kind in kinds])
    found = []
    for comp in comps:
        if ref in comp:
            continue
        edge_kinds = {b.kind for b in boundary(graph, comp)}
        if accept(edge_kinds):
            found.append(frozenset(comp))
    return found


def detect_islands(graph: CircuitGraph) -> IslandReport:
    """Find superconducting, isolated and purely inductively coupled islands.

    Each class is computed as the connected components of a filtered graph,
    so islands are irreducible by construction:

    * superconducting: components of the L-only graph whose boundary holds at
      least one JJ and no L;
    * isolated: components of the (L, JJ) graph whose boundary is all C;
    * inductive: components of the (C, JJ) graph whose boundary is all L.

    An isolated island made of several L-only components is tiled exactly by
    superconducting islands, whose indicator vectors then sum to the isolated
    island's; the last of them is pruned to keep the variables independent.
    """
    ref = reference_node(graph)
    sc = _islands(graph, ref, {L}, lambda k: JJ in k and L not in k)
    iso = _islands(graph, ref, {L, JJ}, lambda k: bool(k) and k <= {C})
    ind = _islands(graph, ref, {C, JJ}, lambda k: bool(k) and k <= {L})

    pruned = []
    for island in iso:
        inside = [s for s in sc if s <= island]
        if len(inside) > 1:
            pruned.append(inside[-1])
    sc = [s for s in sc if s not in pruned]
    return IslandReport(tuple(sc), tuple(iso), tuple(ind), not graph.grounded, ref, tuple(pruned))
