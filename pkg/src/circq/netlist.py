"""Circuit data model and the YAML-subset netlist format.

A netlist looks like::

    # transmon
    branches:
    - [C, 0, 1, EC=0.25]
    - [JJ, 0, 1, EJ=10.0, 0.2]

Each entry is ``[KIND, node_a, node_b, P1, (P2)]``.  KIND is ``C``, ``L`` or
``JJ``; a parameter is a bare number or ``NAME = number``, which registers a
symbolic name that later sweeps can rebind.  All energies are in GHz:
``EC = e^2/2C``, ``EL = (Phi_0/2pi)^2/L``, and for junctions ``EJ`` followed by
the junction charging energy ``ECJ``.  Node 0 is ground.  A netlist whose
branches never touch node 0 describes a floating (ungrounded) circuit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

import yaml

from circq.errors import NetlistError


class BranchKind(Enum):
    CAPACITANCE = "C"
    INDUCTANCE = "L"
    JOSEPHSON_JUNCTION = "JJ"


# ordered parameter keys per kind; the order is the netlist positional order
REQUIRED_PARAMS: dict[BranchKind, tuple[str, ...]] = {
    BranchKind.CAPACITANCE: ("EC",),
    BranchKind.INDUCTANCE: ("EL",),
    BranchKind.JOSEPHSON_JUNCTION: ("EJ", "ECJ"),
}

_NAMED = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)\s*$")


@dataclass(frozen=True)
class Branch:
    """One lumped element between ``node_a`` and ``node_b``.

    ``params`` maps the kind's parameter keys to exact energies (GHz).
    ``symbols`` maps a subset of those keys to user-visible symbolic names.
    """

    id: int
    kind: BranchKind
    node_a: int
    node_b: int
    params: Mapping[str, Fraction]
    symbols: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        object.__setattr__(self, "symbols", MappingProxyType(dict(self.symbols)))

    @property
    def nodes(self) -> tuple[int, int]:
        return (self.node_a, self.node_b)

    @property
    def capacitance(self) -> Fraction | None:
        """Capacitance in units of e^2/2 GHz^-1, i.e. ``1/EC`` (``1/ECJ`` for a junction)."""
        if self.kind is BranchKind.CAPACITANCE:
            return 1 / self.params["EC"]
        if self.kind is BranchKind.JOSEPHSON_JUNCTION:
            return 1 / self.params["ECJ"]
        return None

    def other(self, node: int) -> int:
        return self.node_b if node == self.node_a else self.node_a


@dataclass(frozen=True)
class CircuitGraph:
    """Immutable circuit graph.

    ``node_count`` includes the ground node 0, so a circuit with ``N`` flux
    variables has ``node_count == N + 1``.  Branch ids are 1-based positions in
    the netlist.
    """

    node_count: int
    branches: tuple[Branch, ...]
    param_names: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "param_names", MappingProxyType(dict(self.param_names)))

    @property
    def num_nodes(self) -> int:
        """Number of non-ground nodes (flux variables)."""
        return self.node_count - 1

    @property
    def grounded(self) -> bool:
        return any(0 in b.nodes for b in self.branches)

    def branch(self, branch_id: int) -> Branch:
        for b in self.branches:
            if b.id == branch_id:
                return b
        raise KeyError(f"no branch with id {branch_id}")

    def branches_of(self, *kinds: BranchKind) -> list[Branch]:
        return [b for b in self.branches if b.kind in kinds]

    def with_params(self, values: Mapping[str, float | Fraction | str]) -> CircuitGraph:
        """Return a copy with symbolic parameter names rebound to new values."""
        unknown = set(values) - set(self.param_names)
        if unknown:
            raise NetlistError(f"unknown parameter name(s): {', '.join(sorted(unknown))}")
        new_values = {k: _exact(v) for k, v in values.items()}
        for name, v in new_values.items():
            if v <= 0:
                raise NetlistError(f"parameter {name} must be positive, got {v}")
        branches = []
        for b in self.branches:
            params = dict(b.params)
            for key, name in b.symbols.items():
                if name in new_values:
                    params[key] = new_values[name]
            branches.append(replace(b, params=params))
        names = dict(self.param_names)
        names.update(new_values)
        return CircuitGraph(self.node_count, tuple(branches), names)


def _exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # shortest repr keeps decimal inputs like 6.6 exact as 33/5
        return Fraction(repr(value))
    return Fraction(str(value).strip())


def _mark(node) -> tuple[int, int]:
    return node.start_mark.line + 1, node.start_mark.column + 1


def parse_netlist(text: str) -> CircuitGraph:
    """Parse netlist text into a validated :class:`CircuitGraph`.

    Raises
    ------
    NetlistError
        On YAML syntax errors, unknown branch kinds, missing or non-positive
        parameters, conflicting defaults for a symbolic name, or any
        :func:`validate` violation.
    """
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        problem = getattr(exc, "problem", None) or str(exc)
        if mark is not None:
            raise NetlistError(f"syntax error: {problem}", mark.line + 1, mark.column + 1) from None
        raise NetlistError(f"syntax error: {problem}") from None

    if root is None:
        raise NetlistError("empty netlist")
    if not isinstance(root, yaml.MappingNode):
        raise NetlistError("top level must be a mapping with key 'branches'", *_mark(root))

    seq = None
    for key, value in root.value:
        if key.value != "branches":
            raise NetlistError(f"unknown top-level key {key.value!r}", *_mark(key))
        seq = value
    if seq is None:
        raise NetlistError("missing 'branches' key")
    if not isinstance(seq, yaml.SequenceNode):
        raise NetlistError("'branches' must be a sequence", *_mark(seq))

    param_names: dict[str, Fraction] = {}
    branches = []
    max_node = 0
    for idx, entry in enumerate(seq.value, start=1):
        if not isinstance(entry, yaml.SequenceNode):
            raise NetlistError("branch entry must be a sequence [KIND, a, b, P1, (P2)]", *_mark(entry))
        items = entry.value
        if not items or not isinstance(items[0], yaml.ScalarNode):
            raise NetlistError("branch entry missing kind", *_mark(entry))
        try:
            kind = BranchKind(items[0].value)
        except ValueError:
            raise NetlistError(f"unknown branch kind {items[0].value!r}", *_mark(items[0])) from None
        keys = REQUIRED_PARAMS[kind]
        if len(items) != 3 + len(keys):
            raise NetlistError(
                f"{kind.value} branch needs {len(keys)} parameter(s) {list(keys)}, got {max(len(items) - 3, 0)}",
                *_mark(entry),
            )
        nodes = []
        for item in items[1:3]:
            if not isinstance(item, yaml.ScalarNode) or not re.fullmatch(r"\d+", item.value.strip()):
                raise NetlistError(f"node index must be a non-negative integer, got {item.value!r}", *_mark(item))
            nodes.append(int(item.value))
        params, symbols = {}, {}
        for key, item in zip(keys, items[3:]):
            if not isinstance(item, yaml.ScalarNode):
                raise NetlistError(f"parameter {key} must be a scalar", *_mark(item))
            raw = item.value
            m = _NAMED.match(raw)
            name = None
            if m:
                name, raw = m.group(1), m.group(2)
            try:
                value = Fraction(raw.strip())
            except (ValueError, ZeroDivisionError):
                raise NetlistError(f"cannot parse parameter {key} value {raw!r}", *_mark(item)) from None
            if value <= 0:
                raise NetlistError(f"parameter {key} must be positive, got {raw.strip()}", *_mark(item))
            if name is not None:
                if name in param_names and param_names[name] != value:
                    raise NetlistError(
                        f"symbolic name {name!r} redefined with conflicting default "
                        f"{raw.strip()} (was {float(param_names[name])})",
                        *_mark(item),
                    )
                param_names[name] = value
                symbols[key] = name
            params[key] = value
        max_node = max(max_node, *nodes)
        branches.append(Branch(idx, kind, nodes[0], nodes[1], params, symbols))

    if not branches:
        raise NetlistError("netlist has no branches")
    graph = CircuitGraph(max_node + 1, tuple(branches), param_names)
    report = validate(graph)
    if report:
        raise NetlistError("; ".join(report))
    return graph


def validate(graph: CircuitGraph) -> list[str]:
    """Return every structural violation of ``graph``; an empty list means valid."""
    problems = []
    for b in graph.branches:
        for n in b.nodes:
            if not 0 <= n < graph.node_count:
                problems.append(f"branch {b.id}: node index {n} out of range (node_count {graph.node_count})")
        if b.node_a == b.node_b:
            problems.append(f"branch {b.id}: both ends on node {b.node_a}")
        keys = REQUIRED_PARAMS[b.kind]
        if set(b.params) != set(keys):
            problems.append(f"branch {b.id}: {b.kind.value} requires exactly {list(keys)}, got {sorted(b.params)}")
        for key, value in b.params.items():
            if not value > 0:
                problems.append(f"branch {b.id}: parameter {key} must be positive, got {value}")
    if problems:
        return problems

    touched = {n for b in graph.branches for n in b.nodes}
    required = set(range(graph.node_count)) if graph.grounded else set(range(1, graph.node_count))
    missing = sorted(required - touched)
    if missing:
        problems.append(f"node(s) {missing} have no branches; node indices must be contiguous")
    if len(_components(required, graph.branches)) > 1:
        problems.append("graph not connected")
    return problems


def _components(nodes: Iterable[int], branches: Iterable[Branch]) -> list[set[int]]:
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in branches:
        if b.node_a in parent and b.node_b in parent:
            ra, rb = find(b.node_a), find(b.node_b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, set[int]] = {}
    for n in parent:
        groups.setdefault(find(n), set()).add(n)
    return sorted(groups.values(), key=min)


def _format_value(v: Fraction) -> str:
    f = float(v)
    if Fraction(repr(f)) == v:
        return repr(f)
    return f"{v.numerator}/{v.denominator}"


def render_netlist(graph: CircuitGraph) -> str:
    """Render ``graph`` back to netlist text; ``parse_netlist`` inverts this exactly."""
    lines = ["branches:"]
    for b in graph.branches:
        fields = [f'"{b.kind.value}"', str(b.node_a), str(b.node_b)]
        for key in REQUIRED_PARAMS[b.kind]:
            value = _format_value(b.params[key])
            name = b.symbols.get(key)
            fields.append(f"{name} = {value}" if name else value)
        lines.append(f"- [{', '.join(fields)}]")
    return "\n".join(lines) + "\n"


def read_netlist(path) -> CircuitGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_netlist(fh.read())
