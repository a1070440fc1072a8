"""Adaptive variable transformation ``phi = Z theta`` and variable classification.

All matrices here are exact ``sympy`` rationals.  Capacitances are expressed
as ``1/EC`` in GHz^-1 (i.e. in units of e^2/2), so a single capacitance with
charging energy ``EC`` has entry ``1/EC``.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path

import sympy as sp

from circq.errors import TransformationError
from circq.netlist import BranchKind, CircuitGraph
from circq.topology import IslandReport, detect_islands

C, L, JJ = BranchKind.CAPACITANCE, BranchKind.INDUCTANCE, BranchKind.JOSEPHSON_JUNCTION


class VariableClass(Enum):
    FREE = "free"
    FROZEN = "frozen"
    PERIODIC = "periodic"
    EXTENDED = "extended"


_ORDER = [VariableClass.FREE, VariableClass.FROZEN, VariableClass.PERIODIC, VariableClass.EXTENDED]


class TransformationWarning(UserWarning):
    pass


def rational(value) -> sp.Rational:
    """Exact rational from an int, Fraction, decimal/``p/q`` string, or float (via its shortest repr)."""
    if isinstance(value, sp.Rational):
        return value
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    if isinstance(value, bool):
        raise TypeError("boolean is not a matrix entry")
    if isinstance(value, int):
        return sp.Integer(value)
    if isinstance(value, str):
        f = Fraction(value.strip())
    else:
        f = Fraction(repr(float(value)))
    return sp.Rational(f.numerator, f.denominator)


@dataclass(frozen=True)
class Transformation:
    """Invertible ``Z`` with ``phi = Z theta`` and one class per column.

    ``labels`` are the 1-based names of the new variables (``theta_k``).  Built
    transformations order their columns free, frozen, periodic, extended; user
    matrices keep the user's column order so that ``theta_k`` means column k.
    """

    Z: sp.ImmutableMatrix
    classes: tuple[VariableClass, ...]
    labels: tuple[int, ...]

    @property
    def Z_inv(self) -> sp.ImmutableMatrix:
        return sp.ImmutableMatrix(self.Z.inv())

    def indices(self, *classes: VariableClass) -> list[int]:
        return [i for i, c in enumerate(self.classes) if c in classes]

    def counts(self) -> dict[VariableClass, int]:
        return {c: self.classes.count(c) for c in _ORDER}


def build_node_capacitance(graph: CircuitGraph) -> sp.ImmutableMatrix:
    """Node capacitance matrix over nodes 1..N (ground row and column removed).

    Off-diagonal ``(n, n')`` is minus the summed capacitance of C branches and
    junction capacitances joining the two nodes; the diagonal is the total
    capacitance attached to the node, ground couplings included.
    """
    n = graph.num_nodes
    mat = sp.zeros(n, n)
    for b in graph.branches:
        cap = b.capacitance
        if cap is None:
            continue
        c = rational(cap)
        i, j = b.node_a - 1, b.node_b - 1
        if i >= 0:
            mat[i, i] += c
        if j >= 0:
            mat[j, j] += c
        if i >= 0 and j >= 0:
            mat[i, j] -= c
            mat[j, i] -= c
    return sp.ImmutableMatrix(mat)


def branch_differences(graph: CircuitGraph, column) -> dict[BranchKind, list]:
    """Flux difference ``z[node_b] - z[node_a]`` across every branch, grouped by kind (ground is 0)."""
    z = [sp.Integer(0)] + [rational(v) for v in column]
    out: dict[BranchKind, list] = {C: [], L: [], JJ: []}
    for b in graph.branches:
        out[b.kind].append(z[b.node_b] - z[b.node_a])
    return out


def classify_column(graph: CircuitGraph, column) -> VariableClass:
    """Class of the variable whose node-flux pattern is ``column``.

    Zero difference across every L and JJ makes a free variable; across every C
    and JJ a frozen one; across every L a periodic one, provided every junction
    difference is an integer (otherwise a warning is issued and the variable is
    treated as extended).  A column with zero difference across every branch is
    the global shift of a floating circuit and counts as free.
    """
    d = branch_differences(graph, column)
    zero = {k: all(x == 0 for x in v) for k, v in d.items()}
    if zero[L] and zero[JJ]:
        return VariableClass.FREE
    if zero[C] and zero[JJ]:
        return VariableClass.FROZEN
    if zero[L]:
        if all(x.is_integer for x in d[JJ]):
            return VariableClass.PERIODIC
        warnings.warn(
            "column is flat across all inductances but has non-integer junction "
            f"differences {[str(x) for x in d[JJ]]}; treating it as extended",
            TransformationWarning,
            stacklevel=2,
        )
    return VariableClass.EXTENDED


def _indicator(n: int, nodes) -> list:
    return [sp.Integer(1) if i + 1 in nodes else sp.Integer(0) for i in range(n)]


def build_transformation(graph: CircuitGraph, islands: IslandReport | None = None) -> Transformation:
    """Construct ``Z`` from island indicator columns plus canonical completion.

    Columns are, in order: the uniform shift of a floating circuit and one
    indicator per isolated island (free), per inductive island (frozen), per
    superconducting island (periodic); then standard basis vectors ``e_n`` in
    ascending node order, skipping any that would break invertibility
    (extended).
    """
    if islands is None:
        islands = detect_islands(graph)
    n = graph.num_nodes
    candidates = []
    if islands.floating:
        candidates.append((VariableClass.FREE, list(range(1, n + 1))))
    candidates += [(VariableClass.FREE, s) for s in islands.isolated_islands]
    candidates += [(VariableClass.FROZEN, s) for s in islands.inductive_islands]
    candidates += [(VariableClass.PERIODIC, s) for s in islands.superconducting_islands]

    cols: list[list] = []
    classes: list[VariableClass] = []

    def independent(col) -> bool:
        return sp.Matrix.hstack(*[sp.Matrix(c) for c in cols + [col]]).rank() == len(cols) + 1

    for cls, nodes in candidates:
        col = _indicator(n, set(nodes))
        if independent(col):
            cols.append(col)
            classes.append(cls)
        else:
            warnings.warn(
                f"{cls.value} island {sorted(nodes)} is linearly dependent on earlier variables; skipped",
                TransformationWarning,
                stacklevel=2,
            )
    for k in range(n):
        if len(cols) == n:
            break
        col = _indicator(n, {k + 1})
        if independent(col):
            cols.append(col)
            classes.append(VariableClass.EXTENDED)

    Z = sp.ImmutableMatrix.hstack(*[sp.Matrix(c) for c in cols]) if cols else sp.ImmutableMatrix.zeros(0, 0)
    assert Z.shape == (n, n) and Z.det() != 0, "canonical completion failed"
    for i, cls in enumerate(classes):
        assert classify_column(graph, list(Z[:, i])) is cls, f"column {i + 1} does not satisfy {cls.value}"
    return Transformation(sp.ImmutableMatrix(Z), tuple(classes), tuple(range(1, n + 1)))


def apply_user_transformation(graph: CircuitGraph, Z_user) -> Transformation:
    """Accept a user ``Z`` (rows = nodes 1..N) and re-derive every column's class."""
    rows = [list(r) for r in (Z_user.tolist() if hasattr(Z_user, "tolist") else Z_user)]
    n = graph.num_nodes
    if len(rows) != n or any(len(r) != n for r in rows):
        raise TransformationError(f"transformation matrix must be {n}x{n} for this circuit")
    Z = sp.ImmutableMatrix([[rational(v) for v in r] for r in rows])
    if Z.det() == 0:
        raise TransformationError("transformation matrix is singular")
    classes = tuple(classify_column(graph, list(Z[:, i])) for i in range(n))
    return Transformation(Z, classes, tuple(range(1, n + 1)))


def transformed_capacitance(graph: CircuitGraph, transformation: Transformation | sp.Matrix) -> sp.ImmutableMatrix:
    """Exact congruence ``Z^T C Z`` of the node capacitance matrix."""
    Z = transformation.Z if isinstance(transformation, Transformation) else sp.Matrix(transformation)
    C_node = build_node_capacitance(graph)
    return sp.ImmutableMatrix(Z.T * C_node * Z)


def parse_matrix(text: str) -> list[list[Fraction]]:
    """Parse a square matrix from JSON (list of rows) or CSV; entries are decimals or ``p/q``."""
    stripped = text.strip()
    if stripped.startswith("["):
        rows = json.loads(stripped)
    else:
        rows = [[c for c in row if c.strip()] for row in csv.reader(io.StringIO(stripped))]
        rows = [r for r in rows if r and not r[0].lstrip().startswith("#")]
    try:
        return [[Fraction(str(v).strip()) for v in r] for r in rows]
    except (ValueError, ZeroDivisionError) as exc:
        raise TransformationError(f"cannot parse transformation matrix entry: {exc}") from None


def load_matrix(path: str | Path) -> list[list[Fraction]]:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))


def node_differences(Z: sp.Matrix, node_a: int, node_b: int) -> list:
    """Row vector mapping theta to ``phi[node_b] - phi[node_a]`` (ground is 0)."""
    n = Z.shape[1]
    ra = Z[node_a - 1, :] if node_a else sp.zeros(1, n)
    rb = Z[node_b - 1, :] if node_b else sp.zeros(1, n)
    return list(rb - ra)

