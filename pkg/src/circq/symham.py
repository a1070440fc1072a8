"""Structured Lagrangian and Hamiltonian: quadratic forms plus cosine terms.

Every expression the pipeline produces is of the form::

    T = 1/2 thetadot^T K thetadot
    V = 1/2 theta^T B theta + theta^T G f + 1/2 f^T F f - sum_j EJ_j cos(c_j.theta + d_j.f)

with ``f = 2*pi*Phi`` the vector of external fluxes (``Phi`` in units of the
flux quantum).  Terms are therefore kept as exact coefficient arrays rather
than expression trees.  Capacitances are ``1/EC`` (GHz^-1), so the charge
quadratic form of the Hamiltonian is ``A = 4 * inverse(K)`` in GHz with charges
counted in Cooper pairs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np
import sympy as sp

from circq.errors import HamiltonianError
from circq.netlist import BranchKind, CircuitGraph
from circq.topology import SpanningTree
from circq.transform import Transformation, VariableClass, build_node_capacitance, rational

P, E, FREE, FROZEN = VariableClass.PERIODIC, VariableClass.EXTENDED, VariableClass.FREE, VariableClass.FROZEN


def _imm(m) -> sp.ImmutableMatrix:
    return sp.ImmutableMatrix(m)


def _floats(m) -> np.ndarray:
    m = sp.Matrix(m)
    return np.array(m.tolist(), dtype=float).reshape(m.shape)


@dataclass(frozen=True)
class JunctionTerm:
    """``-EJ cos(coeffs . theta + flux . (2 pi Phi))``."""

    EJ: sp.Rational
    coeffs: tuple
    flux: tuple
    branch: int = 0

    def argument(self, theta, fluxes) -> float:
        return float(np.dot(np.array(self.coeffs, dtype=float), theta)) + 2 * math.pi * float(
            np.dot(np.array(self.flux, dtype=float), fluxes)
        )


@dataclass(frozen=True)
class StructuredLagrangian:
    """``L = T - V`` in the structured form of this module.

    ``labels`` name the variables: node indices for a node-variable Lagrangian,
    1-based ``theta`` labels after a transformation.  ``classes`` is ``None``
    entries until a transformation assigns them.
    """

    labels: tuple[int, ...]
    classes: tuple
    kinetic_matrix: sp.ImmutableMatrix
    potential_quadratic: sp.ImmutableMatrix
    potential_linear: sp.ImmutableMatrix
    potential_const: sp.ImmutableMatrix
    junction_terms: tuple[JunctionTerm, ...]
    flux_symbols: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    def potential(self, theta, fluxes=None) -> float:
        theta = np.asarray(theta, dtype=float)
        f = 2 * math.pi * np.asarray(fluxes if fluxes is not None else np.zeros(len(self.flux_symbols)), dtype=float)
        B, G, F = _floats(self.potential_quadratic), _floats(self.potential_linear), _floats(self.potential_const)
        v = 0.5 * theta @ B @ theta + theta @ G @ f + 0.5 * f @ F @ f
        for j in self.junction_terms:
            v -= float(j.EJ) * math.cos(j.argument(theta, f / (2 * math.pi)))
        return float(v)

    def kinetic(self, theta_dot) -> float:
        theta_dot = np.asarray(theta_dot, dtype=float)
        return float(0.5 * theta_dot @ _floats(self.kinetic_matrix) @ theta_dot)

    def value(self, theta_dot, theta, fluxes=None) -> float:
        return self.kinetic(theta_dot) - self.potential(theta, fluxes)


def node_lagrangian(graph: CircuitGraph, tree: SpanningTree) -> StructuredLagrangian:
    """Lagrangian in node variables ``phi_1..phi_N``.

    Each branch contributes through ``phi_b - phi_a`` plus, for inductive closure
    branches, its loop's external flux ``2 pi Phi``.
    """
    n = graph.num_nodes
    fluxes = tree.flux_symbols
    m = len(fluxes)
    B, G, F = sp.zeros(n, n), sp.zeros(n, m), sp.zeros(m, m)
    junctions = []
    for b in graph.branches:
        if b.kind is BranchKind.CAPACITANCE:
            continue
        c = sp.zeros(n, 1)
        if b.node_b:
            c[b.node_b - 1] += 1
        if b.node_a:
            c[b.node_a - 1] -= 1
        s = sp.zeros(m, 1)
        if b.id in tree.flux_assignment:
            s[fluxes.index(tree.flux_assignment[b.id])] = 1
        if b.kind is BranchKind.INDUCTANCE:
            el = rational(b.params["EL"])
            B += el * c * c.T
            G += el * c * s.T
            F += el * s * s.T
        else:
            junctions.append(JunctionTerm(rational(b.params["EJ"]), tuple(c), tuple(s), b.id))
    return StructuredLagrangian(
        labels=tuple(range(1, n + 1)),
        classes=(None,) * n,
        kinetic_matrix=build_node_capacitance(graph),
        potential_quadratic=_imm(B),
        potential_linear=_imm(G),
        potential_const=_imm(F),
        junction_terms=tuple(junctions),
        flux_symbols=fluxes,
    )


def transform_lagrangian(lag: StructuredLagrangian, transformation: Transformation) -> StructuredLagrangian:
    """Pull every term back through ``phi = Z theta``."""
    Z = sp.Matrix(transformation.Z)
    if Z.shape != (lag.size, lag.size):
        raise HamiltonianError(f"transformation is {Z.shape}, Lagrangian has {lag.size} variables")
    junctions = []
    for j in lag.junction_terms:
        coeffs = tuple(Z.T * sp.Matrix(j.coeffs))
        junctions.append(replace(j, coeffs=coeffs))
    return StructuredLagrangian(
        labels=transformation.labels,
        classes=transformation.classes,
        kinetic_matrix=_imm(Z.T * lag.kinetic_matrix * Z),
        potential_quadratic=_imm(Z.T * lag.potential_quadratic * Z),
        potential_linear=_imm(Z.T * lag.potential_linear),
        potential_const=lag.potential_const,
        junction_terms=tuple(junctions),
        flux_symbols=lag.flux_symbols,
    )


def _select(lag: StructuredLagrangian, keep: list[int]) -> dict:
    return dict(
        labels=tuple(lag.labels[i] for i in keep),
        classes=tuple(lag.classes[i] for i in keep),
        junction_terms=tuple(replace(j, coeffs=tuple(j.coeffs[i] for i in keep)) for j in lag.junction_terms),
    )


def eliminate_frozen(lag: StructuredLagrangian) -> StructuredLagrangian:
    """Remove frozen variables by minimising the quadratic potential over them.

    With ``B`` split into frozen (f) and remaining (r) blocks, the stationarity
    condition ``dV/dtheta_f = 0`` gives ``theta_f = -B_ff^-1 (B_fr theta_r + G_f f)``,
    leaving the Schur complement ``B_rr - B_rf B_ff^-1 B_fr`` and correspondingly
    updated flux couplings.
    """
    frozen = [i for i, c in enumerate(lag.classes) if c is FROZEN]
    if not frozen:
        return lag
    rest = [i for i in range(lag.size) if i not in frozen]
    for j in lag.junction_terms:
        if any(j.coeffs[i] != 0 for i in frozen):
            raise HamiltonianError(
                f"junction on branch {j.branch} couples to a frozen variable; cannot eliminate it linearly"
            )
    K = sp.Matrix(lag.kinetic_matrix)
    if any(K[i, k] != 0 for i in frozen for k in range(lag.size)):
        raise HamiltonianError("frozen variable carries kinetic energy")
    B, G = sp.Matrix(lag.potential_quadratic), sp.Matrix(lag.potential_linear)
    Bff = B.extract(frozen, frozen)
    if Bff.det() == 0:
        raise HamiltonianError("frozen subcircuit with flat potential direction")
    Bff_inv = Bff.inv()
    Brf = B.extract(rest, frozen)
    m = len(lag.flux_symbols)
    Gf = G.extract(frozen, list(range(m))) if m else sp.zeros(len(frozen), 0)
    Gr = G.extract(rest, list(range(m))) if m else sp.zeros(len(rest), 0)
    B_new = B.extract(rest, rest) - Brf * Bff_inv * Brf.T
    G_new = Gr - Brf * Bff_inv * Gf
    F_new = sp.Matrix(lag.potential_const) - Gf.T * Bff_inv * Gf
    return StructuredLagrangian(
        kinetic_matrix=_imm(K.extract(rest, rest)),
        potential_quadratic=_imm(B_new),
        potential_linear=_imm(G_new),
        potential_const=_imm(F_new),
        flux_symbols=lag.flux_symbols,
        **_select(lag, rest),
    )


@dataclass(frozen=True)
class SymbolicHamiltonian:
    """``H = (Q - Q_g)^T A (Q - Q_g) + V(theta)`` over periodic and extended variables.

    ``A`` is in GHz with ``Q`` in Cooper pairs, so a lone transmon reads
    ``4 EC n^2``.  Potential terms follow :class:`StructuredLagrangian`.
    ``offset_charges`` maps the label of each periodic variable to its offset
    symbol (``ng<label>``); ``offset_defaults`` holds the default values.
    """

    labels: tuple[int, ...]
    classes: tuple[VariableClass, ...]
    charge_quadratic: sp.ImmutableMatrix
    potential_quadratic: sp.ImmutableMatrix
    potential_linear: sp.ImmutableMatrix
    potential_const: sp.ImmutableMatrix
    junction_terms: tuple[JunctionTerm, ...]
    flux_symbols: tuple[str, ...]
    offset_charges: Mapping[int, str] = field(default_factory=dict)
    offset_defaults: Mapping[str, float] = field(default_factory=dict)
    boundary_conditions: Mapping[int, str] = field(default_factory=dict)
    param_names: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("offset_charges", "offset_defaults", "boundary_conditions", "param_names"):
            object.__setattr__(self, name, MappingProxyType(dict(getattr(self, name))))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def A(self) -> np.ndarray:
        return _floats(self.charge_quadratic)

    @property
    def B(self) -> np.ndarray:
        return _floats(self.potential_quadratic)

    @property
    def G(self) -> np.ndarray:
        return _floats(self.potential_linear).reshape(self.size, len(self.flux_symbols))

    @property
    def F(self) -> np.ndarray:
        return _floats(self.potential_const).reshape(len(self.flux_symbols), len(self.flux_symbols))

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.flux_symbols + tuple(self.offset_charges.values())

    def index(self, label: int) -> int:
        return self.labels.index(label)

    def potential(self, theta, fluxes=None) -> float:
        theta = np.asarray(theta, dtype=float)
        phi = np.zeros(len(self.flux_symbols)) if fluxes is None else np.asarray(fluxes, dtype=float)
        f = 2 * math.pi * phi
        v = 0.5 * theta @ self.B @ theta + theta @ self.G @ f + 0.5 * f @ self.F @ f
        for j in self.junction_terms:
            v -= float(j.EJ) * math.cos(j.argument(theta, phi))
        return float(v)


def legendre_and_remove_free(lag: StructuredLagrangian, param_names: Mapping | None = None) -> SymbolicHamiltonian:
    """Legendre transform and drop free variables together with their conserved charges.

    The kinetic matrix over free, periodic and extended variables is inverted
    exactly; the periodic/extended block of the inverse, times 4, is the charge
    quadratic form.  A free variable with no kinetic energy at all (the uniform
    shift of a floating circuit) is discarded before the inversion.
    """
    if any(c is FROZEN for c in lag.classes):
        raise HamiltonianError("eliminate frozen variables before the Legendre transform")
    K = sp.Matrix(lag.kinetic_matrix)
    B, G = sp.Matrix(lag.potential_quadratic), sp.Matrix(lag.potential_linear)
    free = [i for i, c in enumerate(lag.classes) if c is FREE]
    for i in free:
        if any(B[i, k] != 0 for k in range(lag.size)) or any(G[i, k] != 0 for k in range(G.shape[1])):
            raise HamiltonianError(f"free variable theta{lag.labels[i]} appears in the potential")
        if any(j.coeffs[i] != 0 for j in lag.junction_terms):
            raise HamiltonianError(f"free variable theta{lag.labels[i]} appears in a junction term")
    gauge = [i for i in free if all(K[i, k] == 0 for k in range(lag.size))]
    cpe = [i for i in range(lag.size) if i not in gauge]
    K_cpe = K.extract(cpe, cpe)
    if K_cpe.shape[0] and K_cpe.det() == 0:
        raise HamiltonianError("circuit lacks capacitive closure; add parasitic capacitances")
    K_inv = K_cpe.inv() if K_cpe.shape[0] else K_cpe
    pe = [i for i in range(lag.size) if lag.classes[i] in (P, E)]
    pos = [cpe.index(i) for i in pe]
    A = 4 * K_inv.extract(pos, pos)
    m = len(lag.flux_symbols)
    sel = _select(lag, pe)
    return SymbolicHamiltonian(
        charge_quadratic=_imm(A),
        potential_quadratic=_imm(B.extract(pe, pe)),
        potential_linear=_imm(G.extract(pe, list(range(m))) if m else sp.zeros(len(pe), 0)),
        potential_const=lag.potential_const,
        flux_symbols=lag.flux_symbols,
        param_names={k: float(v) for k, v in (param_names or {}).items()},
        **sel,
    )


def quantize(ham: SymbolicHamiltonian, offsets: Mapping | None = None) -> SymbolicHamiltonian:
    """Attach offset-charge symbols to periodic variables and record boundary conditions.

    ``offsets`` maps a periodic variable (its label, or its symbol ``ng<label>``)
    to the default offset charge.  Extended variables carry no offset.
    """
    symbols = {lab: f"ng{lab}" for lab, c in zip(ham.labels, ham.classes) if c is P}
    defaults = {name: 0.0 for name in symbols.values()}
    for key, value in (offsets or {}).items():
        name = f"ng{key}" if isinstance(key, int) else str(key)
        if name not in defaults:
            raise HamiltonianError(f"offset charge {key!r} does not belong to a periodic variable")
        defaults[name] = float(value)
    bcs = {
        lab: "periodic: psi(theta + 2pi e) = psi(theta)" if c is P else "extended: psi -> 0 as |theta| -> inf"
        for lab, c in zip(ham.labels, ham.classes)
    }
    return replace(ham, offset_charges=symbols, offset_defaults=defaults, boundary_conditions=bcs)


def build_hamiltonian(
    graph: CircuitGraph,
    tree: SpanningTree,
    transformation: Transformation,
    offsets: Mapping | None = None,
) -> SymbolicHamiltonian:
    """Whole symbolic pipeline: node Lagrangian, transform, eliminate, Legendre, quantize."""
    lag = transform_lagrangian(node_lagrangian(graph, tree), transformation)
    lag = eliminate_frozen(lag)
    return quantize(legendre_and_remove_free(lag, graph.param_names), offsets)


_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")

CONVENTION_NOTE = (
    "# Q in Cooper pairs (single island: 4 EC Q^2); theta in radians; "
    "Phi in flux quanta, entering as 2πΦ; periodic Q_k stand for Q_k - ng_k"
)


def _fmt(x: float, precision: int) -> str:
    s = f"{abs(x):.{precision}g}"
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def _sym(prefix: str, label) -> str:
    return f"{prefix}{str(label).translate(_SUB)}"


def _flux_sym(name: str) -> str:
    return f"(2π{name[0]}{name[1:].translate(_SUB)})"


def _join(terms: list[tuple[float, str]], precision: int) -> str:
    out = ""
    for coeff, body in terms:
        sign = "-" if coeff < 0 else "+"
        piece = f"{_fmt(coeff, precision)} {body}" if body else _fmt(coeff, precision)
        out += (f"-{piece}" if sign == "-" else piece) if not out else f" {sign} {piece}"
    return out


def _cos_argument(coeffs, flux, labels, flux_symbols) -> str:
    parts = []
    for c, lab in zip(coeffs, labels):
        parts.append((sp.Rational(c), _sym("θ", lab)))
    for c, name in zip(flux, flux_symbols):
        parts.append((sp.Rational(c), f"2π{name[0]}{name[1:].translate(_SUB)}"))
    out = ""
    for c, body in parts:
        if c == 0:
            continue
        mag = abs(c)
        txt = body if mag == 1 else f"{float(mag):g}{body}"
        if not out:
            out = f"-{txt}" if c < 0 else txt
        else:
            out += f" - {txt}" if c < 0 else f" + {txt}"
    return out or "0"


def render(ham: SymbolicHamiltonian, precision: int = 3, note: bool = False) -> str:
    """Human-readable Hamiltonian: charge terms, quadratic potential, cosines.

    Coefficients are rounded to ``precision`` significant digits and exact zeros
    are omitted.  External fluxes appear as ``(2πΦ_k)`` so that the printed
    coefficient multiplies the flux in radians.
    """
    A, B, G, F = ham.A, ham.B, ham.G, ham.F
    n, m = ham.size, len(ham.flux_symbols)
    q = [_sym("Q", lab) for lab in ham.labels]
    t = [_sym("θ", lab) for lab in ham.labels]
    f = [_flux_sym(s) for s in ham.flux_symbols]

    def nz(x):
        return abs(x) > 1e-12

    charge = []
    for i in range(n):
        for k in range(i, n):
            c = A[i, i] if i == k else 2 * A[i, k]
            if nz(c):
                charge.append((c, f"{q[i]}²" if i == k else f"{q[i]} {q[k]}"))
    quad = []
    for a in range(m):
        for b in range(a, m):
            c = F[a, a] / 2 if a == b else F[a, b]
            if nz(c):
                quad.append((c, f"{f[a]}²" if a == b else f"{f[a]} {f[b]}"))
        for i in range(n):
            if nz(G[i, a]):
                quad.append((G[i, a], f"{f[a]} {t[i]}"))
    for i in range(n):
        for k in range(i, n):
            c = B[i, i] / 2 if i == k else B[i, k]
            if nz(c):
                quad.append((c, f"{t[i]}²" if i == k else f"{t[i]} {t[k]}"))
    cosines = [
        (-float(j.EJ), f"cos({_cos_argument(j.coeffs, j.flux, ham.labels, ham.flux_symbols)})")
        for j in ham.junction_terms
        if nz(float(j.EJ))
    ]
    groups = [g for g in (charge, quad + cosines) if g]
    body = " + ".join(f"({_join(g, precision)})" for g in groups) or "0"
    return f"{body}\n{CONVENTION_NOTE}" if note else body


def to_dict(ham: SymbolicHamiltonian) -> dict:
    """JSON-ready dictionary of every coefficient array."""
    return {
        "variables": [{"label": lab, "class": c.value} for lab, c in zip(ham.labels, ham.classes)],
        "charge_quadratic": ham.A.tolist(),
        "potential_quadratic": ham.B.tolist(),
        "flux_coupling": ham.G.tolist(),
        "flux_quadratic": ham.F.tolist(),
        "junctions": [
            {
                "EJ": float(j.EJ),
                "coeffs": [float(c) for c in j.coeffs],
                "flux": [float(c) for c in j.flux],
                "branch": j.branch,
            }
            for j in ham.junction_terms
        ],
        "external_flux": list(ham.flux_symbols),
        "offset_charges": {str(k): v for k, v in ham.offset_charges.items()},
        "offset_defaults": dict(ham.offset_defaults),
        "convention": CONVENTION_NOTE.lstrip("# "),
    }


def to_json(ham: SymbolicHamiltonian, **kwargs) -> str:
    return json.dumps(to_dict(ham), ensure_ascii=False, **kwargs)


def symbol_names(ham: SymbolicHamiltonian) -> Sequence[str]:
    return ham.symbols
