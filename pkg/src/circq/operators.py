"""Finite bases, per-variable operator factors and Kronecker assembly.

A Hamiltonian is first expanded into product terms ``coeff * F_1 (x) F_2 (x) ...``
where each factor acts on one variable and is named by a key:

``("Q",)``, ``("Q2",)``
    charge (minus the offset for a periodic variable) and its square;
``("T",)``, ``("T2",)``
    phase ``theta`` and its square (extended variables only);
``("E", c)``
    ``exp(i c theta)``.

Factors are then realised in the variable's basis and the terms summed as
sparse Kronecker products.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping, Sequence, Union

import numpy as np
import scipy.linalg as sl
import scipy.sparse as sps

from circq.errors import BasisError, HamiltonianError
from circq.symham import SymbolicHamiltonian
from circq.transform import VariableClass


@dataclass(frozen=True)
class Charge:
    """Charge eigenstates ``|-n_cutoff>, ..., |n_cutoff>`` of a periodic variable."""

    n_cutoff: int = 10

    def __post_init__(self):
        if int(self.n_cutoff) != self.n_cutoff or self.n_cutoff < 1:
            raise BasisError(f"charge cutoff must be an integer >= 1, got {self.n_cutoff}")

    @property
    def dim(self) -> int:
        return 2 * self.n_cutoff + 1


@dataclass(frozen=True)
class Harmonic:
    """Lowest ``levels`` oscillator states; ``osc_length=None`` picks it from the Hamiltonian."""

    levels: int = 30
    osc_length: float | None = None

    def __post_init__(self):
        if int(self.levels) != self.levels or self.levels < 2:
            raise BasisError(f"harmonic basis needs at least 2 levels, got {self.levels}")
        if self.osc_length is not None and not self.osc_length > 0:
            raise BasisError(f"oscillator length must be positive, got {self.osc_length}")

    @property
    def dim(self) -> int:
        return self.levels


@dataclass(frozen=True)
class Grid:
    """Uniform phase grid on ``[-half_width, half_width]`` with a central-difference stencil."""

    points: int = 401
    half_width: float = 6 * math.pi
    stencil: int = 3

    def __post_init__(self):
        if int(self.points) != self.points or self.points < 3 or self.points % 2 == 0:
            raise BasisError(f"grid needs an odd number of points >= 3, got {self.points}")
        if not self.half_width > 0:
            raise BasisError(f"grid half width must be positive, got {self.half_width}")
        if self.stencil not in _STENCILS:
            raise BasisError(f"stencil must be one of {sorted(_STENCILS)}, got {self.stencil}")

    @property
    def dim(self) -> int:
        return self.points

    @property
    def spacing(self) -> float:
        return 2 * self.half_width / (self.points - 1)


BasisSpec = Union[Charge, Harmonic, Grid]

# central-difference weights: (first derivative, second derivative)
_STENCILS = {
    3: ([-1 / 2, 0, 1 / 2], [1, -2, 1]),
    5: ([1 / 12, -2 / 3, 0, 2 / 3, -1 / 12], [-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12]),
    7: (
        [-1 / 60, 3 / 20, -3 / 4, 0, 3 / 4, -3 / 20, 1 / 60],
        [1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90],
    ),
}


@dataclass(frozen=True)
class OperatorSet:
    """Operators of one variable in one basis.

    ``exp(c)`` returns ``exp(i c theta)``; ``theta`` is ``None`` for a charge basis,
    whose phase is only available through integer powers of the shift.
    """

    basis: BasisSpec
    charge: sps.csr_matrix
    charge_sq: sps.csr_matrix
    theta: sps.csr_matrix | None
    theta_sq: sps.csr_matrix | None
    shift: sps.csr_matrix | None = None

    @property
    def dim(self) -> int:
        return self.basis.dim

    def exp(self, c: float):
        return _exp_factor(self, float(c))


@lru_cache(maxsize=None)
def charge_ops(n_cutoff: int) -> OperatorSet:
    """``n = diag(-n_cutoff..n_cutoff)`` and the lower shift ``exp(i theta)|n> = |n+1>``."""
    basis = Charge(n_cutoff)
    n = sps.diags(np.arange(-n_cutoff, n_cutoff + 1, dtype=float), format="csr")
    shift = sps.diags(np.ones(basis.dim - 1), -1, format="csr", dtype=complex)
    return OperatorSet(basis, n, (n @ n).tocsr(), None, None, shift)


@lru_cache(maxsize=None)
def harmonic_ops(levels: int, osc_length: float) -> OperatorSet:
    """Truncated ladder-operator representation.

    ``theta = l/sqrt(2) (a + a^dag)`` and ``Q = i/(sqrt(2) l) (a^dag - a)``.  The
    squares are projections of the untruncated squares (``a a^dag`` keeps its
    ``n + 1`` on the top level), so a pure oscillator is exact on every kept level.
    """
    a = sps.diags(np.sqrt(np.arange(1, levels, dtype=float)), 1, format="csr")
    ad = a.T.tocsr()
    l2 = osc_length**2
    pairs = (a @ a + ad @ ad).tocsr()
    number = sps.diags(2 * np.arange(levels, dtype=float) + 1, format="csr")
    theta = (osc_length / math.sqrt(2)) * (a + ad)
    q = (1j / (math.sqrt(2) * osc_length)) * (ad - a)
    theta_sq = (l2 / 2) * (pairs + number)
    q_sq = (1 / (2 * l2)) * (number - pairs)
    return OperatorSet(Harmonic(levels, osc_length), q.tocsr(), q_sq.tocsr(), theta.tocsr(), theta_sq.tocsr())


def _stencil_matrix(weights, points: int) -> sps.csr_matrix:
    half = len(weights) // 2
    offsets = list(range(-half, half + 1))
    diagonals = [np.full(points - abs(o), w) for o, w in zip(offsets, weights)]
    return sps.diags(diagonals, offsets, shape=(points, points), format="csr")


@lru_cache(maxsize=None)
def grid_ops(points: int, half_width: float = 6 * math.pi, stencil: int = 3) -> OperatorSet:
    """Phase grid with Dirichlet boundaries: ``Q = -i d/dtheta``, ``Q^2 = -d^2/dtheta^2``."""
    basis = Grid(points, half_width, stencil)
    h = basis.spacing
    d1, d2 = _STENCILS[stencil]
    grid = np.linspace(-half_width, half_width, points)
    q = (-1j / h) * _stencil_matrix(d1, points)
    q2 = (-1 / h**2) * _stencil_matrix(d2, points)
    theta = sps.diags(grid, format="csr")
    return OperatorSet(basis, q.tocsr(), q2.tocsr(), theta, sps.diags(grid**2, format="csr"))


def ops_for(basis: BasisSpec) -> OperatorSet:
    if isinstance(basis, Charge):
        return charge_ops(basis.n_cutoff)
    if isinstance(basis, Harmonic):
        if basis.osc_length is None:
            raise BasisError("oscillator length unresolved; call resolve_basis first")
        return harmonic_ops(basis.levels, float(basis.osc_length))
    if isinstance(basis, Grid):
        return grid_ops(basis.points, float(basis.half_width), basis.stencil)
    raise BasisError(f"unknown basis {basis!r}")


class _ExpCache:
    """Dense ``exp(i c theta)`` per (basis, c); concurrent reads, exclusive writes."""

    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()

    def get(self, ops: OperatorSet, c: float):
        key = (ops.basis, c)
        hit = self._data.get(key)
        if hit is not None:
            return hit
        value = self._compute(ops, c)
        with self._lock:
            return self._data.setdefault(key, value)

    @staticmethod
    def _compute(ops: OperatorSet, c: float):
        if isinstance(ops.basis, Grid):
            return sps.diags(np.exp(1j * c * ops.theta.diagonal()), format="csr")
        w, v = sl.eigh((c * ops.theta).toarray())
        return sps.csr_matrix((v * np.exp(1j * w)) @ v.conj().T)

    def clear(self):
        with self._lock:
            self._data.clear()


EXP_CACHE = _ExpCache()


def _exp_factor(ops: OperatorSet, c: float):
    if isinstance(ops.basis, Charge):
        if c != round(c):
            raise BasisError(
                f"transformation incompatible with charge basis: cosine coefficient {c:g} on a periodic variable"
            )
        power = int(round(c))
        base = ops.shift if power >= 0 else ops.shift.T.tocsr()
        out = sps.identity(ops.dim, dtype=complex, format="csr")
        for _ in range(abs(power)):
            out = (out @ base).tocsr()
        return out
    return EXP_CACHE.get(ops, c)


def resolve_basis(ham: SymbolicHamiltonian, basis: Sequence[BasisSpec]) -> tuple[BasisSpec, ...]:
    """Check basis/class compatibility and fill default oscillator lengths.

    The default length ``l = (2 A_ii / B_ii)^(1/4)`` diagonalises the variable's
    own quadratic part; with ``B_ii = 0`` it falls back to 1 with a warning.
    """
    if len(basis) != ham.size:
        raise BasisError(f"{len(basis)} basis specs given for {ham.size} variables")
    A, B = ham.A, ham.B
    out = []
    for i, (b, cls, lab) in enumerate(zip(basis, ham.classes, ham.labels)):
        if cls is VariableClass.PERIODIC and not isinstance(b, Charge):
            raise BasisError(f"θ{lab} is periodic and needs a charge basis, got {type(b).__name__}")
        if cls is VariableClass.EXTENDED and isinstance(b, Charge):
            raise BasisError(f"θ{lab} is extended; a charge basis needs a periodic variable")
        if isinstance(b, Harmonic) and b.osc_length is None:
            if B[i, i] > 0:
                length = (2 * A[i, i] / B[i, i]) ** 0.25
            else:
                warnings.warn(f"θ{lab} has no quadratic potential; using oscillator length 1", stacklevel=2)
                length = 1.0
            b = Harmonic(b.levels, float(length))
        out.append(b)
    return tuple(out)


def default_basis(
    ham: SymbolicHamiltonian,
    cutoff_charge: int | Sequence[int] = 10,
    ext_basis: str = "harmonic",
    cutoff_ext: int | Sequence[int] = 30,
    grid_width: float = 6 * math.pi,
    stencil: int = 3,
) -> tuple[BasisSpec, ...]:
    """One basis per variable: charge for periodic, harmonic or grid for extended.

    Scalar cutoffs apply to every variable of that class; sequences are consumed
    in variable order.
    """
    n_p = sum(c is VariableClass.PERIODIC for c in ham.classes)
    n_e = ham.size - n_p

    def expand(value, count, what):
        vals = [value] * count if np.isscalar(value) else list(value)
        if len(vals) != count:
            raise BasisError(f"{len(vals)} {what} cutoff(s) given for {count} variable(s)")
        return iter(vals)

    charge = expand(cutoff_charge, n_p, "charge")
    ext = expand(cutoff_ext, n_e, "extended")
    out: list[BasisSpec] = []
    for cls in ham.classes:
        if cls is VariableClass.PERIODIC:
            out.append(Charge(int(next(charge))))
        elif ext_basis == "harmonic":
            out.append(Harmonic(int(next(ext))))
        elif ext_basis == "grid":
            out.append(Grid(int(next(ext)), float(grid_width), int(stencil)))
        else:
            raise BasisError(f"unknown extended basis {ext_basis!r}; use 'harmonic' or 'grid'")
    return resolve_basis(ham, out)


def _flux_aliases(name: str) -> list[str]:
    if name.startswith("Φ"):
        return [name, "Phi" + name[1:]]
    return [name]


def bind_parameters(ham: SymbolicHamiltonian, params: Mapping[str, float] | None = None) -> dict[str, float]:
    """Resolve flux and offset values; defaults are flux 0 and the stored offsets.

    Fluxes accept ``Φk`` or ``Phik``.  Named element parameters are accepted
    only at their current value: changing them needs a rebuilt Hamiltonian.
    """
    binding = {name: 0.0 for name in ham.flux_symbols}
    binding.update(ham.offset_defaults)
    alias = {a: name for name in ham.flux_symbols for a in _flux_aliases(name)}
    for key, value in (params or {}).items():
        if key in alias:
            binding[alias[key]] = float(value)
        elif key in ham.offset_defaults:
            binding[key] = float(value)
        elif key in ham.param_names:
            if float(value) != ham.param_names[key]:
                raise HamiltonianError(
                    f"element parameter {key} changes the Hamiltonian coefficients; rebuild the circuit with it"
                )
        else:
            known = ", ".join(list(ham.flux_symbols) + list(ham.offset_defaults) + list(ham.param_names)) or "none"
            raise HamiltonianError(f"unknown symbol {key!r} (known: {known})")
    return binding


@dataclass(frozen=True)
class ProductTerm:
    coeff: complex
    factors: Mapping[int, tuple]

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.factors)


def product_terms(ham: SymbolicHamiltonian, binding: Mapping[str, float]) -> list[ProductTerm]:
    """Expand ``ham`` into product terms with numeric coefficients."""
    A, B, G, F = ham.A, ham.B, ham.G, ham.F
    n = ham.size
    flux = np.array([binding[s] for s in ham.flux_symbols], dtype=float)
    f = 2 * math.pi * flux
    terms: list[ProductTerm] = []

    def add(c, factors):
        if c != 0:
            terms.append(ProductTerm(complex(c), MappingProxyType(dict(factors))))

    for i in range(n):
        add(A[i, i], {i: ("Q2",)})
        for j in range(i + 1, n):
            add(2 * A[i, j], {i: ("Q",), j: ("Q",)})
    for i in range(n):
        add(B[i, i] / 2, {i: ("T2",)})
        for j in range(i + 1, n):
            add(B[i, j], {i: ("T",), j: ("T",)})
    for i, g in enumerate(G @ f if len(f) else np.zeros(n)):
        add(g, {i: ("T",)})
    add(0.5 * f @ F @ f if len(f) else 0.0, {})
    for j in ham.junction_terms:
        phase = 2 * math.pi * float(np.dot(np.array(j.flux, dtype=float), flux))
        coeffs = [float(c) for c in j.coeffs]
        up = {i: ("E", c) for i, c in enumerate(coeffs) if c != 0}
        down = {i: ("E", -c) for i, c in enumerate(coeffs) if c != 0}
        add(-float(j.EJ) / 2 * np.exp(1j * phase), up)
        add(-float(j.EJ) / 2 * np.exp(-1j * phase), down)
    return terms


def factor_matrix(ops: OperatorSet, key: tuple, offset: float = 0.0):
    """Realise one factor key in ``ops``; ``offset`` shifts the charge of a periodic variable."""
    kind = key[0]
    if kind in ("Q", "Q2"):
        q = ops.charge
        if offset:
            q = (q - offset * sps.identity(ops.dim, format="csr")).tocsr()
            return q if kind == "Q" else (q @ q).tocsr()
        return q if kind == "Q" else ops.charge_sq
    if kind in ("T", "T2"):
        if ops.theta is None:
            raise BasisError("a periodic variable in the charge basis cannot carry a polynomial phase term")
        return ops.theta if kind == "T" else ops.theta_sq
    if kind == "E":
        return ops.exp(key[1])
    raise BasisError(f"unknown operator factor {key!r}")


def kron_all(mats: Sequence) -> sps.csr_matrix:
    out = sps.identity(1, dtype=complex, format="csr")
    for m in mats:
        out = sps.kron(out, m, format="csr")
    return out


@dataclass(frozen=True)
class AssembledHamiltonian:
    """Sparse Hermitian matrix with the bases and parameter values that produced it."""

    matrix: sps.csr_matrix
    dims: tuple[int, ...]
    basis: tuple[BasisSpec, ...]
    param_binding: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "param_binding", MappingProxyType(dict(self.param_binding)))

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def hermiticity_error(self) -> float:
        diff = self.matrix - self.matrix.conj().T
        return float(abs(diff).max()) if diff.nnz else 0.0


class TermRealiser:
    """Turns product terms into matrices over a chosen subset of variables."""

    def __init__(self, ham: SymbolicHamiltonian, basis: Sequence[BasisSpec], binding: Mapping[str, float]):
        self.basis = resolve_basis(ham, basis)
        self.ops = [ops_for(b) for b in self.basis]
        self.offsets = [binding.get(ham.offset_charges.get(lab, ""), 0.0) for lab in ham.labels]

    def factor(self, var: int, key: tuple):
        return factor_matrix(self.ops[var], key, self.offsets[var])

    def term_matrix(self, term: ProductTerm, variables: Sequence[int]):
        mats = []
        for v in variables:
            if v in term.factors:
                mats.append(self.factor(v, term.factors[v]))
            else:
                mats.append(sps.identity(self.ops[v].dim, dtype=complex, format="csr"))
        return term.coeff * kron_all(mats)


def assemble(
    ham: SymbolicHamiltonian,
    basis: Sequence[BasisSpec],
    params: Mapping[str, float] | None = None,
) -> AssembledHamiltonian:
    """Sum of Kronecker products over every variable of ``ham``.

    Each junction cosine becomes ``-EJ/2 (U + U^dag)`` with
    ``U = exp(i 2pi f.Phi) (x)_i exp(i c_i theta_i)``.
    """
    binding = bind_parameters(ham, params)
    real = TermRealiser(ham, basis, binding)
    variables = list(range(ham.size))
    dims = tuple(o.dim for o in real.ops)
    dim = int(np.prod(dims)) if dims else 1
    H = sps.csr_matrix((dim, dim), dtype=complex)
    for term in product_terms(ham, binding):
        H = H + real.term_matrix(term, variables)
    return AssembledHamiltonian(H.tocsr(), dims, real.basis, binding)
