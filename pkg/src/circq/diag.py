"""Eigenvalue solvers: ordinary, hierarchical, and parameter sweeps."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import TYPE_CHECKING, Any, Mapping, Sequence

import numpy as np
import scipy.linalg as sl
import scipy.sparse as sps
import scipy.sparse.linalg as spl

from circq.errors import BasisError, ConvergenceError
from circq.operators import (
    AssembledHamiltonian,
    BasisSpec,
    ProductTerm,
    TermRealiser,
    bind_parameters,
    kron_all,
    product_terms,
)
from circq.symham import SymbolicHamiltonian

if TYPE_CHECKING:
    from circq.circuit import Circuit

DENSE_LIMIT = 512
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class HierarchySpec:
    """Partition of the dynamical variables (by θ label) with per-group truncation."""

    partition: tuple[tuple[int, ...], ...]
    trunc_dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "partition", tuple(tuple(int(v) for v in g) for g in self.partition))
        object.__setattr__(self, "trunc_dims", tuple(int(t) for t in self.trunc_dims))
        if len(self.partition) != len(self.trunc_dims):
            raise BasisError(f"{len(self.trunc_dims)} truncation dims for {len(self.partition)} groups")
        if any(t < 1 for t in self.trunc_dims):
            raise BasisError("truncation dims must be >= 1")
        flat = [v for g in self.partition for v in g]
        if len(flat) != len(set(flat)) or any(not g for g in self.partition):
            raise BasisError("hierarchy groups must be non-empty and disjoint")


@dataclass(frozen=True)
class SpectrumResult:
    """Ascending eigenvalues (GHz), optional eigenvectors (columns) and solver metadata."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta)))

    @property
    def residuals(self) -> list[float]:
        return list(self.meta.get("residuals", []))


def _residuals(H, w, v) -> np.ndarray:
    r = H @ v - v * w
    return np.linalg.norm(r, axis=0) / np.linalg.norm(v, axis=0)


def _decoupled_shift(H: sps.csr_matrix) -> float:
    """Shift that keeps every decoupled basis state off zero.

    ARPACK misses an eigenvalue whose eigenvector is a basis state with an
    empty row.  Rows holding only a diagonal entry are found correctly, so
    shifting past their largest magnitude is enough.
    """
    H = H.copy()
    H.eliminate_zeros()
    counts = np.diff(H.indptr)
    if counts.min() > 0:
        return 0.0
    diag = H.diagonal()
    lone = (counts == 0) | ((counts == 1) & (diag != 0))
    return -(1.0 + float(np.abs(diag[lone]).max()))


def _solve(H, k: int, vectors: bool, maxiter: int | None = None):
    """Lowest ``k`` eigenpairs of a Hermitian matrix; returns (w, v, solver, residuals)."""
    dim = H.shape[0]
    if not 1 <= k <= dim:
        raise BasisError(f"k must be between 1 and the dimension {dim}, got {k}")
    if dim < DENSE_LIMIT or k >= dim - 1:
        dense = H.toarray() if sps.issparse(H) else np.asarray(H)
        w, v = sl.eigh(dense, subset_by_index=[0, k - 1])
        solver = "dense"
    else:
        H = sps.csr_matrix(H)
        shift = _decoupled_shift(H)
        op = H - shift * sps.identity(dim, dtype=H.dtype, format="csr") if shift else H
        v0 = np.ones(dim, dtype=H.dtype) / np.sqrt(dim)
        try:
            w, v = spl.eigsh(op, k=k, which="SA", v0=v0, tol=0, maxiter=maxiter)
            w = w + shift
        except spl.ArpackNoConvergence as exc:
            res = _residuals(H, exc.eigenvalues + shift, exc.eigenvectors) if len(exc.eigenvalues) else []
            raise ConvergenceError(
                f"iterative eigensolver did not converge ({len(exc.eigenvalues)} of {k} pairs)", list(res)
            ) from None
        order = np.argsort(w)
        w, v = w[order], v[:, order]
        solver = "arpack"
    res = _residuals(H, w, v)
    if np.any(res > RESIDUAL_TOL):
        raise ConvergenceError(f"eigenpair residuals up to {res.max():.3g} exceed {RESIDUAL_TOL:g}", list(res))
    return np.asarray(w, dtype=float), (v if vectors else None), solver, res


def eigenvals(H: AssembledHamiltonian | Any, k: int = 6, vectors: bool = False, maxiter: int | None = None) -> SpectrumResult:
    """Lowest ``k`` eigenvalues of an assembled Hamiltonian (or any Hermitian matrix).

    Dimensions below 512 use dense ``eigh``; larger ones ARPACK Lanczos with a
    normalised all-ones starting vector, so repeated runs agree.
    """
    if isinstance(H, AssembledHamiltonian):
        mat = H.matrix
        meta = {"basis": [repr(b) for b in H.basis], "dims": list(H.dims), "params": dict(H.param_binding)}
    else:
        mat = H if sps.issparse(H) else np.asarray(H)
        meta = {"dims": [mat.shape[0]]}
    t0 = time.perf_counter()
    w, v, solver, res = _solve(mat, k, vectors, maxiter)
    meta.update(solver=solver, residuals=[float(r) for r in res], seconds=time.perf_counter() - t0)
    return SpectrumResult(w, v, meta)


def _group_positions(ham: SymbolicHamiltonian, hier: HierarchySpec) -> list[list[int]]:
    groups = []
    for g in hier.partition:
        pos = []
        for label in g:
            if label not in ham.labels:
                raise BasisError(f"hierarchy names θ{label}, which is not a dynamical variable (have {list(ham.labels)})")
            pos.append(ham.labels.index(label))
        groups.append(pos)
    covered = sorted(p for g in groups for p in g)
    if covered != list(range(ham.size)):
        missing = [ham.labels[i] for i in range(ham.size) if i not in covered]
        raise BasisError(f"hierarchy does not cover variable(s) {missing}")
    return groups


def hierarchical_eigenvals(
    ham: SymbolicHamiltonian,
    basis: Sequence[BasisSpec],
    params: Mapping[str, float] | None,
    hier: HierarchySpec,
    k: int = 6,
) -> SpectrumResult:
    """Two-stage diagonalization over a partition of the variables.

    Stage 1 diagonalizes each group with only the terms acting inside it and
    keeps the lowest ``trunc_dims`` states.  Stage 2 writes the remaining terms
    as products of per-group factors (cross-group cosines are already products
    of per-variable exponentials), projects every factor onto the kept states,
    and diagonalizes the result.
    """
    t0 = time.perf_counter()
    binding = bind_parameters(ham, params)
    real = TermRealiser(ham, basis, binding)
    groups = _group_positions(ham, hier)
    owner = {p: gi for gi, g in enumerate(groups) for p in g}
    terms = product_terms(ham, binding)

    intra: list[list] = [[] for _ in groups]
    cross, const = [], 0.0
    for t in terms:
        touched = {owner[v] for v in t.support}
        if not touched:
            const += t.coeff
        elif len(touched) == 1:
            intra[touched.pop()].append(t)
        else:
            cross.append(t)

    energies, vecs = [], []
    for gi, g in enumerate(groups):
        dim = int(np.prod([real.ops[v].dim for v in g]))
        trunc = hier.trunc_dims[gi]
        if trunc > dim:
            raise BasisError(f"truncation {trunc} exceeds dimension {dim} of group {list(hier.partition[gi])}")
        Hg = sps.csr_matrix((dim, dim), dtype=complex)
        for t in intra[gi]:
            Hg = Hg + real.term_matrix(t, g)
        w, v, _, _ = _solve(Hg.tocsr(), trunc, True)
        energies.append(w)
        vecs.append(v)

    dims = list(hier.trunc_dims)
    total = int(np.prod(dims))
    eye = [sps.identity(d, dtype=complex, format="csr") for d in dims]
    H = const * sps.identity(total, dtype=complex, format="csr")
    for gi in range(len(groups)):
        H = H + kron_all([sps.diags(energies[gi]).astype(complex) if j == gi else eye[j] for j in range(len(dims))])
    for t in cross:
        mats = []
        for gi, g in enumerate(groups):
            local = {v: t.factors[v] for v in g if v in t.factors}
            if local:
                Fg = real.term_matrix(ProductTerm(1.0, local), g)
                mats.append(sps.csr_matrix(vecs[gi].conj().T @ (Fg @ vecs[gi])))
            else:
                mats.append(eye[gi])
        H = H + t.coeff * kron_all(mats)
    H = ((H + H.conj().T) / 2).tocsr()
    w, v, solver, res = _solve(H, min(k, total), False)
    meta = {
        "basis": [repr(b) for b in real.basis],
        "hierarchy": [list(g) for g in hier.partition],
        "trunc_dims": dims,
        "params": binding,
        "solver": f"hierarchical/{solver}",
        "residuals": [float(r) for r in res],
        "seconds": time.perf_counter() - t0,
    }
    return SpectrumResult(w, None, meta)


@dataclass(frozen=True)
class SpectrumTable:
    """One spectrum per parameter value, in input order."""

    param: str
    values: tuple[float, ...]
    results: tuple[SpectrumResult, ...]

    def rows(self) -> list[list[float]]:
        return [[v, *map(float, r.eigenvalues)] for v, r in zip(self.values, self.results)]

    def to_csv(self, digits: int = 8) -> str:
        k = max((len(r.eigenvalues) for r in self.results), default=0)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([self.param] + [f"E{i}" for i in range(k)])
        for row in self.rows():
            writer.writerow([repr(row[0])] + [f"{x:.{digits}f}" for x in row[1:]])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "param": self.param,
            "rows": [
                {"value": v, "eigenvalues": [float(x) for x in r.eigenvalues], "meta": _jsonable(dict(r.meta))}
                for v, r in zip(self.values, self.results)
            ],
        }
        return json.dumps(payload, ensure_ascii=False, indent=2)


def _jsonable(obj):
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def sweep(
    circuit: Circuit,
    param: str,
    values: Sequence[float],
    k: int = 6,
    params: Mapping[str, float] | None = None,
    max_workers: int | None = None,
    **solve_kwargs,
) -> SpectrumTable:
    """Spectrum for each value of one parameter.

    Flux and offset-charge parameters only re-assemble the matrix.  Named element
    parameters rebuild the Hamiltonian coefficients with the same
    transformation, since the transformation depends on topology alone.  Rows
    run concurrently and are returned in input order.  ``params`` holds fixed
    flux and offset values applied to every row.
    """
    values = tuple(float(v) for v in values)
    kind = circuit.parameter_kind(param)
    base = dict(params or {})

    def row(value):
        if kind == "element":
            return circuit.with_params({param: value}).eigenvals(k, params=base or None, **solve_kwargs)
        return circuit.eigenvals(k, params={**base, param: value}, **solve_kwargs)

    if not values:
        return SpectrumTable(param, (), ())
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = tuple(pool.map(row, values))
    return SpectrumTable(param, values, results)
