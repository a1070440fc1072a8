"""Command-line front end: ``circq {classify,hamiltonian,eigenvals,sweep} NETLIST [options]``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from circq.circuit import Circuit
from circq.diag import HierarchySpec, sweep
from circq.errors import CircuitError
from circq.symham import to_json
from circq.transform import load_matrix


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _cutoffs(text: str):
    vals = _int_list(text)
    return vals[0] if len(vals) == 1 else tuple(vals)


def _binding(text: str) -> tuple[str, float]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    name, value = text.split("=", 1)
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse value in {text!r}") from None


def _values(text: str) -> list[float]:
    """``a,b,c`` or ``start:stop:count`` (inclusive linspace)."""
    if ":" in text:
        start, stop, count = text.split(":")
        return list(np.linspace(float(start), float(stop), int(count)))
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("netlist", type=Path, help="netlist file")
    common.add_argument("--closure", type=_int_list, help="closure branch ids, e.g. 5,6")
    common.add_argument("--transform", type=Path, help="CSV/JSON matrix Z (rows = nodes 1..N)")
    common.add_argument("--param", type=_binding, action="append", default=[], metavar="NAME=VALUE",
                        help="bind a flux (Φ1 or Phi1), offset (ng1) or named element parameter")
    common.add_argument("--output", "-o", type=Path, help="write the result here instead of stdout")

    solve = argparse.ArgumentParser(add_help=False)
    solve.add_argument("-k", type=int, default=6, help="number of eigenvalues")
    solve.add_argument("--ext-basis", choices=["harmonic", "grid"], default="harmonic")
    solve.add_argument("--cutoff-ext", type=_cutoffs, default=30,
                       help="levels (harmonic) or points (grid); one value or one per extended variable")
    solve.add_argument("--cutoff-charge", type=_cutoffs, default=10, help="charge cutoff n (dimension 2n+1)")
    solve.add_argument("--grid-width", type=float, default=6 * math.pi, help="grid half width in radians")
    solve.add_argument("--stencil", type=int, choices=[3, 5, 7], default=3)
    solve.add_argument("--hierarchy", type=json.loads, help='variable groups by θ label, e.g. "[[1],[2]]"')
    solve.add_argument("--trunc", type=_int_list, help="states kept per hierarchy group, e.g. 6,6")

    parser = argparse.ArgumentParser(prog="circq", description="Quantize lumped-element superconducting circuits.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="list variables, classes and Z")
    p = sub.add_parser("hamiltonian", parents=[common], help="print the symbolic Hamiltonian")
    p.add_argument("--precision", type=int, default=3, help="significant digits")
    p.add_argument("--format", choices=["text", "json"], default="text")
    sub.add_parser("eigenvals", parents=[common, solve], help="lowest eigenvalues in GHz")
    p = sub.add_parser("sweep", parents=[common, solve], help="spectrum table over one parameter")
    p.add_argument("name", help="parameter to sweep")
    p.add_argument("values", type=_values, help="comma list or start:stop:count")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    return parser


def _circuit(args) -> Circuit:
    Z = load_matrix(args.transform) if args.transform else None
    options = {}
    if hasattr(args, "k"):
        options = dict(
            cutoff_charge=args.cutoff_charge,
            ext_basis=args.ext_basis,
            cutoff_ext=args.cutoff_ext,
            grid_width=args.grid_width,
            stencil=args.stencil,
        )
    circuit = Circuit.from_file(args.netlist, closure=args.closure, transformation=Z, **options)
    element = {n: v for n, v in args.param if n in circuit.graph.param_names}
    return circuit.with_params(element) if element else circuit


def _hierarchy(args) -> HierarchySpec | None:
    if args.hierarchy is None:
        if args.trunc:
            raise CircuitError("--trunc needs --hierarchy")
        return None
    if not args.trunc:
        raise CircuitError("--hierarchy needs --trunc")
    return HierarchySpec(args.hierarchy, args.trunc)


def _classify(circuit: Circuit) -> str:
    t = circuit.transformation
    lines = []
    for lab, cls in zip(t.labels, t.classes):
        lines.append(f"θ{_sub(lab)}: {cls.value}")
    lines.append("Z (φ = Z θ):")
    for row in t.Z.tolist():
        lines.append("  [" + ", ".join(f"{str(x):>5}" for x in row) + "]")
    if circuit.tree.flux_symbols:
        loops = ", ".join(f"{s} on branch {b}" for b, s in circuit.tree.flux_assignment.items())
        lines.append(f"external flux: {loops}")
    return "\n".join(lines)


def _sub(n: int) -> str:
    return str(n).translate(str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉"))


def format_eigenvalues(values) -> str:
    return "\n".join(f"{float(v):.8f}" for v in values)


def execute(args: argparse.Namespace) -> str:
    circuit = _circuit(args)
    runtime = {n: v for n, v in args.param if n not in circuit.graph.param_names}
    if args.command == "classify":
        return _classify(circuit)
    if args.command == "hamiltonian":
        if args.format == "json":
            return to_json(circuit.hamiltonian, indent=2)
        return circuit.render(args.precision, note=True)
    hier = _hierarchy(args)
    if args.command == "eigenvals":
        result = circuit.eigenvals(args.k, params=runtime or None, hierarchy=hier)
        return format_eigenvalues(result.eigenvalues)
    table = sweep(circuit, args.name, args.values, args.k, params=runtime, hierarchy=hier)
    return table.to_csv() if args.format == "csv" else table.to_json()


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Execute one command; returns (exit status, output text or diagnostic)."""
    args = build_parser().parse_args(argv)
    try:
        return 0, execute(args)
    except (CircuitError, OSError) as exc:
        return 1, f"circq: error: {exc}"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = execute(args)
    except (CircuitError, OSError) as exc:
        print(f"circq: error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        args.output.write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
