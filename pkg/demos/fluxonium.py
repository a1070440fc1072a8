"""
Fluxonium: two bases for one extended variable
==============================================

The inductive shunt removes the periodicity of the junction phase, so θ₁
is extended.  The same Hamiltonian is realised in a harmonic-oscillator
basis and on a finite-difference grid; their agreement shows how the grid
error falls with spacing for each stencil.
"""

from pathlib import Path

import numpy as np

from circq import Circuit, Grid, Harmonic, assemble, eigenvals

HERE = Path(__file__).parent

fluxonium = Circuit.from_file(HERE / "netlists" / "fluxonium.yaml")
print(fluxonium.render())
(flux,) = fluxonium.hamiltonian.flux_symbols
params = {flux: 0.5}

reference = eigenvals(assemble(fluxonium.hamiltonian, [Harmonic(200)], params), 5).eigenvalues
print("harmonic, 200 levels:", np.round(reference, 8))

print("points  stencil  max |E_grid - E_harmonic|")
for points in (201, 401, 801, 1601):
    for stencil in (3, 5, 7):
        basis = [Grid(points, 6 * np.pi, stencil)]
        e = eigenvals(assemble(fluxonium.hamiltonian, basis, params), 5).eigenvalues
        print(f"{points:6d}  {stencil:7d}  {np.max(np.abs(e - reference)):.3e}")

# the half-flux sweet spot sits at the top of the flux sweep
for phi in np.linspace(0.0, 0.5, 6):
    e = fluxonium.eigenvals(2, params={flux: phi}).eigenvalues
    print(f"Φ = {phi:.1f}  f01 = {e[1] - e[0]:.6f} GHz")
