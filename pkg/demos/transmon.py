"""
Transmon: from netlist to charge-dispersion table
=================================================

A single junction quantized in the charge basis.  The spectrum depends on
the offset charge ng1 with period one Cooper pair; the dispersion shrinks
exponentially as EJ/EC grows.
"""

from pathlib import Path

import numpy as np

from circq import Circuit, sweep

HERE = Path(__file__).parent

# the pipeline spots the junction-only island and makes θ₁ periodic
transmon = Circuit.from_file(HERE / "netlists" / "transmon.yaml", cutoff_charge=20)
print(transmon.render(note=True))

# the lowest levels at the sweet spot
levels = transmon.eigenvals(4).eigenvalues
print("E_k - E_0 at ng1 = 0:", np.round(levels - levels[0], 6))

# a sweep over one period of the offset charge; rows come back in order
table = sweep(transmon, "ng1", np.linspace(0.0, 1.0, 5), k=3)
print(table.to_csv(digits=6))

# charge dispersion of the first transition versus EJ (element rebinding)
for ej in (5.0, 10.0, 20.0, 40.0):
    c = transmon.with_params({"EJ": ej})
    f = [np.diff(c.eigenvals(2, params={"ng1": ng}).eigenvalues)[0] for ng in (0.0, 0.5)]
    print(f"EJ = {ej:5.1f}  f01 = {f[0]:.6f}  dispersion = {abs(f[1] - f[0]):.3e}")
