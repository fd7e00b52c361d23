"""
Where does the iteration work?
==============================

Scan the bias beta and the splitting Delta.  The smallness condition
|Delta| < d/pi carves out a region around each gap of 2 beta mod omega; the
iteration is guaranteed inside it and often still converges a bit beyond.
"""

from rabi_riccati import ModelParams, SolverConfig
from rabi_riccati.cli import sweep_point

base = ModelParams(omega=1.0, beta=0.2, delta=0.1, g=0.1, dim=24)
cfg = SolverConfig(max_iter=300)

betas = [0.05, 0.15, 0.25, 0.35, 0.45]
deltas = [0.02, 0.06, 0.10, 0.14, 0.18]

# Legend: '#' guaranteed and converged, '+' converged only with the gate
# overridden, '.' did not converge.
print("beta \\ Delta  " + "  ".join(f"{d:.2f}" for d in deltas))
for b in betas:
    cells = []
    for d in deltas:
        row = sweep_point(base.replace(beta=b, delta=d), cfg, override_gate=True)
        cells.append("#" if row["smallness"] and row["converged"] else "+" if row["converged"] else ".")
    print(f"    {b:.2f}      " + "     ".join(cells))
