"""
Reading the spectrum off the diagonal blocks
============================================

The similarity S = [[1, -X*], [X, 1]] turns H into diag(Z+, Z-).  Each
eigenvalue of H is an eigenvalue of exactly one block, and J tells which.
"""

import numpy as np

from rabi_riccati import ModelParams, block_diagonalize, build_full_h, eigenpairs, solve_fixed_point
from rabi_riccati.symmetry import build_generator

p = ModelParams(omega=1.0, beta=0.2, delta=0.1, g=0.1, dim=60)
x = solve_fixed_point(p).x0

res = block_diagonalize(p, x)
print(f"off-diagonal blocks of S^-1 H S (interior): {res.offdiag_defect:.1e}")
print(f"eigenvalues of Z+ and Z- vs H: {res.spectrum_union_defect:.1e}")

# The blocks are not Hermitian, yet their eigenvalues come out real.
print("max |Im| over eig(Z+):", f"{np.max(np.abs(np.linalg.eigvals(res.z_plus).imag)):.1e}")

h = build_full_h(p).to_array()
dense = np.linalg.eigvalsh(h)
j = build_generator(x).j.to_array()

print("\n  lambda       dense        side        <J>")
for pair, ref in zip(eigenpairs(p, x, 5), dense):
    j_exp = np.real(np.vdot(pair.vector, j @ pair.vector))
    print(f"{pair.value:9.6f}  {ref:9.6f}  {pair.side:>10}  {j_exp:+.3f}")
