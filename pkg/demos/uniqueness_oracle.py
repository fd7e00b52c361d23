"""
Is the small solution really unique?
====================================

For a handful of Fock levels every invariant graph subspace of H can be
enumerated by picking n of the 2n eigenvectors.  Among all those Riccati
solutions exactly one lies in the ball |X| < d/(pi |Delta|), and it is the
one the fixed-point iteration finds.
"""

import math

from rabi_riccati import ModelParams, solve_brute_force, solve_fixed_point
from rabi_riccati.rabi import opnorm, spectral_distance

p = ModelParams(omega=1.0, beta=0.15, delta=0.05, g=0.2 + 0.1j, dim=5)
radius = spectral_distance(p) / (math.pi * abs(p.delta))
print(f"ball radius d/(pi |Delta|) = {radius:.3f}")

solutions = solve_brute_force(p)
print(f"{len(solutions)} graph solutions in total; the five smallest norms:")
print("  ", " ".join(f"{s.x_norm:.3g}" for s in solutions[:5]))

inside = [s for s in solutions if s.x_norm < radius]
x_fp = solve_fixed_point(p).x0
print(f"inside the ball: {len(inside)}, distance to fixed point {opnorm(inside[0].x0 - x_fp):.1e}")
