"""Rényi thermal states of a three-level system across orders and temperatures.

Shows the power-law populations, the entropy identity S = ln Z, the cutoff
for alpha < 1 and the approach to the Gibbs state as alpha -> 1.
"""

import numpy as np

from renyitherm import gibbs_state, solve_thermal_state, trace_distance
from renyitherm.errors import MultipleRoots

H = np.diag([0.0, 0.5, 1.5])

print("alpha  beta   U        S        ln Z     populations")
for alpha in (0.5, 0.9, 1.0, 2.0, 3.0):
    for beta in (0.3, 1.0, 2.5):
        try:
            th = solve_thermal_state(H, beta, alpha)
        except MultipleRoots as exc:
            print(f"{alpha:<6} {beta:<6} multiple self-consistent energies {np.round(exc.roots, 4)}")
            continue
        pops = " ".join(f"{p:.4f}" for p in th.populations)
        cut = "  (cutoff)" if th.cutoff_applied else ""
        print(f"{alpha:<6} {beta:<6} {th.U:.5f}  {th.S:.5f}  {np.log(th.Z):.5f}  {pops}{cut}")

print("\ndistance to the Gibbs state at beta = 1")
g = gibbs_state(H, 1.0)
for eps in (1e-1, 1e-2, 1e-3, 1e-4):
    d = max(trace_distance(solve_thermal_state(H, 1.0, 1 + s * eps).state, g) for s in (-1, 1))
    print(f"|alpha - 1| = {eps:.0e}: {d:.3e}")
