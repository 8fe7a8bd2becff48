"""Clausius inequality near equilibrium for a qubit with a coherent perturbation.

For each order the entropy change is compared with three heat expressions;
the gaps are second order in the displacement dq.
"""

import numpy as np

from renyitherm import clausius_sweep

for dq in (0.01, 0.005, 0.001):
    recs = clausius_sweep(0.7, 1.0, dq)
    gaps = np.array([r.clausius_gaps() for r in recs])
    worst = gaps.min(axis=0) / dq**2
    print(f"dq = {dq}: min gap / dq^2 = {worst[0]:+.3f} (Q1) {worst[1]:+.3f} (Q2) {worst[2]:+.3f} (dU)")

print("\nalpha  dS           beta dQ1     gap1         dDelta~'")
for r in clausius_sweep(0.7, 1.0, 0.001)[::7]:
    print(f"{r.alpha:<6.1f} {r.dS:+.4e}  {r.beta_dQ1:+.4e}  {r.clausius_gaps()[0]:+.4e}  {r.dDeltaTildePrime:+.4e}")
