"""Carnot cycle of a qubit with tunable gap, for thermal and deformed state families.

The efficiency equals 1 - Tc/Th for every order and both free-energy routes.
"""

import numpy as np

from renyitherm import (
    StateFamily,
    coherent_mixing_factory,
    qubit_gap_family,
    qubit_rotation,
    run_carnot_cycle,
)

Th, Tc = 2.0, 1.0
mix = coherent_mixing_factory(qubit_rotation(np.pi / 5), 0.2)

print(f"Carnot bound 1 - Tc/Th = {1 - Tc / Th}")
print("alpha  family    route        W_total    Qex1       efficiency")
for alpha in (0.5, 0.9, 1.0, 2.0, 3.0):
    for name, factory in (("thermal", None), ("deformed", mix)):
        for route in ("traditional", "sandwiched"):
            rep = run_carnot_cycle(StateFamily(qubit_gap_family(), alpha, factory), 2.0, 1.0, Th, Tc, 500, route)
            print(f"{alpha:<6} {name:<9} {route:<12} {rep.total_work:+.6f}  {rep.Qex1:+.6f}  {rep.efficiency:.12f}")

rep = run_carnot_cycle(StateFamily(qubit_gap_family(), 2.0, mix), 2.0, 1.0, Th, Tc, 500)
print("\nstroke ledger (alpha = 2, deformed)")
for k, s in enumerate(rep.strokes, 1):
    print(f"stroke {k}: dU {s.dU:+.6f}  heat {s.heat_total:+.6f}  excess {s.heat_excess:+.6f}"
          f"  housekeeping {s.heat_housekeeping:+.6f}  dS {s.entropy_change:+.6f}")
print(f"closure {rep.closure_distance:.1e}, net entropy {rep.net_entropy:.1e}")
