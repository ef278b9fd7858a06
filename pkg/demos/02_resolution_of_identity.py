"""Resolution-of-identity weights: moments, the m = 0 closed form and the family of curves.

Run with  python3 demos/02_resolution_of_identity.py  (writes weights.csv next to the cwd)
"""
import csv

import numpy as np

from pasipcs import coherent_states as cs
from pasipcs import measure
from pasipcs import poschl_teller as pt

well = pt.PTParams()
gamma = cs.ZChoice.gamma_weighted()

# In the unit disc the m = 0 weight is elementary.
spec0 = measure.WeightSpec(gamma, well, 0)
for x in (0.1, 0.5, 0.9):
    print(f"omega_0({x}) kernel {measure.weight_function(spec0, x):.10f}"
          f"  elementary {measure.weight_closed_m0(spec0, x):.10f}")

# The radial density reproduces the squared coefficients as its moments.
for choice, m, n_max in ((gamma, 2, 6), (cs.ZChoice.phase_only(), 1, 5)):
    rep = measure.identity_resolution_report(measure.WeightSpec(choice, well, m), n_max)
    print(f"{choice.kind} m={m}: worst moment error {rep.worst:.1e}")
    for r in rep.moments[:3]:
        print(f"   n={r.n}: integral {r.integral:.12g} target {r.target:.12g}")

# Curves for the phase choice at rho = 2, lam = 1.
xs = np.linspace(0.05, 10.0, 80)
curves = measure.family_curves(xs)
with open("weights.csv", "w", newline="") as fh:
    out = csv.writer(fh)
    out.writerow(["x"] + [f"omega_{m}" for m in curves.curves])
    for i, x in enumerate(xs):
        out.writerow([f"{x:.6g}"] + [f"{curves.curves[m][i]:.8g}" for m in curves.curves])
print("wrote weights.csv; ratio to m=0 at x=10:",
      {m: round(float(v[-1] / curves.curves[0][-1]), 4) for m, v in curves.curves.items()})
