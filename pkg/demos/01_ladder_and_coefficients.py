"""Walk up the trigonometric well: spectrum, ladder states and the first coherent state.

Run with  python3 demos/01_ladder_and_coefficients.py
"""
import numpy as np

from pasipcs import coherent_states as cs
from pasipcs import poschl_teller as pt
from pasipcs import susy_core as sc

well = pt.PTParams(l=2, l_prime=2, a=1.0)
print(f"well with lam={well.lam}, rho={well.rho}, nu={well.nu}")

# Energies come from summing the shape-invariance remainders; compare with the quadratic law.
levels = sc.spectrum(pt.pt_chain(well), 6).energies
print("levels by remainder sums:", levels)
print("levels by lam^2 n(n+2rho):", [pt.energy(well, n) for n in range(7)])

# The same ladder on a grid: A psi_0 vanishes and each built state is an eigenfunction.
rep = sc.verify_partner_relations(pt.pt_model(well), 3)
for key, (worst, ok) in rep.status().items():
    print(f"  {key:22s} worst {worst:.1e}  {'ok' if ok else 'over tolerance'}")

# Coefficients of the photon-added family: the literal product and the Gamma closed form.
for choice in (cs.ZChoice.phase_only(alpha=0.2), cs.ZChoice.gamma_weighted(alpha=0.2)):
    table = cs.coefficient_table(choice, well, 1, 4)
    print(f"{choice.kind}: |K_n^1|^2 for n <= 4 ->", np.round(table.mod2, 6))
print("phase choice |K_1^1|^2 =", abs(cs.coefficient_closed(cs.ZChoice.phase_only(), well, 1, 1)) ** 2, "(7/12)")

# A state with two added quanta: no weight below level 2, most weight just above it.
state = cs.state_coefficients(cs.ZChoice.phase_only(), well, 1.2 + 0.4j, 2)
probs = state.probabilities()
print("occupation of levels 0..6:", np.round(probs[:7], 4), "sum", probs.sum())

# m = 0 states are eigenstates of the lowering operator.
for z in (0.5, 2.0 + 1.0j):
    print(f"lowering residual at z={z}:", cs.lowering_eigenvalue_check(cs.ZChoice.phase_only(), well, z))
