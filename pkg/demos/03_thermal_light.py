"""Thermal statistics on the photon-added levels: averages, cold limit and phase-space traces.

Run with  python3 demos/03_thermal_light.py
"""
import math

from pasipcs import coherent_states as cs
from pasipcs import poschl_teller as pt
from pasipcs import thermal as th

well = pt.PTParams()
phase = cs.ZChoice.phase_only()

print(" m   beta      <N>          Q")
for m in (0, 1, 2):
    for beta in (0.2, 1.0, 5.0, 50.0):
        r = th.thermal_report(well, phase, th.ThermalConfig(beta, m))
        print(f"{m:2d} {beta:6.1f} {r.mean_N:12.6g} {r.mandel_q:10.4g}")

# The Husimi function integrates to one against the weight.
for m in (0, 1):
    print(f"m={m}: integral of omega Q = {th.husimi_trace(well, phase, th.ThermalConfig(1.0, m)):.10f}")

# The P-function reproduces the geometric occupations q^n (1 - q).
cfg = th.ThermalConfig(0.7, 1)
print("P normalization:", th.p_normalization(well, phase, cfg))
q = math.exp(-0.7)
print("diagonal from P:", th.p_diagonal(well, phase, cfg, 4))
print("q^n (1 - q):    ", [q ** n * (1 - q) for n in range(5)])

# Reference closed forms next to the direct sums, under both occupation conventions.
check = th.closed_form_crosscheck(well, phase, th.ThermalConfig(1.0, 2))
for conv, dev in check.deviation.items():
    print(conv, {k: f"{v:+.3g}" for k, v in dev.items()})
