"""
Quantum versus classical correlation at finite temperature
==========================================================

Second neighbours, XX chain (gamma = 0) against the Ising chain
(gamma = 1). Also shows discord growing with temperature in the XX chain.
"""

import numpy as np

from xydiscord import ModelParams, evaluate_point

for gamma in (0.0, 1.0):
    print(f"gamma={gamma}: sign of D - C (+ means discord larger)")
    for kT in (0.2, 0.5, 1.0):
        signs = ""
        for lam in (0.2, 0.6, 1.0, 1.4, 1.8):
            r = evaluate_point(ModelParams(gamma, lam, kT), 2).report
            signs += "+" if r.discord >= r.classical else "-"
        print(f"  kT={kT:.1f}: {signs}")

# the Ising point (lam=0.2, kT=0.2) is an exception to "classical dominates"
r = evaluate_point(ModelParams(1.0, 0.2, 0.2), 2).report
print(f"Ising lam=0.2 kT=0.2: D={r.discord:.3e} C={r.classical:.3e}")

# XX chain at lam=1: discord first rises with temperature
for kT in np.linspace(0.02, 0.3, 8):
    print(f"kT={kT:.2f} D={evaluate_point(ModelParams(0.0, 1.0, kT), 2).report.discord:.5f}")
