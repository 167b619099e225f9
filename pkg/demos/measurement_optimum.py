"""
Checking the optimal measurement
================================

The closed-form classical correlation assumes a measurement along x. Here
the conditional entropy is scanned over all projective measurements and the
numerical optimum is compared with it.
"""

import math

import numpy as np

from xydiscord import (
    ModelParams,
    build_state,
    classical_correlation_closed,
    classical_correlation_optimized,
    conditional_entropy_grid,
    correlator_set,
)

state = build_state(correlator_set(2, ModelParams(0.5, 1.1, 0.1)))

# coarse picture of the objective: theta down, phi across
thetas = np.linspace(0, math.pi, 7)
phis = np.linspace(0, 2 * math.pi, 8, endpoint=False)
print(np.array2string(conditional_entropy_grid(state, thetas, phis), precision=4))

c_opt, angles = classical_correlation_optimized(state)
print(f"closed form {classical_correlation_closed(state):.10f}")
print(f"optimized   {c_opt:.10f} at theta={angles.theta:.6f}, phi={angles.phi:.6f}")
