"""Shock capturing sanity check: a Burgers step moves at speed 1/2.

The flux divergence is the WENO5 + Lax-Friedrichs building block of the
coupled solver; with the source switched off the first equation is the
inviscid Burgers equation, and a 1 -> 0 step propagates at the
Rankine-Hugoniot speed (f_L - f_R)/(u_L - u_R) = 1/2 while staying free of
spurious oscillations.
"""

import numpy as np

from reswave import PeriodicGrid, RealField
from reswave.mrs import MrsState, rk4_step

n = 1024
grid = PeriodicGrid(n)
x = grid.x
u0 = np.where((x > np.pi / 2) & (x < np.pi), 1.0, 0.0)
state = MrsState(RealField(grid, u0), RealField(grid, np.zeros(n)))

t, t_end = 0.0, 1.5
while t < t_end:
    dt = min(0.4 * grid.spacing, t_end - t)
    state = rk4_step(state, None, dt)
    t += dt

above = np.where(state.u.values > 0.5)[0]
shock_position = x[above[-1]]
print(f"shock position at t={t_end}: {shock_position:.4f}")
print(f"Rankine-Hugoniot prediction:  {np.pi + 0.5 * t_end:.4f}")
print(f"overshoot above the left state: {state.u.values.max() - 1.0:.2e}")
print(f"undershoot below zero:          {state.u.values.min():.2e}")
