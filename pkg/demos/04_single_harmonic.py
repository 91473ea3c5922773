"""Single-harmonic solutions: nonlinearity as a pure frequency shift.

For data a0 e^{inz} the amplitude equation only rotates the phase:
a = a0 e^{inz - i Omega tau} with Omega = -mu/n - n^2 |a0|^2.  The solver
reproduces the exact solution with second-order accuracy in dt, and the
low-mode Galerkin oracle agrees independently.
"""

import numpy as np

from reswave import PeriodicGrid, SpectralAmplitude
from reswave.dqs import DqsConfig, run_dqs
from reswave.oracles import galerkin_oracle, single_harmonic

grid = PeriodicGrid(8)
coeffs = np.zeros(8, dtype=complex)
coeffs[1] = 1.0

print("solver error against a0 e^{-i Omega tau} (Omega = -2) at tau = 1:")
for dt in (4e-3, 2e-3, 1e-3):
    cfg = DqsConfig(mu=1.0, dt=dt, tau_end=1.0, snapshot_taus=[1.0])
    out = run_dqs(SpectralAmplitude(grid, coeffs.copy()), cfg)
    snap = out.snapshots[-1]
    got = np.fft.fft(snap.columns["re_a"] + 1j * snap.columns["im_a"])[1] / 8
    exact = single_harmonic(1, 1.0, 1.0, 1.0)
    print(f"  dt = {dt:.0e}: |error| = {abs(got - exact):.2e}")

print("\ncross-check against the Galerkin oracle (adaptive ODE, exact cubic):")
K = 4
init = np.zeros(2 * K + 1, dtype=complex)
init[K + 1] = 1.0
ref = galerkin_oracle(init, mu=1.0, coefficient=1.0, tau_end=1.0)
print(f"  |oracle - closed form| = {abs(ref[K + 1] - single_harmonic(1, 1, 1, 1)):.2e}")
