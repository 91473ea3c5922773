"""Dispersion relation of resonantly reflected linear waves.

For a sawtooth sound-speed perturbation the first frequency correction is
wavenumber independent (omega1 = +-1: constant-frequency oscillation, zero
group velocity) and the second correction has the closed form
-1/(2k) - pi^2 k / 2.  The truncated perturbation sum converges to it like
1/N.
"""

import numpy as np

from reswave.oracles import dispersion, sawtooth_omega2_closed_form

print("k  branch  omega1   omega2(sum)    omega2(closed)   |difference|")
for k in (1, 2, 3):
    for branch in ("plus", "minus"):
        res = dispersion(k, branch=branch, truncation=100_000)
        closed = sawtooth_omega2_closed_form(k)
        print(f"{k}  {branch:5s}  {res.omega1:+.0f}     {res.omega2:+.6f}"
              f"     {closed:+.6f}      {abs(res.omega2 - closed):.1e}")

print("\ntruncation convergence at k=1 (tail ~ 1/N):")
closed = sawtooth_omega2_closed_form(1)
for trunc in (1000, 4000, 16000, 64000):
    err = abs(dispersion(1, truncation=trunc).omega2 - closed)
    print(f"  N = {trunc:6d}: |error| = {err:.2e}")
