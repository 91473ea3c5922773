"""The implicit traveling wave of the dispersionless amplitude equation.

a(z, tau) = 1 - exp(-i c Phi(z - c tau)) with the phase defined implicitly
by Phi - sin(c Phi)/c = xi/2.  The amplitude passes through zero at the
front xi = 0 with a cube-root profile |a| ~ |xi|^{1/3}, the regularity
suggested for the cusps of the two-harmonic run.
"""

import numpy as np

from reswave.oracles import TravelingWaveProfile, local_cusp_exponent

prof = TravelingWaveProfile(c=1.0, newton_tol=1e-13)

xis = np.array([0.0, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0])
print("xi        Phi(xi)      |a(xi)|     implicit residual")
for xi in xis:
    phi = prof.phi(xi)
    a = prof.amplitude(xi)
    res = prof.implicit_residual(xi)
    print(f"{xi:7.3f}  {phi:10.6f}  {abs(a):10.6f}   {abs(res):.1e}")

print(f"\nfitted local exponent of |a| on xi in [1e-6, 1e-3]: "
      f"{local_cusp_exponent(c=1.0):.4f} (cube root = 0.3333)")
print(f"oddness check: Phi(-0.7) + Phi(0.7) = "
      f"{prof.phi(-0.7) + prof.phi(0.7):.1e}")
