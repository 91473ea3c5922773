"""Independent reference solutions used to cross-validate the solvers.

None of these routines share code paths with the production solvers: the
dispersion series is a direct truncated sum, the traveling wave solves its
implicit phase equation by safeguarded Newton, and the Galerkin oracle
integrates the exact low-mode ODE system with an adaptive high-order
method and exact (convolution) nonlinearity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DegenerateInputError, RootFailureError


# ---------------------------------------------------------------------------
# linearized dispersion relation


def sawtooth_s_coefficient(n):
    """Fourier coefficients 2i/n of the slope-two sawtooth (0 at n=0)."""
    n = np.asarray(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(n == 0, 0.0 + 0.0j, 2j / np.where(n == 0, 1, n))
    return out


@dataclass(frozen=True)
class DispersionResult:
    k: int
    omega0: float
    omega1: float
    omega2: float
    branch: str
    truncation: int


def dispersion(k: int, branch: str = "plus", truncation: int = 100_000,
               s_coeffs: Callable[[np.ndarray], np.ndarray] | None = None,
               ) -> DispersionResult:
    """Perturbation series omega = k + eps*omega1 + eps^2*omega2 for the
    linear wave equation with periodic sound-speed perturbation S(2x).

        omega1 = +- (1/2) k |S_k|
        omega2 = -omega1^2/(2k)
                 - (k/16) sum_{n != 0,k} (2n-k)^2/(n(n-k)) |S_n +- e^{is} S_{n-k}|^2

    with e^{is} = S_k/|S_k| and the sign following the branch.  ``s_coeffs``
    maps integer wavenumber arrays to coefficients; the default is the
    sawtooth 2i/n, for which the sum converges to -1/(2k) - pi^2 k / 2.
    """
    if k == 0:
        raise ValueError("wavenumber k must be nonzero")
    if branch not in ("plus", "minus"):
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")
    if truncation < 16:
        raise ValueError("truncation must be at least 16")
    if s_coeffs is None:
        s_coeffs = sawtooth_s_coefficient
    sign = 1.0 if branch == "plus" else -1.0

    s_k = complex(s_coeffs(np.array([k]))[0])
    if s_k == 0:
        raise DegenerateInputError(
            f"S_{k} = 0: resonant branch splitting undefined at this wavenumber"
        )
    phase = s_k / abs(s_k)
    omega1 = sign * 0.5 * k * abs(s_k)

    n = np.arange(-truncation, truncation + 1)
    n = n[(n != 0) & (n != k)]
    s_n = s_coeffs(n)
    s_nk = s_coeffs(n - k)
    summand = (2 * n - k) ** 2 / (n * (n - k)) * np.abs(s_n + sign * phase * s_nk) ** 2
    omega2 = -(omega1**2) / (2 * k) - (k / 16.0) * float(np.sum(summand))
    return DispersionResult(k=k, omega0=float(k), omega1=float(omega1),
                            omega2=omega2, branch=branch, truncation=truncation)


def sawtooth_omega2_closed_form(k: int) -> float:
    """Closed form -1/(2k) - pi^2 k / 2 of the sawtooth second correction."""
    return -1.0 / (2 * k) - 0.5 * np.pi**2 * k


def perturbation_sensitivity(s_coeffs, r_coeffs, k: int) -> float:
    """First-order sensitivity q_k = Re(R_k / S_k) of |S_k + eps R_k|.

    Vanishes whenever R_k/S_k is purely imaginary, e.g. for the odd
    sawtooth (imaginary S_k) perturbed by an even real profile (real R_k).
    """
    s_k = complex(s_coeffs(np.array([k]))[0]) if callable(s_coeffs) else complex(s_coeffs)
    r_k = complex(r_coeffs(np.array([k]))[0]) if callable(r_coeffs) else complex(r_coeffs)
    if s_k == 0:
        raise DegenerateInputError(f"S_{k} = 0: sensitivity undefined")
    return float(0.5 * (r_k / s_k + np.conj(r_k) / np.conj(s_k)).real)


# ---------------------------------------------------------------------------
# single-harmonic solution


def single_harmonic(n: int, a0: complex, mu: float, tau,
                    coefficient: float = 1.0) -> complex | np.ndarray:
    """Exact coefficient of the single-harmonic solution a0 e^{i n z - i Omega tau}.

    Omega = -mu/n - coefficient * n^2 |a0|^2; the nonlinearity only shifts
    the frequency.  coefficient=1 is the normalized amplitude equation,
    2/3 the dispersionless reduction of the coupled sound-wave system.
    """
    if n == 0:
        raise ValueError("mode number must be nonzero")
    omega = -mu / n - coefficient * n**2 * abs(a0) ** 2
    return a0 * np.exp(-1j * omega * np.asarray(tau))


# ---------------------------------------------------------------------------
# implicit traveling wave of the dispersionless equation


@dataclass(frozen=True)
class TravelingWaveProfile:
    """Profile a(z, tau) = 1 - exp(-i c Phi(z - c tau)) with implicit phase

        Phi(xi) - (1/c) sin(c Phi(xi)) = xi / 2.

    Phi is odd, strictly increasing, with Phi(0) = 0; near xi = 0 it
    behaves like (3 xi / c^2)^{1/3}, so |a| has a cube-root cusp there.
    """

    c: float
    newton_tol: float = 1e-12
    max_iter: int = 100

    def phi(self, xi) -> np.ndarray | float:
        xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
        out = np.array([self._phi_scalar(v) for v in xi_arr])
        return out if np.ndim(xi) else float(out[0])

    def _phi_scalar(self, xi: float) -> float:
        if xi == 0.0:
            return 0.0
        sign = 1.0 if xi > 0 else -1.0
        xi = abs(xi)
        c = self.c

        def g(p):
            return p - np.sin(c * p) / c - 0.5 * xi

        lo, hi = 0.0, 0.5 * xi + 2.0 / abs(c)
        # cube-root branch near the front, linear asymptote far from it
        p = min((3.0 * xi / c**2) ** (1.0 / 3.0), 0.5 * xi + 1.0 / abs(c))
        p = min(max(p, lo), hi)
        gp = g(p)
        for _ in range(self.max_iter):
            if abs(gp) <= self.newton_tol:
                return sign * p
            if gp > 0:
                hi = p
            else:
                lo = p
            deriv = 1.0 - np.cos(c * p)
            if deriv > 1e-14:
                step = p - gp / deriv
            else:
                step = 0.5 * (lo + hi)
            if not (lo < step < hi):
                step = 0.5 * (lo + hi)
            p = step
            gp = g(p)
        raise RootFailureError(
            f"Newton/bisection stalled at xi={sign * xi:.6g}: residual {gp:.3e} "
            f"after {self.max_iter} iterations (tol {self.newton_tol:.1e})",
            xi=sign * xi, residual=abs(gp),
        )

    def amplitude(self, xi) -> np.ndarray | complex:
        return 1.0 - np.exp(-1j * self.c * np.asarray(self.phi(xi)))

    def implicit_residual(self, xi) -> np.ndarray | float:
        p = self.phi(xi)
        return p - np.sin(self.c * np.asarray(p)) / self.c - 0.5 * np.asarray(xi)


def traveling_wave(c: float, xi, newton_tol: float = 1e-12):
    """Amplitude value(s) of the implicit traveling wave at phase xi."""
    if c == 0:
        raise ValueError("speed c must be nonzero")
    return TravelingWaveProfile(c, newton_tol).amplitude(xi)


def local_cusp_exponent(c: float = 1.0, xi_lo: float = 1e-6,
                        xi_hi: float = 1e-3, n_pts: int = 64) -> float:
    """Log-log slope of |a| against xi over [xi_lo, xi_hi] (expect ~1/3)."""
    prof = TravelingWaveProfile(c)
    xis = np.logspace(np.log10(xi_lo), np.log10(xi_hi), n_pts)
    vals = np.abs(prof.amplitude(xis))
    slope, _ = np.polyfit(np.log(xis), np.log(vals), 1)
    return float(slope)


# ---------------------------------------------------------------------------
# brute-force Galerkin oracle


def galerkin_rhs(coeffs: np.ndarray, mu: float, coefficient: float) -> np.ndarray:
    """Exact mode ODE right side of i(a_tau + mu d^-1 a) = coeff (|a|^2 a_z)_z.

    ``coeffs`` holds a_k for k = -K..K.  The cubic term a * conj(a) * a_z
    is evaluated by exact triple convolution, so there is no aliasing by
    construction.
    """
    kmax = (len(coeffs) - 1) // 2
    k = np.arange(-kmax, kmax + 1)
    a_z = 1j * k * coeffs
    a_bar = np.conj(coeffs)[::-1]  # coefficient of conj(a) at wavenumber m
    prod = np.convolve(np.convolve(coeffs, a_bar), a_z)
    center = 3 * kmax
    cubic = prod[center - kmax: center + kmax + 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        lin = np.where(k == 0, 0.0, 1j * mu / np.where(k == 0, 1, k)) * coeffs
    rhs = lin + coefficient * k * cubic
    rhs[kmax] = 0.0  # zero-mean flow
    return rhs


def galerkin_oracle(initial_coeffs: np.ndarray, mu: float, coefficient: float,
                    tau_end: float, rtol: float = 1e-12,
                    atol: float = 1e-12) -> np.ndarray:
    """Reference solution of the truncated amplitude equation.

    ``initial_coeffs`` are a_k for k = -K..K with 2K+1 <= 33 entries; the
    returned array has the same layout at tau_end.
    """
    coeffs = np.asarray(initial_coeffs, dtype=complex)
    if len(coeffs) % 2 != 1:
        raise ValueError("coefficient array must have odd length (k = -K..K)")
    if len(coeffs) > 65:
        raise ValueError("Galerkin oracle limited to 32 modes per side")
    m = len(coeffs)

    def rhs_real(_, y):
        c = y[:m] + 1j * y[m:]
        d = galerkin_rhs(c, mu, coefficient)
        return np.concatenate([d.real, d.imag])

    y0 = np.concatenate([coeffs.real, coeffs.imag])
    if tau_end == 0:
        return coeffs
    sol = solve_ivp(rhs_real, (0.0, tau_end), y0, method="DOP853",
                    rtol=rtol, atol=atol, dense_output=False)
    if not sol.success:
        raise RuntimeError(f"oracle integration failed: {sol.message}")
    yf = sol.y[:, -1]
    return yf[:m] + 1j * yf[m:]
