"""Maps between the sound-wave fields, the complex modulation amplitude,
and the normalized form of the amplitude equation.

At leading order a zero-mean amplitude a(x, tau), tau = eps^2 t, modulates
the unit-frequency oscillation of the coupled system:

    u = eps * a e^{-it} + c.c.,      v = -i eps * a e^{-it} + c.c.

The second-order correction adds a second harmonic and a mean flow,

    u2 = B e^{-2it} - M + c.c.,      v2 = C e^{-2it} + M + c.c.,
    B = -((1+2i)/6) (a^2)_x,  C = -((1-2i)/6) (a^2)_x,  M = (1/2)(|a|^2)_x.

The Lagrangian velocity of the gas at the eps^{3/2} scaling combines a
right- and a left-moving copy of the same amplitude,

    nu = eps^{3/2} { a(t-x, eps^2 t) - i a(t+x, eps^2 t) } e^{-i eps t} + c.c.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mrs import MrsState
from .spectral import (
    RealField,
    SpectralAmplitude,
    complex_to_spectral,
    dealiased_product,
    to_physical,
)


@dataclass(frozen=True)
class ScalingParams:
    """Entropy-wave strength eps, adiabatic exponent gamma, and sound-wave
    Mach number M (velocity perturbation over mean sound speed)."""

    epsilon: float
    gamma: float = 1.4
    mach: float = 1.0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if self.gamma <= 1:
            raise ValueError("gamma must be > 1")
        if self.mach <= 0:
            raise ValueError("mach must be > 0 (dispersion parameter infinite)")


@dataclass(frozen=True)
class Normalization:
    mu: float
    amplitude_scale: float
    time_scale: float
    frame_shift_rate: float


def normalize(params: ScalingParams) -> Normalization:
    """Change of variables taking the asymptotic gas-dynamics equation to
    i(a_tau + mu dz^{-1} a) = (|a|^2 a_z)_z:

        a = amplitude_scale * a_normalized,
        z_shifted = z + frame_shift_rate * tau,
        tau_normalized = time_scale * tau,
        mu = eps^3 / (2 M^2).
    """
    eps, gamma, mach = params.epsilon, params.gamma, params.mach
    return Normalization(
        mu=eps**3 / (2.0 * mach**2),
        amplitude_scale=np.sqrt(6.0) * mach / ((gamma + 1.0) * eps**1.5),
        time_scale=mach**2 / eps**3,
        frame_shift_rate=0.5 * np.pi**2,
    )


def denormalize_amplitude(coeffs: np.ndarray, params: ScalingParams) -> np.ndarray:
    return coeffs * normalize(params).amplitude_scale


def normalize_amplitude(coeffs: np.ndarray, params: ScalingParams) -> np.ndarray:
    return coeffs / normalize(params).amplitude_scale


def asyeq_coefficient(gamma: float) -> float:
    """Cubic coupling (gamma+1)^2/6 of the gas-dynamics amplitude equation;
    identical to (2/3)((gamma+1)/2)^2, the value inherited from the coupled
    sound-wave system."""
    if gamma <= 1:
        raise ValueError("gamma must be > 1")
    return (gamma + 1.0) ** 2 / 6.0


# ---------------------------------------------------------------------------
# second-order correction fields


@dataclass
class SecondOrderCorrection:
    """Second-harmonic amplitudes B, C and the mean-flow gradient M."""

    b: np.ndarray
    c: np.ndarray
    m: np.ndarray


def second_order_correction(a: SpectralAmplitude) -> SecondOrderCorrection:
    """B, C, M as physical fields, with (a^2)_x and (|a|^2)_x computed
    spectrally (3/2-rule padding for the quadratic products)."""
    k = a.grid.wavenumbers.astype(float)
    n = a.grid.n_points
    a_sq = dealiased_product([a.coeffs, a.coeffs], pad_factor=1.5)
    abs_sq = dealiased_product([a.coeffs, np.conj(a.coeffs[(-np.arange(n)) % n])],
                               pad_factor=1.5)
    ik = 1j * k
    ik[n // 2] = 0.0
    da_sq = to_physical(SpectralAmplitude(a.grid, ik * a_sq, zero_mean=False))
    dabs_sq = to_physical(SpectralAmplitude(a.grid, ik * abs_sq, zero_mean=False))
    b = -((1.0 + 2.0j) / 6.0) * da_sq
    c = -((1.0 - 2.0j) / 6.0) * da_sq
    m = 0.5 * dabs_sq.real
    return SecondOrderCorrection(b=b, c=c, m=m)


# ---------------------------------------------------------------------------
# reconstruction and demodulation


def reconstruct_mrs(a: SpectralAmplitude, eps: float, t: float,
                    order: int = 1) -> MrsState:
    """Real (u, v) fields of the modulated solution at time t.

    order=1 is the leading-order reconstruction; order=2 adds the second
    harmonic and mean-flow corrections (homogeneous second-order solutions
    are taken as zero).
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    w = to_physical(a) * np.exp(-1j * t)
    u = 2.0 * eps * w.real
    v = 2.0 * eps * w.imag
    if order == 2:
        corr = second_order_correction(a)
        e2 = np.exp(-2j * t)
        u = u + eps**2 * (2.0 * (corr.b * e2).real - 2.0 * corr.m)
        v = v + eps**2 * (2.0 * (corr.c * e2).real + 2.0 * corr.m)
    grid = a.grid
    return MrsState(RealField(grid, u), RealField(grid, v), time=t)


def extract_amplitude(state: MrsState, eps: float, t: float | None = None,
                      ) -> SpectralAmplitude:
    """Demodulate a = e^{it} (u + iv) / (2 eps); exact inverse of the
    order-1 reconstruction.  The mean mode is projected out (it carries the
    O(eps^2) mean flow, not the modulation)."""
    if t is None:
        t = state.time
    w = (state.u.values + 1j * state.v.values) * (np.exp(1j * t) / (2.0 * eps))
    a = complex_to_spectral(state.grid, w, zero_mean=True)
    a.coeffs[state.grid.n_points // 2] = 0.0
    return a


def extract_amplitude_filtered(states: list[MrsState], eps: float) -> SpectralAmplitude:
    """Demodulation averaged over states sampling one oscillation period;
    suppresses the counter-rotating and mean contamination for noisy
    comparisons."""
    if not states:
        raise ValueError("need at least one state")
    acc = None
    for s in states:
        a = extract_amplitude(s, eps)
        acc = a.coeffs if acc is None else acc + a.coeffs
    return SpectralAmplitude(states[0].grid, acc / len(states))


def reconstruct_lagrangian_velocity(a: SpectralAmplitude, eps: float,
                                    x: np.ndarray, t: float) -> np.ndarray:
    """Leading-order Lagrangian velocity at Lagrangian positions x.

    The right-mover samples the amplitude at t-x, the left-mover at t+x
    with a factor -i, both carried by the slow phase e^{-i eps t}.
    """
    shape = np.shape(x)
    x = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    nz = a.coeffs != 0
    ck = a.coeffs[nz]
    kk = a.grid.wavenumbers[nz]
    right = np.zeros(x.size, dtype=complex)
    left = np.zeros(x.size, dtype=complex)
    block = 4096
    for i in range(0, x.size, block):
        xs = x[i:i + block]
        right[i:i + block] = np.exp(1j * np.outer(t - xs, kk)) @ ck
        left[i:i + block] = np.exp(1j * np.outer(t + xs, kk)) @ ck
    w = (right - 1j * left) * np.exp(-1j * eps * t)
    return (eps**1.5 * 2.0 * w.real).reshape(shape)


# ---------------------------------------------------------------------------
# cusp regularity diagnostic


def local_holder_exponent(z: np.ndarray, values: np.ndarray,
                          center: float, radii: np.ndarray) -> float:
    """Log-log slope of the oscillation of |values| about a near-zero point;
    a cube-root cusp gives ~1/3.  Diagnostic only."""
    z = np.asarray(z)
    mags = []
    for r in radii:
        mask = np.abs(np.mod(z - center + np.pi, 2 * np.pi) - np.pi) <= r
        mags.append(np.max(np.abs(values[mask])))
    slope, _ = np.polyfit(np.log(radii), np.log(np.maximum(mags, 1e-300)), 1)
    return float(slope)
