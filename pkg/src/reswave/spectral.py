"""Periodic spectral toolbox shared by all solvers.

Everything lives on the 2*pi-periodic interval sampled at n equispaced
points, n a power of two.  Fourier coefficients follow the analytic
normalization

    a_k = (1/2/pi) * integral f(x) exp(-i k x) dx   ~=   fft(values) / n,

stored in numpy fft ordering (k = 0, 1, ..., n/2-1, -n/2, ..., -1).  With
this convention a plane wave exp(i k x) has coefficient 1 in slot k, and
Parseval reads  sum_j |f_j|^2 * dx = 2*pi * sum_k |a_k|^2.

The Nyquist mode (|k| = n/2) is ambiguous between +n/2 and -n/2 on an even
grid; it is zeroed before any differentiation or padding so that odd
multipliers stay conjugate-symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .errors import DegenerateInputError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid on [0, 2*pi) with a power-of-two point count."""

    n_points: int
    length: float = TWO_PI

    def __post_init__(self):
        n = self.n_points
        if n < 8 or (n & (n - 1)) != 0:
            raise ValueError(f"n_points must be a power of two >= 8, got {n}")
        if self.length != TWO_PI:
            raise ValueError("only the 2*pi-periodic domain is supported")

    @property
    def spacing(self) -> float:
        return self.length / self.n_points

    @property
    def x(self) -> np.ndarray:
        """Grid points x_j = j * spacing."""
        return np.arange(self.n_points) * self.spacing

    @property
    def wavenumbers(self) -> np.ndarray:
        """Integer wavenumbers in fft ordering."""
        return np.fft.fftfreq(self.n_points, d=1.0 / self.n_points).astype(int)


@dataclass
class RealField:
    """Real samples of a periodic function on a grid."""

    grid: PeriodicGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n_points,):
            raise ValueError(
                f"values length {self.values.shape} does not match grid "
                f"n_points={self.grid.n_points}"
            )

    def mean(self) -> float:
        return float(self.values.mean())

    def l2_norm(self) -> float:
        """Continuum L2 norm on [0, 2*pi] by the trapezoidal (= exact) rule."""
        return float(np.sqrt(self.grid.spacing * np.sum(self.values**2)))


@dataclass
class SpectralAmplitude:
    """Complex Fourier coefficients of a zero-mean periodic function."""

    grid: PeriodicGrid
    coeffs: np.ndarray
    zero_mean: bool = True

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (self.grid.n_points,):
            raise ValueError(
                f"coeffs length {self.coeffs.shape} does not match grid "
                f"n_points={self.grid.n_points}"
            )
        if self.zero_mean:
            self.coeffs[0] = 0.0

    def copy(self) -> "SpectralAmplitude":
        return SpectralAmplitude(self.grid, self.coeffs.copy(), self.zero_mean)

    def l2_norm_sq(self) -> float:
        """integral |a|^2 dz = 2*pi * sum |a_k|^2."""
        return float(TWO_PI * np.sum(np.abs(self.coeffs) ** 2))


class KernelVariant(Enum):
    SAWTOOTH_S = "sawtooth-s"
    SAWTOOTH_K = "sawtooth-k"
    CUSTOM = "custom"


@dataclass(frozen=True)
class KernelSpec:
    """Entropy-wave convolution kernel, analytic sawtooth or user supplied.

    ``SAWTOOTH_S`` is the slope-two sawtooth with coefficients 2i/k.
    ``SAWTOOTH_K`` is the unit-slope sawtooth used as the reflection kernel
    of the coupled sound-wave system; its coefficients are oriented as -i/k
    so that the convolution source reduces exactly to the local system
    (source +v in the first equation, -u in the second).  The piecewise
    display x +- pi of the same profile has the opposite orientation; only
    the oriented version makes the local reduction come out with the
    conventional labels.
    """

    variant: KernelVariant = KernelVariant.SAWTOOTH_K
    custom_coeffs: np.ndarray | None = None

    def __post_init__(self):
        if self.variant is KernelVariant.CUSTOM:
            if self.custom_coeffs is None:
                raise ValueError("custom kernel requires custom_coeffs")
            c = np.asarray(self.custom_coeffs, dtype=complex)
            object.__setattr__(self, "custom_coeffs", c)
        elif self.custom_coeffs is not None:
            raise ValueError("custom_coeffs only valid for the custom variant")


# ---------------------------------------------------------------------------
# transforms


def to_spectral(f: RealField) -> SpectralAmplitude:
    """Forward transform; coefficients are fft(values)/n."""
    n = f.grid.n_points
    coeffs = np.fft.fft(f.values) / n
    return SpectralAmplitude(f.grid, coeffs, zero_mean=False)


def to_physical(a: SpectralAmplitude) -> np.ndarray:
    """Inverse transform to complex point values (real input stays real
    up to round-off; callers take .real when appropriate)."""
    n = a.grid.n_points
    return np.fft.ifft(a.coeffs * n)


def complex_to_spectral(grid: PeriodicGrid, values: np.ndarray,
                        zero_mean: bool = False) -> SpectralAmplitude:
    """Transform complex point values (used for amplitude demodulation)."""
    values = np.asarray(values, dtype=complex)
    if values.shape != (grid.n_points,):
        raise ValueError("values length does not match grid")
    return SpectralAmplitude(grid, np.fft.fft(values) / grid.n_points,
                             zero_mean=zero_mean)


# ---------------------------------------------------------------------------
# Fourier multipliers


def apply_multiplier(a: SpectralAmplitude,
                     symbol: Callable[[np.ndarray], np.ndarray]) -> SpectralAmplitude:
    """Apply a Fourier multiplier a_k -> symbol(k) * a_k.

    If the symbol is singular at k=0 (e.g. 1/(ik)) the input must have zero
    mean; the output mean is set to zero in that case.
    """
    k = a.grid.wavenumbers.astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        sym = np.asarray(symbol(k), dtype=complex)
    sym = np.broadcast_to(sym, k.shape).copy()
    singular = not np.isfinite(sym[0])
    if singular:
        scale = np.max(np.abs(a.coeffs)) or 1.0
        if abs(a.coeffs[0]) > 1e-12 * scale:
            raise DegenerateInputError(
                "singular multiplier applied to input with nonzero mean "
                f"(|a_0| = {abs(a.coeffs[0]):.3e})"
            )
        sym[0] = 0.0
    out = a.coeffs * sym
    return SpectralAmplitude(a.grid, out, zero_mean=a.zero_mean or singular)


def derivative(a: SpectralAmplitude, order: int = 1) -> SpectralAmplitude:
    """d^order/dz^order with the Nyquist mode zeroed."""
    n = a.grid.n_points
    k = a.grid.wavenumbers.astype(float)
    sym = (1j * k) ** order
    out = a.coeffs * sym
    out[n // 2] = 0.0
    return SpectralAmplitude(a.grid, out, zero_mean=True)


def antiderivative(a: SpectralAmplitude) -> SpectralAmplitude:
    """Zero-mean antiderivative, symbol 1/(ik)."""
    return apply_multiplier(a, lambda k: 1.0 / (1j * k))


# ---------------------------------------------------------------------------
# sawtooth profiles and kernels


def sawtooth_eval(variant: KernelVariant | str, x) -> np.ndarray | float:
    """Piecewise-linear sawtooth profile value(s).

    SAWTOOTH_S: 2(x+pi) on [-pi,0), 2(x-pi) on (0,pi];
    SAWTOOTH_K: x+pi on (-pi,0), x-pi on (0,pi).
    Arguments are reduced mod 2*pi into (-pi, pi]; the jump at x=0 returns
    the midpoint value 0, matching Fourier-series convergence there.
    """
    if isinstance(variant, str):
        variant = KernelVariant(variant)
    xv = np.asarray(x, dtype=float)
    w = np.mod(xv + np.pi, TWO_PI) - np.pi
    out = np.where(w < 0, w + np.pi, w - np.pi)
    out = np.where(w == 0, 0.0, out)
    out = np.where(w == np.pi, 0.0, out)  # continuous point x = +-pi
    if variant is KernelVariant.SAWTOOTH_S:
        out = 2.0 * out
    elif variant is not KernelVariant.SAWTOOTH_K:
        raise ValueError("sawtooth_eval only defined for the sawtooth variants")
    return out if out.shape else float(out)


def kernel_coefficients(spec: KernelSpec, n: int) -> np.ndarray:
    """Fourier coefficients of the kernel on an n-point grid (fft order).

    SAWTOOTH_S: 2i/k.  SAWTOOTH_K: -i/k (orientation chosen so that the
    nonlocal convolution source reduces to the local system; see
    KernelSpec).  Custom coefficients are zero-mean projected and padded or
    truncated to length n.  The Nyquist slot is zeroed.
    """
    grid = PeriodicGrid(n)
    k = grid.wavenumbers.astype(float)
    coeffs = np.zeros(n, dtype=complex)
    nz = k != 0
    if spec.variant is KernelVariant.SAWTOOTH_S:
        coeffs[nz] = 2j / k[nz]
    elif spec.variant is KernelVariant.SAWTOOTH_K:
        coeffs[nz] = -1j / k[nz]
    else:
        src = spec.custom_coeffs
        m = len(src)
        half = min(m, n) // 2
        coeffs[: half + 1] = src[: half + 1]
        coeffs[-half:] = src[-half:] if half > 0 else 0.0
        coeffs[0] = 0.0
    coeffs[n // 2] = 0.0
    return coeffs


def kernel_convolve(spec: KernelSpec, f: RealField,
                    transpose: bool = False) -> RealField:
    """Convolution source (1/2/pi) * integral K(x-y) f_y(y) dy.

    With ``transpose`` the kernel argument is y-x instead (the adjoint
    coupling of the second equation).  Implemented as the Fourier
    multiplier i*k*K_k (or i*k*K_{-k}), which is exact for band-limited
    data.  Input should be zero-mean; the output is zero-mean.
    """
    n = f.grid.n_points
    khat = kernel_coefficients(spec, n)
    if transpose:
        khat = np.conj(khat)  # K real: K_{-k} = conj(K_k)
    k = f.grid.wavenumbers.astype(float)
    mult = 1j * k * khat
    fhat = np.fft.fft(f.values) / n
    out = np.fft.ifft(mult * fhat * n).real
    return RealField(f.grid, out)


# ---------------------------------------------------------------------------
# dealiased products and spectral viscosity


def pad_coefficients(coeffs: np.ndarray, m: int) -> np.ndarray:
    """Zero-pad fft-ordered coefficients of length n into length m >= n."""
    n = len(coeffs)
    out = np.zeros(m, dtype=complex)
    half = n // 2
    out[:half] = coeffs[:half]
    out[m - half:] = coeffs[n - half:]
    return out


def truncate_coefficients(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Inverse of pad_coefficients; the incoming Nyquist band is dropped."""
    m = len(coeffs)
    half = n // 2
    out = np.zeros(n, dtype=complex)
    out[:half] = coeffs[:half]
    out[n - half + 1:] = coeffs[m - half + 1:]
    return out


def dealiased_product(grids_coeffs: list[np.ndarray], pad_factor: int = 2) -> np.ndarray:
    """Pointwise product of several fields, computed alias-free.

    Each argument is an fft-ordered coefficient array of common length n.
    The product is formed on a pad_factor*n grid and truncated back.  A
    factor 3/2 (pass pad_factor as the float 1.5) suffices for quadratic
    products; cubic products need factor 2, which is exact once the Nyquist
    mode is zeroed.
    """
    n = len(grids_coeffs[0])
    m = int(round(pad_factor * n))
    phys = None
    for c in grids_coeffs:
        v = np.fft.ifft(pad_coefficients(c, m) * m)
        phys = v if phys is None else phys * v
    return truncate_coefficients(np.fft.fft(phys) / m, n)


def viscosity_factors(grid: PeriodicGrid, nu: float, dt: float,
                      cutoff: int | None = None) -> np.ndarray:
    """Damping factors exp(-nu * q(k) * dt), q(k) = k^2 above the cutoff.

    The cutoff defaults to n/8: viscosity acts only on the upper seven
    octaves' worth of modes, leaving the resolved physics untouched.
    """
    if nu < 0:
        raise ValueError(f"viscosity nu must be >= 0, got {nu}")
    k = grid.wavenumbers.astype(float)
    if cutoff is None:
        cutoff = grid.n_points // 8
    q = np.where(np.abs(k) > cutoff, k**2, 0.0)
    return np.exp(-nu * q * dt)


def spectral_viscosity(a: SpectralAmplitude, nu: float, dt: float,
                       cutoff: int | None = None) -> SpectralAmplitude:
    """Apply second-order spectral viscosity over a step of size dt."""
    fac = viscosity_factors(a.grid, nu, dt, cutoff)
    return SpectralAmplitude(a.grid, a.coeffs * fac, zero_mean=a.zero_mean)
