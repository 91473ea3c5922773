"""reswave: numerical laboratory for resonant sound-wave reflection.

A shock-capturing solver for the coupled sound-wave system
u_t + (u^2/2)_x = v, v_t + (v^2/2)_x = -u and its nonlocal generalization,
a pseudo-spectral solver for the degenerate quasilinear Schroedinger
amplitude equation i(a_tau + mu dz^{-1} a) = (|a|^2 a_z)_z, the asymptotic
maps connecting them, and independent exact-solution oracles.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DegenerateInputError,
    ReswaveError,
    RootFailureError,
    SolverDivergedError,
    StepFailureError,
)
from .spectral import (
    KernelSpec,
    KernelVariant,
    PeriodicGrid,
    RealField,
    SpectralAmplitude,
    apply_multiplier,
    antiderivative,
    derivative,
    kernel_coefficients,
    kernel_convolve,
    sawtooth_eval,
    spectral_viscosity,
    to_physical,
    to_spectral,
)

__all__ = [
    "ConfigError",
    "DegenerateInputError",
    "ReswaveError",
    "RootFailureError",
    "SolverDivergedError",
    "StepFailureError",
    "KernelSpec",
    "KernelVariant",
    "PeriodicGrid",
    "RealField",
    "SpectralAmplitude",
    "apply_multiplier",
    "antiderivative",
    "derivative",
    "kernel_coefficients",
    "kernel_convolve",
    "sawtooth_eval",
    "spectral_viscosity",
    "to_physical",
    "to_spectral",
    "__version__",
]
