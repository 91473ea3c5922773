import numpy as np
import pytest

from reswave import (
    DegenerateInputError,
    KernelSpec,
    KernelVariant,
    PeriodicGrid,
    RealField,
    SpectralAmplitude,
    antiderivative,
    apply_multiplier,
    derivative,
    kernel_coefficients,
    kernel_convolve,
    sawtooth_eval,
    spectral_viscosity,
    to_physical,
    to_spectral,
)
from reswave.spectral import dealiased_product

from conftest import random_zero_mean_amplitude


class TestGrid:
    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            PeriodicGrid(100)
        with pytest.raises(ValueError):
            PeriodicGrid(4)

    def test_spacing_times_count_is_length(self):
        g = PeriodicGrid(128)
        assert g.spacing * g.n_points == pytest.approx(2 * np.pi, rel=1e-15)

    def test_field_length_must_match(self):
        g = PeriodicGrid(64)
        with pytest.raises(ValueError):
            RealField(g, np.zeros(65))
        with pytest.raises(ValueError):
            SpectralAmplitude(g, np.zeros(32, complex))


class TestTransforms:
    def test_cosine_single_mode(self):
        g = PeriodicGrid(64)
        a = to_spectral(RealField(g, np.cos(g.x)))
        assert a.coeffs[1] == pytest.approx(0.5, abs=1e-14)
        assert a.coeffs[-1] == pytest.approx(0.5, abs=1e-14)
        others = np.delete(a.coeffs, [1, 63])
        assert np.max(np.abs(others)) < 1e-14

    def test_constant_field(self):
        g = PeriodicGrid(32)
        a = to_spectral(RealField(g, np.ones(32)))
        assert a.coeffs[0] == pytest.approx(1.0, abs=1e-15)
        assert np.max(np.abs(a.coeffs[1:])) < 1e-15

    def test_roundtrip(self, rng):
        g = PeriodicGrid(256)
        f = rng.standard_normal(256)
        back = to_physical(to_spectral(RealField(g, f)))
        assert np.max(np.abs(back.real - f)) < 1e-12 * np.max(np.abs(f))
        assert np.max(np.abs(back.imag)) < 1e-13

    def test_parseval(self, rng):
        g = PeriodicGrid(128)
        f = rng.standard_normal(128)
        field = RealField(g, f)
        a = to_spectral(field)
        spectral = 2 * np.pi * np.sum(np.abs(a.coeffs) ** 2)
        assert spectral == pytest.approx(field.l2_norm() ** 2, rel=1e-10)


class TestMultipliers:
    def test_derivative_of_plane_wave(self):
        g = PeriodicGrid(32)
        a = SpectralAmplitude(g, np.zeros(32, complex))
        a.coeffs[1] = 1.0
        assert derivative(a).coeffs[1] == pytest.approx(1j)

    def test_antiderivative_of_plane_wave(self):
        g = PeriodicGrid(32)
        a = SpectralAmplitude(g, np.zeros(32, complex))
        a.coeffs[1] = 1.0
        assert antiderivative(a).coeffs[1] == pytest.approx(-1j)

    def test_inverse_composition(self, rng):
        g = PeriodicGrid(64)
        a = SpectralAmplitude(g, random_zero_mean_amplitude(g, rng))
        a.coeffs[g.n_points // 2] = 0.0
        back = derivative(antiderivative(a))
        assert np.max(np.abs(back.coeffs - a.coeffs)) < 1e-13

    def test_linearity(self, rng):
        g = PeriodicGrid(64)
        f = SpectralAmplitude(g, random_zero_mean_amplitude(g, rng))
        h = SpectralAmplitude(g, random_zero_mean_amplitude(g, rng))
        sym = lambda k: np.where(k == 0, 0.0, 1j * k**3)
        lhs = apply_multiplier(
            SpectralAmplitude(g, 2.0 * f.coeffs + 3.0 * h.coeffs), sym).coeffs
        rhs = 2.0 * apply_multiplier(f, sym).coeffs + 3.0 * apply_multiplier(h, sym).coeffs
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * np.max(np.abs(rhs))

    def test_singular_symbol_rejects_nonzero_mean(self):
        g = PeriodicGrid(32)
        a = SpectralAmplitude(g, np.zeros(32, complex), zero_mean=False)
        a.coeffs[0] = 1.0
        with pytest.raises(DegenerateInputError):
            apply_multiplier(a, lambda k: 1.0 / (1j * k))


class TestSawtooth:
    def test_slope_two_values(self):
        assert sawtooth_eval("sawtooth-s", -np.pi / 2) == pytest.approx(np.pi)
        assert sawtooth_eval("sawtooth-s", np.pi / 2) == pytest.approx(-np.pi)

    def test_unit_slope_value(self):
        assert sawtooth_eval("sawtooth-k", -np.pi / 2) == pytest.approx(np.pi / 2)

    def test_midpoint_convention_at_jump(self):
        assert sawtooth_eval("sawtooth-s", 0.0) == 0.0
        assert sawtooth_eval("sawtooth-k", 2 * np.pi) == 0.0

    def test_odd_function(self):
        xs = np.linspace(0.01, np.pi - 0.01, 50)
        np.testing.assert_allclose(sawtooth_eval("sawtooth-s", -xs),
                                   -np.asarray(sawtooth_eval("sawtooth-s", xs)),
                                   atol=1e-14)

    def test_zero_mean_by_quadrature(self):
        x = np.linspace(-np.pi, np.pi, 4097)
        vals = sawtooth_eval("sawtooth-s", x)
        mean = np.trapezoid(vals, x) / (2 * np.pi)
        assert abs(mean) < 1e-10


class TestKernels:
    def test_slope_two_coefficients(self):
        c = kernel_coefficients(KernelSpec(KernelVariant.SAWTOOTH_S), 64)
        assert c[1] == pytest.approx(2j)
        assert c[0] == 0.0
        assert c[-4] == pytest.approx(-0.5j)

    def test_coefficients_match_profile_transform(self):
        # the slope-two sawtooth coefficients are the transform of its profile
        g = PeriodicGrid(512)
        prof = to_spectral(RealField(g, sawtooth_eval("sawtooth-s", g.x)))
        c = kernel_coefficients(KernelSpec(KernelVariant.SAWTOOTH_S), 512)
        # sampled-jump aliasing decays like k/n^2
        np.testing.assert_allclose(prof.coeffs[1:9], c[1:9], atol=3e-4)

    def test_convolve_zero_field(self):
        g = PeriodicGrid(64)
        out = kernel_convolve(KernelSpec(KernelVariant.SAWTOOTH_K),
                              RealField(g, np.zeros(64)))
        assert np.all(out.values == 0.0)

    def test_convolve_reduces_to_local_source(self):
        # the oriented unit-slope kernel turns the convolution into the
        # identity on zero-mean fields: the local-system reduction
        g = PeriodicGrid(64)
        f = RealField(g, np.sin(g.x))
        out = kernel_convolve(KernelSpec(KernelVariant.SAWTOOTH_K), f)
        np.testing.assert_allclose(out.values, np.sin(g.x), atol=1e-13)
        out_t = kernel_convolve(KernelSpec(KernelVariant.SAWTOOTH_K), f, transpose=True)
        np.testing.assert_allclose(out_t.values, -np.sin(g.x), atol=1e-13)

    def test_convolve_matches_quadrature(self):
        # independent oracle: trapezoidal quadrature of
        # (1/2pi) int K(x-y) f_y(y) dy with the oriented piecewise profile
        # K(w) = -(w + pi) on (-pi, 0), pi - w on (0, pi), 10x oversampled
        n = 64
        g = PeriodicGrid(n)
        f_y = lambda y: np.cos(y)  # f = sin
        y = np.linspace(-np.pi, np.pi, 10 * n + 1)

        def kernel_profile(w):
            w = np.mod(w + np.pi, 2 * np.pi) - np.pi
            out = np.where(w < 0, -(w + np.pi), np.pi - w)
            # snap samples that land on the jump to the midpoint value
            return np.where(np.abs(w) < 1e-9, 0.0, out)

        expected = np.array([
            np.trapezoid(kernel_profile(x - y) * f_y(y), y) / (2 * np.pi)
            for x in g.x
        ])
        got = kernel_convolve(KernelSpec(KernelVariant.SAWTOOTH_K),
                              RealField(g, np.sin(g.x))).values
        assert np.max(np.abs(got - expected)) < 1e-4  # O(oversample^-2)

    def test_convolve_quadrature_rate(self):
        # trapezoid error falls like the square of the oversampling
        n = 32
        g = PeriodicGrid(n)
        spec = KernelSpec(KernelVariant.SAWTOOTH_K)
        exact = kernel_convolve(spec, RealField(g, np.sin(g.x))).values

        def kernel_profile(w):
            w = np.mod(w + np.pi, 2 * np.pi) - np.pi
            out = np.where(w < 0, -(w + np.pi), np.pi - w)
            # snap samples that land on the jump to the midpoint value
            return np.where(np.abs(w) < 1e-9, 0.0, out)

        def quad_err(factor):
            y = np.linspace(-np.pi, np.pi, factor * n + 1)
            q = np.array([
                np.trapezoid(kernel_profile(x - y) * np.cos(y), y) / (2 * np.pi)
                for x in g.x
            ])
            return np.max(np.abs(q - exact))

        assert quad_err(8) / quad_err(16) > 3.0

    def test_custom_single_mode_multiplier(self):
        # kernel with K_1 = c acting on cos x: multiplier i*k*K_k
        n = 64
        g = PeriodicGrid(n)
        c = 0.3 - 0.7j
        coeffs = np.zeros(n, dtype=complex)
        coeffs[1] = c
        coeffs[-1] = np.conj(c)
        spec = KernelSpec(KernelVariant.CUSTOM, custom_coeffs=coeffs)
        f = RealField(g, np.cos(g.x))
        got = kernel_convolve(spec, f).values
        # f_hat(+-1) = 1/2; output_hat(k) = i*k*K_k*f_hat(k)
        expected = (1j * c * 0.5 * np.exp(1j * g.x)
                    + np.conj(1j * c * 0.5) * np.exp(-1j * g.x)).real
        np.testing.assert_allclose(got, expected, atol=1e-13)

    def test_custom_requires_coeffs(self):
        with pytest.raises(ValueError):
            KernelSpec(KernelVariant.CUSTOM)


class TestDealiasing:
    def test_quadratic_product_alias_free(self):
        # modes near n/3 alias on the bare grid but not with 3/2 padding
        n = 32
        g = PeriodicGrid(n)
        k0 = 10
        c = np.zeros(n, dtype=complex)
        c[k0] = 1.0
        prod = dealiased_product([c, c], pad_factor=1.5)
        expected = np.zeros(n, dtype=complex)
        # 2*k0 = 20 > n/2: the true product leaves the resolved band entirely
        assert np.max(np.abs(prod - expected)) < 1e-14

    def test_cubic_product_exact(self):
        n = 32
        g = PeriodicGrid(n)
        c = np.zeros(n, dtype=complex)
        c[2] = 1.5
        c[3] = -0.5j
        prod = dealiased_product([c, c, c], pad_factor=2)
        # exact triple convolution
        full = np.zeros(n, dtype=complex)
        ks = [2, 3]
        vals = {2: 1.5, 3: -0.5j}
        for k1 in ks:
            for k2 in ks:
                for k3 in ks:
                    k = k1 + k2 + k3
                    if k < n // 2:
                        full[k] += vals[k1] * vals[k2] * vals[k3]
        np.testing.assert_allclose(prod, full, atol=1e-14)


class TestSpectralViscosity:
    def test_zero_nu_is_identity(self, rng):
        g = PeriodicGrid(64)
        a = SpectralAmplitude(g, random_zero_mean_amplitude(g, rng))
        out = spectral_viscosity(a, nu=0.0, dt=0.5)
        np.testing.assert_array_equal(out.coeffs, a.coeffs)

    def test_single_mode_exponential_decay(self):
        g = PeriodicGrid(64)  # cutoff n/8 = 8
        a = SpectralAmplitude(g, np.zeros(64, complex))
        a.coeffs[12] = 2.0
        out = spectral_viscosity(a, nu=1e-3, dt=1.0)
        assert out.coeffs[12] == pytest.approx(2.0 * np.exp(-1e-3 * 144), rel=1e-12)

    def test_modes_below_cutoff_untouched(self):
        g = PeriodicGrid(64)
        a = SpectralAmplitude(g, np.zeros(64, complex))
        a.coeffs[5] = 1.0 + 1j
        out = spectral_viscosity(a, nu=10.0, dt=1.0)
        assert out.coeffs[5] == a.coeffs[5]

    def test_l2_never_increases(self, rng):
        g = PeriodicGrid(128)
        for _ in range(5):
            a = SpectralAmplitude(g, random_zero_mean_amplitude(g, rng, modes=60))
            out = spectral_viscosity(a, nu=rng.uniform(0, 2), dt=rng.uniform(0, 1))
            assert out.l2_norm_sq() <= a.l2_norm_sq() * (1 + 1e-14)

    def test_negative_nu_rejected(self, rng):
        g = PeriodicGrid(64)
        a = SpectralAmplitude(g, random_zero_mean_amplitude(g, rng))
        with pytest.raises(ValueError):
            spectral_viscosity(a, nu=-1.0, dt=0.1)


class TestSlopeTwoKernelQuadrature:
    def test_convolve_matches_quadrature(self):
        # the slope-two sawtooth keeps its literal orientation: coefficients
        # 2i/k make the convolution multiplier i*k*(2i/k) = -2, so the
        # source applied to sin is -2 sin; trapezoidal quadrature of the
        # integral with the literal piecewise profile must agree
        n = 64
        g = PeriodicGrid(n)
        got = kernel_convolve(KernelSpec(KernelVariant.SAWTOOTH_S),
                              RealField(g, np.sin(g.x))).values
        np.testing.assert_allclose(got, -2.0 * np.sin(g.x), atol=1e-12)

        y = np.linspace(-np.pi, np.pi, 10 * n + 1)

        def profile(w):
            w = np.mod(w + np.pi, 2 * np.pi) - np.pi
            out = np.where(w < 0, 2.0 * (w + np.pi), 2.0 * (w - np.pi))
            return np.where(np.abs(w) < 1e-9, 0.0, out)

        quad = np.array([
            np.trapezoid(profile(x - y) * np.cos(y), y) / (2 * np.pi)
            for x in g.x
        ])
        assert np.max(np.abs(quad - got)) < 2e-4  # O(oversample^-2)
