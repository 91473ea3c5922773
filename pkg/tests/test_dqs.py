import numpy as np
import pytest

from reswave import DegenerateInputError, PeriodicGrid, SpectralAmplitude, StepFailureError
from reswave.dqs import DqsConfig, dqs_rhs, implicit_step, run_dqs, run_mrs_amplitude
from reswave.oracles import galerkin_oracle, single_harmonic

from conftest import random_zero_mean_amplitude


def harmonic_amplitude(grid, k=1, a0=1.0):
    c = np.zeros(grid.n_points, dtype=complex)
    c[k % grid.n_points] = a0
    return SpectralAmplitude(grid, c)


def coeffs_of(snapshot, n):
    return np.fft.fft(snapshot.columns["re_a"] + 1j * snapshot.columns["im_a"]) / n


class TestRhs:
    def test_zero_input(self):
        g = PeriodicGrid(32)
        out = dqs_rhs(SpectralAmplitude(g, np.zeros(32, complex)), mu=1.0)
        assert np.all(out.coeffs == 0)

    def test_single_harmonic_frequency(self):
        # a = a0 e^{inz} evolves as e^{-i Omega tau}: the tendency is
        # -i Omega a with Omega = -mu/n - n^2 |a0|^2
        g = PeriodicGrid(16)
        for n_mode, a0, mu in [(1, 1.0, 1.0), (2, 0.5 - 0.3j, 2.0), (-3, 1.2j, 0.7)]:
            a = harmonic_amplitude(g, n_mode, a0)
            omega = -mu / n_mode - n_mode**2 * abs(a0) ** 2
            rhs = dqs_rhs(a, mu=mu)
            expected = -1j * omega * a0
            assert rhs.coeffs[n_mode % 16] == pytest.approx(expected, abs=1e-13)

    def test_semi_discrete_l2_conservation(self, rng):
        # Re <a, F(a)> = 0: the analytic conservation law of the flow
        g = PeriodicGrid(64)
        for _ in range(5):
            c = random_zero_mean_amplitude(g, rng, modes=20)
            c[g.n_points // 2] = 0.0
            a = SpectralAmplitude(g, c)
            rhs = dqs_rhs(a, mu=rng.uniform(0, 2))
            ip = np.sum(np.conj(a.coeffs) * rhs.coeffs).real
            assert abs(ip) < 1e-12 * np.sum(np.abs(a.coeffs) ** 2)

    def test_tendency_is_zero_mean(self, rng):
        g = PeriodicGrid(64)
        a = SpectralAmplitude(g, random_zero_mean_amplitude(g, rng))
        assert dqs_rhs(a, mu=1.0).coeffs[0] == 0.0

    def test_nonzero_mean_rejected(self):
        g = PeriodicGrid(32)
        c = np.zeros(32, complex)
        c[0] = 1.0
        c[1] = 1.0
        a = SpectralAmplitude(g, c, zero_mean=False)
        with pytest.raises(DegenerateInputError):
            dqs_rhs(a, mu=1.0)


class TestImplicitStep:
    def test_single_harmonic_phase(self):
        # n=1, a0=1, mu=1: Omega = -2, so a(0.1) = e^{0.2 i}
        g = PeriodicGrid(8)
        cfg = DqsConfig(mu=1.0, dt=1e-3, tau_end=0.1, snapshot_taus=[0.1])
        out = run_dqs(harmonic_amplitude(g), cfg)
        c1 = coeffs_of(out.snapshots[-1], 8)[1]
        exact = np.exp(-1j * (-2.0) * 0.1)
        assert abs(c1 - exact) < 3e-7

    def test_zero_fixed_point(self):
        g = PeriodicGrid(16)
        cfg = DqsConfig(mu=1.0, dt=1e-2, tau_end=1.0)
        a = implicit_step(SpectralAmplitude(g, np.zeros(16, complex)), cfg)
        assert np.all(a.coeffs == 0)

    def test_second_order_in_dt(self):
        # halving dt cuts the error against the reference by ~4
        g = PeriodicGrid(64)
        K = 8
        init = np.zeros(2 * K + 1, complex)
        init[K + 1] = -1.0
        init[K + 2] = 0.5 * np.exp(4j * np.pi**2)
        ref = galerkin_oracle(init, mu=1.0, coefficient=1.0, tau_end=0.04)

        def solver_err(dt):
            c = np.zeros(64, complex)
            c[1] = -1.0
            c[2] = 0.5 * np.exp(4j * np.pi**2)
            cfg = DqsConfig(mu=1.0, dt=dt, tau_end=0.04, snapshot_taus=[0.04])
            out = run_dqs(SpectralAmplitude(g, c), cfg)
            got = coeffs_of(out.snapshots[-1], 64)
            return max(abs(got[k % 64] - ref[K + k]) for k in range(-K, K + 1))

        ratio = solver_err(4e-3) / solver_err(2e-3)
        assert 3.0 < ratio < 5.0

    def test_picard_failure_raises(self):
        g = PeriodicGrid(64)
        c = np.zeros(64, complex)
        c[1] = 3.0
        c[2] = 2.0
        cfg = DqsConfig(mu=1.0, dt=5.0, tau_end=10.0, picard_max_iters=2,
                        picard_tol=1e-12)
        with pytest.raises(StepFailureError):
            implicit_step(SpectralAmplitude(g, c), cfg)


class TestRunDqs:
    def test_zero_data_zero_trajectory(self):
        g = PeriodicGrid(32)
        cfg = DqsConfig(mu=1.0, dt=1e-2, tau_end=0.1,
                        snapshot_taus=[0.05, 0.1])
        out = run_dqs(SpectralAmplitude(g, np.zeros(32, complex)), cfg)
        for snap in out.snapshots:
            assert np.all(snap.columns["abs_a"] == 0.0)
        assert all(d["l2_sq"] == 0.0 for d in out.diagnostics)

    def test_l2_conserved_without_viscosity(self):
        g = PeriodicGrid(256)
        c = np.zeros(256, complex)
        c[1] = -1.0
        c[2] = 0.5 * np.exp(4j * np.pi**2)
        cfg = DqsConfig(mu=1.0, dt=2e-4, tau_end=0.1, snapshot_taus=[0.05, 0.1])
        out = run_dqs(SpectralAmplitude(g, c), cfg)
        init = 2 * np.pi * 1.25
        for d in out.diagnostics:
            assert d["l2_sq"] == pytest.approx(init, rel=1e-8)

    def test_mean_mode_stays_exactly_zero(self, rng):
        g = PeriodicGrid(64)
        a = SpectralAmplitude(g, random_zero_mean_amplitude(g, rng, scale=0.3))
        cfg = DqsConfig(mu=0.7, dt=1e-3, tau_end=0.02, snapshot_taus=[0.02])
        out = run_dqs(a, cfg)
        assert out.diagnostics[-1]["mean_abs"] == 0.0

    def test_gauge_covariance(self, rng):
        # multiplying the data by a phase multiplies the solution by it
        g = PeriodicGrid(128)
        c = random_zero_mean_amplitude(g, rng, modes=6, scale=0.4)
        theta = 0.83
        cfg = DqsConfig(mu=1.0, dt=1e-3, tau_end=0.05, snapshot_taus=[0.05])
        out1 = run_dqs(SpectralAmplitude(g, c.copy()), cfg)
        out2 = run_dqs(SpectralAmplitude(g, np.exp(1j * theta) * c), cfg)
        c1 = coeffs_of(out1.snapshots[-1], 128)
        c2 = coeffs_of(out2.snapshots[-1], 128)
        assert np.max(np.abs(np.exp(1j * theta) * c1 - c2)) < 1e-10

    def test_translation_covariance(self, rng):
        g = PeriodicGrid(128)
        c = random_zero_mean_amplitude(g, rng, modes=6, scale=0.4)
        z0 = 1.37
        k = g.wavenumbers
        shift = np.exp(1j * k * z0)
        cfg = DqsConfig(mu=1.0, dt=1e-3, tau_end=0.05, snapshot_taus=[0.05])
        out1 = run_dqs(SpectralAmplitude(g, c.copy()), cfg)
        out2 = run_dqs(SpectralAmplitude(g, shift * c), cfg)
        c1 = coeffs_of(out1.snapshots[-1], 128)
        c2 = coeffs_of(out2.snapshots[-1], 128)
        assert np.max(np.abs(shift * c1 - c2)) < 1e-10

    def test_single_harmonic_exact_over_unit_interval(self):
        g = PeriodicGrid(8)
        taus = [0.25, 0.5, 0.75, 1.0]
        cfg = DqsConfig(mu=1.0, dt=1e-3, tau_end=1.0, snapshot_taus=taus)
        out = run_dqs(harmonic_amplitude(g), cfg)
        for tau, snap in zip(taus, out.snapshots):
            exact = single_harmonic(1, 1.0, 1.0, tau)
            assert abs(coeffs_of(snap, 8)[1] - exact) < 1e-5

    def test_matches_galerkin_oracle(self):
        K = 16
        init = np.zeros(2 * K + 1, complex)
        init[K + 1] = -1.0
        init[K + 2] = 0.5 * np.exp(4j * np.pi**2)
        ref = galerkin_oracle(init, mu=1.0, coefficient=1.0, tau_end=0.05)
        g = PeriodicGrid(64)
        c = np.zeros(64, complex)
        c[1] = -1.0
        c[2] = 0.5 * np.exp(4j * np.pi**2)
        cfg = DqsConfig(mu=1.0, dt=1e-4, tau_end=0.05, snapshot_taus=[0.05])
        out = run_dqs(SpectralAmplitude(g, c), cfg)
        got = coeffs_of(out.snapshots[-1], 64)
        diff = max(abs(got[k % 64] - ref[K + k]) for k in range(-K, K + 1))
        assert diff < 1e-6

    def test_exhausted_halvings_propagate(self):
        g = PeriodicGrid(64)
        c = np.zeros(64, complex)
        c[1] = 3.0
        c[2] = 2.0
        cfg = DqsConfig(mu=1.0, dt=50.0, tau_end=100.0, picard_max_iters=2,
                        picard_tol=1e-12, max_dt_halvings=2)
        with pytest.raises(StepFailureError) as info:
            run_dqs(SpectralAmplitude(g, c), cfg)
        assert getattr(info.value, "partial", None) is not None

    def test_viscosity_applied_after_step(self):
        g = PeriodicGrid(64)
        c = np.zeros(64, complex)
        c[12] = 1.0  # above the n/8 = 8 cutoff
        cfg_visc = DqsConfig(mu=0.0, dt=1e-3, tau_end=1e-3, snapshot_taus=[1e-3],
                             viscosity_nu=1.0)
        out = run_dqs(SpectralAmplitude(g, c), cfg_visc)
        got = coeffs_of(out.snapshots[-1], 64)[12]
        # |a| decays by exactly exp(-nu k^2 dt); the phase evolves freely
        assert abs(got) == pytest.approx(np.exp(-1.0 * 144 * 1e-3), rel=1e-10)


class TestMrsAmplitudeFlow:
    def test_single_harmonic_two_thirds_shift(self):
        # frequency shift Omega = -(2/3)|a0|^2 at mu=0
        g = PeriodicGrid(8)
        cfg = DqsConfig(mu=0.0, dt=1e-3, tau_end=0.3, snapshot_taus=[0.3])
        out = run_mrs_amplitude(harmonic_amplitude(g), cfg)
        got = coeffs_of(out.snapshots[-1], 8)[1]
        exact = single_harmonic(1, 1.0, 0.0, 0.3, coefficient=2.0 / 3.0)
        assert abs(got - exact) < 1e-6

    def test_zero_data(self):
        g = PeriodicGrid(16)
        cfg = DqsConfig(dt=1e-2, tau_end=0.1)
        out = run_mrs_amplitude(SpectralAmplitude(g, np.zeros(16, complex)), cfg)
        assert np.all(out.snapshots[-1].columns["abs_a"] == 0.0)

    def test_forces_mu_zero_and_coefficient(self):
        g = PeriodicGrid(16)
        cfg = DqsConfig(mu=5.0, dt=1e-3, tau_end=0.01, coefficient=9.0)
        out = run_mrs_amplitude(harmonic_amplitude(g), cfg)
        assert out.manifest["mu"] == 0.0
        assert out.manifest["coefficient"] == pytest.approx(2.0 / 3.0)


class TestConfigValidation:
    def test_picard_tol_range(self):
        with pytest.raises(ValueError):
            DqsConfig(picard_tol=1e-5)
        with pytest.raises(ValueError):
            DqsConfig(picard_tol=0.0)

    def test_positive_dt(self):
        with pytest.raises(ValueError):
            DqsConfig(dt=0.0)

    def test_snapshot_range(self):
        with pytest.raises(ValueError):
            DqsConfig(tau_end=0.1, snapshot_taus=[0.2])


class TestGalerkinEquivalence:
    def test_same_truncation_equivalence(self):
        # with the Nyquist mode zeroed and exact cubic dealiasing, the
        # pseudo-spectral solver on n=32 points is the Galerkin truncation
        # to modes |k| <= 15: the two implementations agree to time
        # discretization error over tau = 0.1
        K = 15
        init = np.zeros(2 * K + 1, complex)
        init[K + 1] = -1.0
        init[K + 2] = 0.5 * np.exp(4j * np.pi**2)
        ref = galerkin_oracle(init, mu=1.0, coefficient=1.0, tau_end=0.1)
        n = 32
        g = PeriodicGrid(n)
        c = np.zeros(n, complex)
        c[1] = -1.0
        c[2] = 0.5 * np.exp(4j * np.pi**2)
        cfg = DqsConfig(mu=1.0, dt=5e-5, tau_end=0.1, snapshot_taus=[0.1])
        out = run_dqs(SpectralAmplitude(g, c), cfg)
        got = coeffs_of(out.snapshots[-1], n)
        diff = max(abs(got[k % n] - ref[K + k]) for k in range(-K, K + 1))
        assert diff < 1e-6
