import numpy as np
import pytest

from keldrot.diracsea import DiracSeaSpec, F_threshold, Pi_R_reg, R_obs, pi_plus_closed_form
from keldrot.grids import OrderingParam, Signal, TimeGrid, TwoPointKernel
from keldrot.medium import (
    SpectralDensity,
    dress_retarded_grid,
    dress_retarded_momentum,
    gauge_projector_diagnosis,
    mean_field,
    noise_map,
    time_normal_vacuum_noise,
    wave_operator_residual,
    wyld_mc,
    zero_point_smooth,
    zero_point_smooth_finite_eps,
    zero_point_spectrum,
)
from keldrot.oscillator import GaussianState, OscillatorSpec, ctl_cumulants, retarded_response
from keldrot.rotation import reorder, rotate

SEA = DiracSeaSpec(mu0=1.0)


def toy_kernels(n=1024, total_time=24.0, omega0=1.0, gamma=0.25):
    grid = TimeGrid(n, total_time / n)
    spec = OscillatorSpec(omega0=omega0)
    t = grid.times
    d_bare = TwoPointKernel(grid, np.tril(
        retarded_response(spec, t[:, None] - t[None, :])))
    pi_r = TwoPointKernel(grid, (gamma / grid.dt) * np.eye(grid.n))
    return grid, spec, d_bare, pi_r, gamma


class TestMomentumDressing:
    def test_bare_limit(self):
        # with no susceptibility the propagator is mu_vac / k^2
        val = dress_retarded_momentum(-4.0, DiracSeaSpec(mu0=1e8))  # R ~ 0
        assert val == pytest.approx(-0.25, rel=1e-6)

    def test_spacelike_real_and_negative(self):
        val = dress_retarded_momentum(-9.0, SEA)
        assert val.imag == 0.0
        assert val.real == pytest.approx(-1.0 / (9.0 * (1 + R_obs(-9.0, SEA).real)),
                                         rel=1e-12)

    def test_light_cone_refused(self):
        with pytest.raises(ValueError, match="delta ledger"):
            dress_retarded_momentum(0.0, SEA)


class TestGridDressing:
    def test_zero_susceptibility_identity(self):
        grid, _, d_bare, _, _ = toy_kernels()
        dressed = dress_retarded_grid(d_bare, TwoPointKernel.zero(grid))
        assert np.abs(dressed.values - d_bare.values).max() == 0.0

    def test_pole_shift_closed_form(self):
        grid, spec, d_bare, pi_r, gamma = toy_kernels(n=2048, total_time=30.0)
        dressed = dress_retarded_grid(d_bare, pi_r)
        w_shift = np.sqrt(spec.omega0 ** 2 + gamma * spec.omega0)
        t = grid.times
        tau = t[:, None] - t[None, :]
        closed = np.tril((spec.omega0 / w_shift)
                         * retarded_response(OscillatorSpec(omega0=w_shift), tau)
                         * (w_shift / w_shift))
        assert np.abs(dressed.values - closed).max() < 1e-4

    def test_neumann_truncation_cubic_scaling(self):
        errs = []
        for gamma in (0.02, 0.01):
            grid, _, d_bare, pi_r, _ = toy_kernels(n=512, total_time=12.0,
                                                   gamma=gamma)
            dressed = dress_retarded_grid(d_bare, pi_r)
            dt = grid.dt
            g1 = dt ** 2 * (d_bare.values @ pi_r.values)
            three_term = d_bare.values + g1 @ d_bare.values + g1 @ g1 @ d_bare.values
            errs.append(np.abs(three_term - dressed.values).max())
        assert errs[0] / errs[1] == pytest.approx(8.0, rel=0.25)

    def test_wave_operator_residual(self):
        grid, spec, d_bare, pi_r, _ = toy_kernels(n=2048, total_time=30.0)
        dressed = dress_retarded_grid(d_bare, pi_r)
        assert wave_operator_residual(dressed, pi_r, spec.omega0) < 1e-4

    def test_non_retarded_input_rejected(self):
        grid, _, d_bare, _, _ = toy_kernels(n=64, total_time=6.0)
        sym = TwoPointKernel(grid, d_bare.values + d_bare.values.T)
        with pytest.raises(ValueError, match="not retarded"):
            dress_retarded_grid(sym, TwoPointKernel.zero(grid))

    def test_result_is_retarded(self):
        grid, _, d_bare, pi_r, _ = toy_kernels(n=256, total_time=10.0)
        dressed = dress_retarded_grid(d_bare, pi_r)
        assert np.abs(np.triu(dressed.values, 1)).max() == 0.0


class TestMeanField:
    def test_delta_pulse_reads_off_column(self):
        grid, _, d_bare, _, _ = toy_kernels(n=128, total_time=8.0)
        j = Signal(grid, np.zeros(grid.n))
        j.values[7] = 1.0 / grid.dt
        out = mean_field(d_bare, j)
        assert np.abs(out.values - d_bare.values[:, 7]).max() < 1e-12

    def test_zero_sources(self):
        grid, _, d_bare, _, _ = toy_kernels(n=64, total_time=6.0)
        out = mean_field(d_bare, Signal.zero(grid), Signal.zero(grid))
        assert np.abs(out.values).max() == 0.0

    def test_superposition(self):
        grid, _, d_bare, _, _ = toy_kernels(n=64, total_time=6.0)
        rng = np.random.default_rng(0)
        j1 = Signal(grid, rng.normal(size=grid.n))
        j2 = Signal(grid, rng.normal(size=grid.n))
        lhs = mean_field(d_bare, j1 + j2).values
        rhs = mean_field(d_bare, j1).values + mean_field(d_bare, j2).values
        assert np.abs(lhs - rhs).max() < 1e-12


class TestNoiseMap:
    def test_empty_vacuum_maps_to_zero(self):
        grid, _, d_bare, _, _ = toy_kernels(n=64, total_time=6.0)
        out = noise_map(d_bare, TwoPointKernel.zero(grid))
        assert np.abs(out.values).max() == 0.0

    def test_white_noise_composition(self):
        grid, _, d_bare, _, _ = toy_kernels(n=64, total_time=6.0)
        white = TwoPointKernel(grid, np.eye(grid.n) / grid.dt)
        out = noise_map(d_bare, white)
        expect = grid.dt * (d_bare.values @ d_bare.values.conj().T)
        assert np.abs(out.values - expect).max() < 1e-12

    def test_output_hermitian(self):
        grid, _, d_bare, pi_r, _ = toy_kernels(n=64, total_time=6.0)
        rng = np.random.default_rng(1)
        h = rng.normal(size=(grid.n, grid.n))
        pi_n = TwoPointKernel(grid, (h + h.T).astype(complex))
        out = noise_map(d_bare, pi_n)
        assert np.abs(out.values - out.values.conj().T).max() < 1e-10

    def test_non_hermitian_noise_rejected(self):
        grid, _, d_bare, _, _ = toy_kernels(n=16, total_time=2.0)
        bad = TwoPointKernel(grid, np.triu(np.ones((grid.n, grid.n))))
        with pytest.raises(ValueError, match="Hermitian"):
            noise_map(d_bare, bad)


class TestZeroPointSpectrum:
    def test_below_threshold_smooth_vanishes(self):
        assert zero_point_smooth(2.0, SEA) == 0.0

    def test_closed_form_value(self):
        k_sq = 8.0
        expect = SEA.alpha * F_threshold(2.0) / (
            3 * k_sq * abs(1 + R_obs(k_sq, SEA)) ** 2)
        assert zero_point_smooth(k_sq, SEA) == pytest.approx(expect, rel=1e-12)

    def test_delta_ledger_single_cone_term(self):
        density = zero_point_spectrum([2.0, 8.0], SEA, mu_vac=1.5, hbar_c=2.0)
        assert density.delta_terms == [(0.0, np.pi * 2.0 * 1.5)]

    def test_two_route_agreement(self):
        for k_sq in (6.0, 8.0, 20.0):
            closed = zero_point_smooth(k_sq, SEA)
            k0 = np.sqrt(k_sq + 2.0)
            route = zero_point_smooth_finite_eps(k0, k0 ** 2 - k_sq, SEA, 1e-4)
            assert abs(route - closed) / closed < 1e-3

    def test_propagator_route_improves_linearly(self):
        k_sq = 8.0
        closed = zero_point_smooth(k_sq, SEA)
        k0 = np.sqrt(k_sq + 2.0)
        devs = [abs(zero_point_smooth_finite_eps(k0, k0 ** 2 - k_sq, SEA, e,
                                                 eps_in="propagator") - closed)
                for e in (1e-3, 1e-4)]
        assert devs[1] < devs[0]
        assert devs[0] / devs[1] == pytest.approx(10.0, rel=0.2)

    def test_scalar_in_k_sq(self):
        k_sq = 30.0
        vals = [zero_point_smooth_finite_eps(k0, k0 ** 2 - k_sq, SEA, 1e-4)
                for k0 in (np.sqrt(k_sq + 0.3), np.sqrt(k_sq + 9.0))]
        assert abs(vals[0] - vals[1]) < 1e-10 * abs(vals[0])

    def test_density_validation(self):
        with pytest.raises(ValueError):
            SpectralDensity(k_sq=np.array([1.0]), smooth=np.array([1.0, 2.0]))


class TestTimeNormalVacuumNoise:
    @staticmethod
    def sea_inputs(grid, kvec_sq=1.0):
        pi_f_bins = np.zeros(grid.n, dtype=complex)
        pi_w_bins = np.zeros(grid.n, dtype=complex)
        for i, w in enumerate(grid.omega):
            if grid.n % 2 == 0 and i == grid.n // 2:
                continue
            theta = 1.0 if w > 0 else (0.5 if w == 0 else 0.0)
            pr = Pi_R_reg(abs(w), kvec_sq, SEA).scalar_part
            pi_f_bins[i] = theta * pr + (1.0 - theta) * np.conjugate(pr)
            pi_w_bins[i] = pi_plus_closed_form(w, kvec_sq, SEA)
        return (Signal(grid, np.fft.fft(pi_f_bins)),
                Signal(grid, np.fft.fft(pi_w_bins)))

    def test_dirac_sea_vacuum_gives_zero(self):
        grid = TimeGrid(128, 0.08)
        pi_f, pi_w = self.sea_inputs(grid)
        out = time_normal_vacuum_noise(pi_f, pi_w)
        scale = np.abs(pi_w.values).max()
        assert np.abs(out.values).max() < 1e-8 * scale

    def test_thermal_like_input_is_nonzero(self):
        grid = TimeGrid(128, 0.08)
        pi_f, pi_w = self.sea_inputs(grid)
        bins = np.fft.ifft(pi_w.values)
        bins[-7] += 0.05j  # negative-frequency (occupied-mode) content
        out = time_normal_vacuum_noise(pi_f, Signal(grid, np.fft.fft(bins)))
        assert np.abs(out.values).max() > 0.01

    def test_reordered_vacuum_noise_scales_with_s_minus(self):
        grid = TimeGrid(128, 0.08)
        w0 = grid.resonant_frequency(9)
        spec = OscillatorSpec(omega0=w0)
        ctl = ctl_cumulants(spec, GaussianState(), grid, periodic=True)
        rot1 = rotate(ctl, OrderingParam(1.0))
        t = grid.times
        for s in (0.0, -1.0, 0.35):
            p = OrderingParam(s)
            n_s = reorder(rot1, s).N_s.values
            expect = 2 * p.s_minus * 0.5 * np.cos(w0 * (t[:, None] - t[None, :]))
            assert np.abs(n_s - expect).max() < 1e-10


class TestWyldMC:
    def test_deterministic_source_only(self):
        grid = TimeGrid(32, 0.2)
        spec = OscillatorSpec(omega0=grid.resonant_frequency(3))
        j_e = Signal(grid, np.cos(spec.omega0 * grid.times))
        res = wyld_mc(spec, grid, 200, seed=5, J_e=j_e)
        t = grid.times
        dr = np.tril(retarded_response(spec, t[:, None] - t[None, :]))
        expect = grid.dt * (dr @ j_e.values.real)
        assert np.abs(res["mean"] - expect).max() < 1e-12
        assert np.abs(res["cov"]).max() < 1e-12

    def test_thermal_infield_covariance(self):
        grid = TimeGrid(24, 0.3)
        spec = OscillatorSpec(omega0=grid.resonant_frequency(3))
        nbar = 1.5
        res = wyld_mc(spec, grid, 400_000, seed=11, alpha_nbar=nbar)
        t = grid.times
        target = nbar * np.cos(spec.omega0 * (t[:, None] - t[None, :]))
        picks = [(0, 0), (5, 2), (12, 12), (20, 3)]
        for ij in picks:
            assert abs(res["cov"][ij] - target[ij]) < 3.5 * res["cov_stderr"][ij]

    def test_white_noise_matches_noise_map(self):
        grid = TimeGrid(24, 0.3)
        spec = OscillatorSpec(omega0=grid.resonant_frequency(3))
        sigma = 0.5
        res = wyld_mc(spec, grid, 400_000, seed=21, white_noise_std=sigma)
        t = grid.times
        dr = TwoPointKernel(grid, np.tril(
            retarded_response(spec, t[:, None] - t[None, :])))
        pi_n = TwoPointKernel(grid, (sigma ** 2 / grid.dt) * np.eye(grid.n))
        target = noise_map(dr, pi_n).values.real
        picks = [(23, 4), (23, 12), (12, 12), (18, 6)]
        for ij in picks:
            assert abs(res["cov"][ij] - target[ij]) < 3.5 * res["cov_stderr"][ij]

    def test_empty_run_rejected(self):
        grid = TimeGrid(8, 0.5)
        with pytest.raises(ValueError):
            wyld_mc(OscillatorSpec(omega0=1.0), grid, 0, seed=0)

    def test_seed_determinism(self):
        grid = TimeGrid(8, 0.5)
        spec = OscillatorSpec(omega0=1.0)
        a = wyld_mc(spec, grid, 1000, seed=9, white_noise_std=0.3)
        b = wyld_mc(spec, grid, 1000, seed=9, white_noise_std=0.3)
        assert np.array_equal(a["cov"], b["cov"])


def test_noise_map_unrotates_into_consistent_cumulants():
    # the dressed noise kernel plugged into the inverse rotation must give a
    # closed-time-loop triple obeying the consistency identity
    from keldrot.rotation import RotatedCumulants, unrotate

    grid, spec, d_bare, pi_r, _ = toy_kernels(n=96, total_time=10.0)
    dressed = dress_retarded_grid(d_bare, pi_r)
    rng = np.random.default_rng(2)
    h = rng.normal(size=(grid.n, grid.n))
    pi_n = TwoPointKernel(grid, (h + h.T).astype(complex))
    n_field = noise_map(dressed, pi_n)
    rot = RotatedCumulants(mean=Signal.zero(grid), D_R=dressed, N_s=n_field,
                           p=OrderingParam(1.0))
    ctl = unrotate(rot)
    assert ctl.consistency_residual() < 1e-8
    assert ctl.reversal_residual() < 1e-8


def test_gauge_diagnosis_reports_obstruction():
    report = gauge_projector_diagnosis(SEA, mu_vac=2.0, hbar_c=1.0)
    assert report["consistent"] is False
    assert report["divergent_coefficient"] == pytest.approx(2.0 * np.pi)
    assert "delta(k^2)/k^2" in report["transverse_projector_term"]
