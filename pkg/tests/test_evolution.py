import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fnlslab import (
    Grid,
    ModelParams,
    MonitorConfig,
    PhysicalField,
    TimeGrid,
    evolve,
    linear_flow,
    nonlinear_flow,
    step_splitting4,
    step_stiff_rk4,
    to_physical,
    to_spectral,
)
from fnlslab.diagnostics import mass
from fnlslab.evolution import (
    STATUS_COMPLETED,
    STATUS_ENERGY_DRIFT,
    STATUS_OVERFLOW,
    STATUS_SINGULARITY,
)

GRID = Grid(256, 2.0)
PARAMS = ModelParams(s=0.7, p=1.0, gamma=-1.0)


def plane_wave(grid, amplitude, mode):
    return PhysicalField.from_function(
        grid, lambda x: amplitude * np.exp(1j * mode * x / grid.half_width)
    )


def gaussian_packet(grid):
    return PhysicalField.from_function(
        grid, lambda x: (1.0 + 0.3j) * np.exp(-5.0 * x**2)
    )


class TestLinearFlow:
    def test_zero_dt_is_identity(self, rng):
        u = to_spectral(gaussian_packet(GRID))
        out = linear_flow(u, PARAMS, 0.0)
        assert np.array_equal(out.coefficients, u.coefficients)

    def test_single_mode_phase(self):
        uh = to_spectral(plane_wave(GRID, 1.0, 4))
        out = linear_flow(uh, PARAMS, 0.3)
        k0 = 4 / GRID.half_width
        expected = np.exp(-0.5j * k0 ** (2 * PARAMS.s) * 0.3)
        ratio = out.coefficients[4] / uh.coefficients[4]
        assert ratio == pytest.approx(expected, rel=1e-13)
        assert abs(out.coefficients[4]) == pytest.approx(abs(uh.coefficients[4]))

    def test_semigroup_property(self):
        uh = to_spectral(gaussian_packet(GRID))
        stepped = uh
        for _ in range(7):
            stepped = linear_flow(stepped, PARAMS, 0.05)
        direct = linear_flow(uh, PARAMS, 7 * 0.05)
        scale = np.max(np.abs(direct.coefficients))
        assert np.max(np.abs(stepped.coefficients - direct.coefficients)) < 1e-12 * scale

    def test_unitarity(self):
        uh = to_spectral(gaussian_packet(GRID))
        out = linear_flow(uh, PARAMS, 1.7)
        assert np.linalg.norm(out.coefficients) == pytest.approx(
            np.linalg.norm(uh.coefficients), rel=1e-14
        )


class TestNonlinearFlow:
    def test_zero_dt_is_identity(self):
        u = gaussian_packet(GRID)
        out = nonlinear_flow(u, PARAMS, 0.0)
        assert np.array_equal(out.values, u.values)

    def test_unit_modulus_pi_rotation(self):
        u = PhysicalField.from_function(GRID, lambda x: np.exp(1j * np.sin(x)))
        params = ModelParams(s=0.5, p=1.0, gamma=-1.0, eps=1.0)
        out = nonlinear_flow(u, params, np.pi)
        # gamma=-1: phase exp(+i pi) = -1
        assert np.max(np.abs(out.values + u.values)) < 1e-13

    @given(seed=st.integers(0, 2**32 - 1))
    def test_pointwise_modulus_preserved(self, seed):
        rng = np.random.default_rng(seed)
        u = PhysicalField(
            GRID, rng.standard_normal(256) + 1j * rng.standard_normal(256)
        )
        out = nonlinear_flow(u, PARAMS, 0.37)
        assert np.max(np.abs(np.abs(out.values) - np.abs(u.values))) < 1e-13
        assert mass(out) == pytest.approx(mass(u), rel=1e-13)


class TestSplittingStep:
    def test_plane_wave_exact(self):
        # exact solution A e^{i(k0 x - theta t)}, theta = |k0|^{2s}/2 + gamma A^{2p}
        amplitude, mode = 0.8, 3
        k0 = mode / GRID.half_width
        u = plane_wave(GRID, amplitude, mode)
        theta = 0.5 * k0 ** (2 * PARAMS.s) + PARAMS.gamma * amplitude**2
        state = u
        n_steps, dt = 1000, 1e-3
        for _ in range(n_steps):
            state = step_splitting4(state, PARAMS, dt)
        exact = amplitude * np.exp(1j * (mode * GRID.x / GRID.half_width - theta))
        assert np.max(np.abs(state.values - exact)) < 1e-10

    def test_self_convergence_order(self):
        u0 = gaussian_packet(GRID)

        def advance(n):
            state, dt = u0, 0.5 / n
            for _ in range(n):
                state = step_splitting4(state, PARAMS, dt)
            return state.values

        ref = advance(320)
        e1 = np.max(np.abs(advance(40) - ref))
        e2 = np.max(np.abs(advance(80) - ref))
        order = np.log2(e1 / e2)
        assert order >= 3.5

    def test_small_dt_tends_to_identity(self):
        u = gaussian_packet(GRID)
        out = step_splitting4(u, PARAMS, 1e-9)
        assert np.max(np.abs(out.values - u.values)) < 1e-7
        out2 = step_splitting4(u, PARAMS, 1e-12)
        assert np.max(np.abs(out2.values - u.values)) < 1e-10

    def test_mass_conservation_per_unit_time(self):
        state = gaussian_packet(GRID)
        m0 = mass(state)
        for _ in range(1000):
            state = step_splitting4(state, PARAMS, 1e-3)
        assert abs(mass(state) - m0) <= 1e-12 * m0

    def test_time_reversal(self):
        u = gaussian_packet(GRID)
        forward = step_splitting4(u, PARAMS, 0.01)
        back = step_splitting4(forward, PARAMS, -0.01)
        assert np.max(np.abs(back.values - u.values)) < 1e-12


class TestStiffRK4Step:
    def test_negligible_amplitude_reduces_to_linear(self):
        amp = 1e-8
        u = PhysicalField(GRID, amp * np.exp(-4 * GRID.x**2).astype(complex))
        uh = to_spectral(u)
        out = step_stiff_rk4(uh, PARAMS, 0.05)
        lin = linear_flow(uh, PARAMS, 0.05)
        scale = np.max(np.abs(lin.coefficients))
        assert np.max(np.abs(out.coefficients - lin.coefficients)) < 1e-14 * scale

    def test_plane_wave(self):
        amplitude, mode = 0.8, 3
        k0 = mode / GRID.half_width
        uh = to_spectral(plane_wave(GRID, amplitude, mode))
        theta = 0.5 * k0 ** (2 * PARAMS.s) + PARAMS.gamma * amplitude**2
        n_steps, dt = 1000, 1e-3
        for _ in range(n_steps):
            uh = step_stiff_rk4(uh, PARAMS, dt)
        state = to_physical(uh)
        exact = amplitude * np.exp(1j * (mode * GRID.x / GRID.half_width - theta))
        assert np.max(np.abs(state.values - exact)) < 1e-10

    def test_cross_integrator_agreement_on_smooth_run(self, desk_gs06):
        # the two schemes are independent integrators of the same flow
        params = ModelParams(s=0.6, p=1.0, gamma=-1.0)
        grid = desk_gs06.field.grid
        tg = TimeGrid(1.0, 2000)
        mon = MonitorConfig(series_stride=2000)
        res_split = evolve(params, desk_gs06.field, tg, mon, "splitting4")
        res_stiff = evolve(params, desk_gs06.field, tg, mon, "stiff_rk4")
        diff = np.max(
            np.abs(res_split.final_state.values - res_stiff.final_state.values)
        )
        assert diff < 1e-8


class TestEvolve:
    def test_completed_status_and_final_time(self):
        res = evolve(PARAMS, gaussian_packet(GRID), TimeGrid(0.2, 100),
                     MonitorConfig(series_stride=10))
        assert res.status == STATUS_COMPLETED
        assert res.stop_time == 0.2
        assert res.series["t"][-1] == pytest.approx(0.2)
        assert np.all(np.diff(res.series["t"]) > 0)
        assert res.sigma_c == pytest.approx(0.5 - 0.7)

    def test_series_stride_and_columns(self):
        res = evolve(PARAMS, gaussian_packet(GRID), TimeGrid(0.1, 100),
                     MonitorConfig(series_stride=25))
        assert len(res.series) == 5  # t = 0 plus four recorded strides
        for name in ("t", "mass", "energy", "delta_E", "sup_norm",
                     "grad_l2", "hdot_sigma", "delta_sing", "mu"):
            assert name in res.series.dtype.names

    def test_snapshots_recorded_at_requested_times(self):
        mon = MonitorConfig(series_stride=50, snapshot_times=(0.0, 0.05, 0.1))
        res = evolve(PARAMS, gaussian_packet(GRID), TimeGrid(0.1, 100), mon)
        times = [t for t, _ in res.snapshots]
        assert times == pytest.approx([0.0, 0.05, 0.1])

    def test_snapshot_outside_horizon_rejected(self):
        mon = MonitorConfig(snapshot_times=(0.3,))
        with pytest.raises(ValueError):
            evolve(PARAMS, gaussian_packet(GRID), TimeGrid(0.1, 10), mon)

    def test_nonfinite_initial_data_rejected(self):
        bad = PhysicalField(GRID, np.full(256, np.nan, dtype=complex))
        with pytest.raises(ValueError):
            evolve(PARAMS, bad, TimeGrid(0.1, 10))

    def test_unknown_integrator_rejected(self):
        with pytest.raises(ValueError):
            evolve(PARAMS, gaussian_packet(GRID), TimeGrid(0.1, 10),
                   integrator="leapfrog")

    def test_determinism_bit_identical(self):
        runs = [
            evolve(PARAMS, gaussian_packet(GRID), TimeGrid(0.2, 200),
                   MonitorConfig(series_stride=20))
            for _ in range(2)
        ]
        for name in runs[0].series.dtype.names:
            assert np.array_equal(
                runs[0].series[name], runs[1].series[name], equal_nan=True
            )
        assert np.array_equal(
            runs[0].final_state.values, runs[1].final_state.values
        )

    def test_overflow_stop_keeps_last_finite_state(self):
        # septic focusing sech blows up; RK4 on the nonlinearity overflows
        grid = Grid(512, 5.0)
        params = ModelParams(s=1.0, p=3.0, gamma=-1.0)
        u0 = PhysicalField.from_function(grid, lambda x: 1 / np.cosh(x))
        mon = MonitorConfig(series_stride=5, energy_drift_threshold=np.inf)
        res = evolve(params, u0, TimeGrid(2.5, 2500), mon, "stiff_rk4")
        assert res.status == STATUS_OVERFLOW
        assert res.stop_time < 2.5
        assert np.all(np.isfinite(res.final_state.values))
        for name in res.series.dtype.names:
            assert np.all(np.isfinite(res.series[name][1:])) or name in (
                "delta_sing", "mu", "hdot_sigma",
            )

    def test_singularity_stop(self):
        # domain large enough that the periodization kink of sech stays
        # below the spectrum-fit floor, as in any honest tracing setup
        grid = Grid(2048, 10.0)
        params = ModelParams(s=0.5, p=1.0, gamma=-1.0)
        u0 = PhysicalField.from_function(grid, lambda x: 1.3 / np.cosh(x))
        mon = MonitorConfig(series_stride=2, singularity_stop=True,
                            energy_drift_threshold=np.inf)
        res = evolve(params, u0, TimeGrid(4.0, 8000), mon, "stiff_rk4")
        assert res.status == STATUS_SINGULARITY
        assert 0 < res.stop_time < 4.0
        deltas = res.series["delta_sing"]
        assert deltas[-1] < 2 * np.pi * 10.0 / 2048
        assert deltas[0] == pytest.approx(np.pi / 2, rel=0.1)

    def test_energy_drift_stop(self):
        mon = MonitorConfig(series_stride=10, energy_drift_threshold=1e-18)
        res = evolve(PARAMS, gaussian_packet(GRID), TimeGrid(1.0, 1000), mon)
        assert res.status == STATUS_ENERGY_DRIFT
        assert res.stop_time < 1.0

    def test_on_sample_callback_runs_on_recorded_samples(self):
        seen = []
        evolve(PARAMS, gaussian_packet(GRID), TimeGrid(0.1, 100),
               MonitorConfig(series_stride=50),
               on_sample=lambda t, values: seen.append(t))
        assert seen == pytest.approx([0.0, 0.05, 0.1])

    @given(seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=10)
    def test_splitting_mass_conserved_random_data(self, seed):
        rng = np.random.default_rng(seed)
        u0 = PhysicalField(
            GRID,
            rng.standard_normal(256) * 0.3 + 1j * 0.3 * rng.standard_normal(256),
        )
        res = evolve(PARAMS, u0, TimeGrid(0.5, 500), MonitorConfig(series_stride=100))
        masses = res.series["mass"]
        assert np.max(np.abs(masses - masses[0])) <= 1e-12 * masses[0] * 0.5 + 1e-13
