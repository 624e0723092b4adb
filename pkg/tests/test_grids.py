import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fnlslab import (
    Grid,
    GridMismatchError,
    PhysicalField,
    SpectralField,
    apply_fractional_laplacian,
    to_physical,
    to_spectral,
)
from fnlslab.diagnostics import mass, sobolev_seminorm


def dft_oracle(values):
    """Direct O(N^2) DFT sum, the independent transform reference."""
    n = len(values)
    j = np.arange(n)
    return np.array(
        [np.sum(values * np.exp(-2j * np.pi * j * m / n)) for m in range(n)]
    )


def random_field(grid, rng):
    v = rng.standard_normal(grid.n_modes) + 1j * rng.standard_normal(grid.n_modes)
    return PhysicalField(grid, v)


class TestGridConstruction:
    def test_nodes_and_spacing(self):
        g = Grid(16, 2.0)
        assert g.x[0] == pytest.approx(-2.0 * np.pi)
        assert np.allclose(np.diff(g.x), g.dx)
        assert g.dx == pytest.approx(2 * np.pi * 2.0 / 16)
        assert g.length == pytest.approx(4 * np.pi)

    def test_wavenumbers_symmetric_except_nyquist(self):
        g = Grid(16, 0.5)
        k = np.sort(g.k)
        assert k[0] == pytest.approx(-16.0)  # Nyquist -N/2 / D
        positive = k[k > 0]
        negative = -k[(k < 0) & (k > k[0])]
        assert np.allclose(np.sort(positive), np.sort(negative))

    @pytest.mark.parametrize("n", [7, 12, 4, 0, 24])
    def test_rejects_non_power_of_two(self, n):
        with pytest.raises(ValueError):
            Grid(n, 1.0)

    @pytest.mark.parametrize("d", [0.0, -1.0])
    def test_rejects_bad_half_width(self, d):
        with pytest.raises(ValueError):
            Grid(16, d)

    def test_field_length_mismatch(self):
        with pytest.raises(GridMismatchError):
            PhysicalField(Grid(16, 1.0), np.zeros(8, dtype=complex))
        with pytest.raises(GridMismatchError):
            SpectralField(Grid(16, 1.0), np.zeros(32, dtype=complex))


class TestTransforms:
    def test_constant_field_concentrates_at_zero(self):
        g = Grid(64, 1.0)
        u = PhysicalField(g, np.ones(64, dtype=complex))
        spec = to_spectral(u).coefficients
        assert abs(spec[0]) == pytest.approx(64.0)
        assert np.max(np.abs(spec[1:])) < 1e-12

    def test_single_period_mode(self):
        g = Grid(64, 3.0)
        u = PhysicalField.from_function(g, lambda x: np.exp(1j * x / 3.0))
        spec = to_spectral(u).coefficients
        others = np.abs(np.delete(spec, 1))
        assert abs(spec[1]) == pytest.approx(64.0, rel=1e-12)
        assert np.max(others) < 1e-10

    def test_matches_brute_force_dft(self, rng):
        g = Grid(128, 2.0)
        u = random_field(g, rng)
        spec = to_spectral(u).coefficients
        expected = dft_oracle(u.values)
        scale = np.max(np.abs(expected))
        assert np.max(np.abs(spec - expected)) < 1e-12 * scale

    @given(seed=st.integers(0, 2**32 - 1))
    def test_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        g = Grid(64, 1.5)
        u = random_field(g, rng)
        back = to_physical(to_spectral(u))
        sup = np.max(np.abs(u.values))
        assert np.max(np.abs(back.values - u.values)) <= 1e-12 * max(sup, 1e-30)

    @given(seed=st.integers(0, 2**32 - 1))
    def test_parseval(self, seed):
        rng = np.random.default_rng(seed)
        g = Grid(64, 0.7)
        u = random_field(g, rng)
        spec = to_spectral(u).coefficients
        spectral_mass = g.dx / g.n_modes * np.sum(np.abs(spec) ** 2)
        assert mass(u) == pytest.approx(spectral_mass, rel=1e-12)


class TestFractionalLaplacian:
    def test_eigenfunction(self):
        g = Grid(128, 2.0)
        k0 = 5 / 2.0
        u = PhysicalField.from_function(g, lambda x: np.exp(1j * k0 * x))
        out = apply_fractional_laplacian(u, 0.7)
        assert np.allclose(out.values, k0**1.4 * u.values, atol=1e-10)

    def test_annihilates_constants(self):
        g = Grid(64, 1.0)
        u = PhysicalField(g, np.full(64, 2.3 + 0.1j))
        out = apply_fractional_laplacian(u, 0.4)
        assert np.max(np.abs(out.values)) < 1e-12

    def test_s1_matches_analytic_second_derivative(self):
        g = Grid(256, 4.0)
        u = PhysicalField.from_function(g, lambda x: np.sin(x / 4.0))
        out = apply_fractional_laplacian(u, 1.0)
        expected = np.sin(g.x / 4.0) / 16.0
        assert np.max(np.abs(out.values - expected)) < 1e-12

    @pytest.mark.parametrize("s", [0.2, 0.5, 0.8, 1.0])
    @pytest.mark.parametrize("n", [64, 256])
    def test_oracle_equivalence_small_grids(self, s, n, rng):
        g = Grid(n, 1.3)
        u = random_field(g, rng)
        out = apply_fractional_laplacian(u, s)
        spec = dft_oracle(u.values)
        sym = np.abs(g.k) ** (2 * s)
        j = np.arange(n)
        back = np.array(
            [np.mean(sym * spec * np.exp(2j * np.pi * j_ * j / n)) for j_ in range(n)]
        )
        scale = np.max(np.abs(u.values)) * max(sym.max(), 1.0)
        assert np.max(np.abs(out.values - back)) < 1e-10 * scale

    @pytest.mark.parametrize("s", [0.0, -0.3, 1.5])
    def test_rejects_bad_exponent(self, s):
        g = Grid(16, 1.0)
        u = PhysicalField(g, np.ones(16, dtype=complex))
        with pytest.raises(ValueError):
            apply_fractional_laplacian(u, s)

    def test_s1_consistency_with_iterated_first_derivative(self, rng):
        g = Grid(128, 1.0)
        u = random_field(g, rng)
        out = apply_fractional_laplacian(u, 1.0)
        spec = to_spectral(u).coefficients
        first = to_physical(SpectralField(g, 1j * g.k * spec))
        second = to_physical(
            SpectralField(g, 1j * g.k * to_spectral(first).coefficients)
        )
        scale = np.max(np.abs(out.values)) + 1.0
        assert np.max(np.abs(out.values + second.values)) < 1e-12 * scale


class TestSymbolMonotonicity:
    @given(
        seed=st.integers(0, 2**32 - 1),
        sigma=st.floats(0.0, 3.0),
        step=st.floats(0.01, 2.0),
    )
    @settings(max_examples=30)
    def test_seminorm_nondecreasing_in_sigma(self, seed, sigma, step):
        # all spectral energy at |k| >= 1 so larger sigma only amplifies
        rng = np.random.default_rng(seed)
        g = Grid(64, 1.0)
        coeff = np.zeros(64, dtype=complex)
        idx = np.nonzero(np.abs(g.k) >= 1.0)[0]
        coeff[idx] = rng.standard_normal(len(idx)) + 1j * rng.standard_normal(len(idx))
        u = to_physical(SpectralField(g, coeff))
        lo = sobolev_seminorm(u, sigma)
        hi = sobolev_seminorm(u, sigma + step)
        assert hi >= lo * (1 - 1e-12)
