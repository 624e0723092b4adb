import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from fnlslab import Grid, ModelParams, PhysicalField
from fnlslab.diagnostics import (
    energy,
    mass,
    relative_energy_drift,
    sobolev_seminorm,
    sup_norm,
)

SECH_GRID = Grid(4096, 20.0)


def sech_field(grid=SECH_GRID, amplitude=1.0):
    return PhysicalField.from_function(grid, lambda x: amplitude / np.cosh(x))


class TestMass:
    def test_sech_integral(self):
        assert mass(sech_field()) == pytest.approx(2.0, abs=1e-10)

    def test_zero_field(self):
        assert mass(PhysicalField(SECH_GRID, np.zeros(4096, complex))) == 0.0

    @given(alpha=st.floats(0.1, 5.0))
    def test_quadratic_scaling(self, alpha):
        base = mass(sech_field())
        assert mass(sech_field(amplitude=alpha)) == pytest.approx(
            alpha**2 * base, rel=1e-12
        )


class TestSobolevSeminorm:
    def test_sigma_zero_is_l2_norm(self):
        u = sech_field()
        assert sobolev_seminorm(u, 0.0) == pytest.approx(np.sqrt(mass(u)), rel=1e-12)

    def test_constant_has_no_seminorm(self):
        u = PhysicalField(SECH_GRID, np.full(4096, 1.7 + 0.0j))
        assert sobolev_seminorm(u, 1.3) == pytest.approx(0.0, abs=1e-12)

    def test_h1_of_sech_against_quadrature(self):
        # independent oracle: integral of sech^2 tanh^2 by adaptive quadrature
        oracle, err = quad(lambda x: (np.tanh(x) / np.cosh(x)) ** 2, -30, 30)
        assert err < 1e-9
        assert sobolev_seminorm(sech_field(), 1.0) == pytest.approx(
            np.sqrt(oracle), rel=1e-10
        )
        assert oracle == pytest.approx(2.0 / 3.0, rel=1e-12)

    def test_rejects_negative_sigma(self):
        with pytest.raises(ValueError):
            sobolev_seminorm(sech_field(), -0.1)


class TestEnergy:
    def test_sech_cubic_focusing(self):
        params = ModelParams(s=1.0, p=1.0, gamma=-1.0)
        # 1/2 * 2/3 - 1/2 * 4/3 = -1/3
        assert energy(sech_field(), params) == pytest.approx(-1.0 / 3.0, abs=1e-8)

    def test_zero_field(self):
        params = ModelParams(s=0.5)
        u = PhysicalField(SECH_GRID, np.zeros(4096, complex))
        assert energy(u, params) == 0.0

    @given(seed=st.integers(0, 2**32 - 1), s=st.floats(0.1, 1.0))
    def test_defocusing_energy_nonnegative(self, seed, s):
        rng = np.random.default_rng(seed)
        g = Grid(64, 1.0)
        u = PhysicalField(g, rng.standard_normal(64) + 1j * rng.standard_normal(64))
        params = ModelParams(s=s, p=1.0, gamma=1.0)
        assert energy(u, params) >= 0.0

    def test_semiclassical_scaling_of_kinetic_term(self):
        u = sech_field()
        kinetic = 0.5 * sobolev_seminorm(u, 0.5) ** 2
        base = ModelParams(s=0.5, p=1.0, gamma=1.0, eps=1.0)
        potential = energy(u, base) - kinetic
        scaled = ModelParams(s=0.5, p=1.0, gamma=1.0, eps=0.1)
        expected = 0.1 ** (2 * 0.5) * kinetic + potential
        assert energy(u, scaled) == pytest.approx(expected, rel=1e-9)


class TestSupNorm:
    def test_sech_peak(self):
        assert sup_norm(sech_field()) == pytest.approx(1.0)

    @given(alpha=st.floats(0.01, 100.0))
    def test_positive_scaling(self, alpha):
        assert sup_norm(sech_field(amplitude=alpha)) == pytest.approx(
            alpha, rel=1e-12
        )


class TestRelativeEnergyDrift:
    def test_no_drift(self):
        assert relative_energy_drift(-1.0 / 3.0, -1.0 / 3.0) == 0.0

    def test_direct_arithmetic(self):
        assert relative_energy_drift(2.002, 2.0) == pytest.approx(1e-3, rel=1e-9)

    def test_zero_reference_switches_to_absolute(self):
        assert relative_energy_drift(3e-7, 0.0) == pytest.approx(3e-7)

    @given(e0=st.floats(-10, 10), et=st.floats(-10, 10))
    def test_nonnegative(self, e0, et):
        assert relative_energy_drift(et, e0) >= 0.0
