import math

import numpy as np
import pytest

from bosonic_coherence.errors import DomainError
from bosonic_coherence.gaussian import displaced_thermal, tensor, thermal_state, vacuum
from bosonic_coherence.thermo import (
    EnergyConvention,
    ThermalReservoir,
    beta_from_nbar,
    channel_output,
    coherence_entropy_cost,
    entropy_production,
    internal_energy,
    nbar_from_beta,
    relative_entropy_to_gibbs,
    thermalization_time,
    thermalize,
)

from conftest import random_state

FULL, COV = EnergyConvention.FULL, EnergyConvention.COVARIANCE_ONLY
SWEEP = dict(nbar=1, mbar=2)
RES = ThermalReservoir(5, 0.1)


def s_th(n):
    return (n + 1) * math.log(n + 1) - n * math.log(n) if n > 0 else 0.0


# complete thermalization of thermal(2) into thermal(5): dU = 3
SIGMA_ATT_HALF_PI = -3 * math.log(1.2) + s_th(5) - s_th(2)
# displaced_thermal(1, 1, 1) with the full energy: dU = 5.5 - 2
SIGMA_ATT_ZERO = -3.5 * math.log(1.2) + s_th(5) - s_th(1)


class TestTemperature:
    def test_beta(self):
        assert beta_from_nbar(5) == pytest.approx(math.log(1.2), abs=1e-15)
        assert beta_from_nbar(5) == pytest.approx(0.182322, abs=1e-6)
        assert RES.beta == beta_from_nbar(5)

    def test_roundtrip(self, rng):
        for n in rng.uniform(1e-3, 100, 20):
            assert nbar_from_beta(beta_from_nbar(n)) == pytest.approx(n, rel=1e-14)
            b = beta_from_nbar(n)
            assert 1 / (math.exp(b) - 1) == pytest.approx(n, rel=1e-12)

    def test_high_temperature_limit(self):
        betas = [beta_from_nbar(n) for n in (10, 100, 1000)]
        assert betas[0] > betas[1] > betas[2] > 0

    def test_domain(self):
        for bad in (0, -1):
            with pytest.raises(DomainError):
                beta_from_nbar(bad)
            with pytest.raises(DomainError):
                nbar_from_beta(bad)
        with pytest.raises(DomainError):
            ThermalReservoir(1, 0)


class TestEnergy:
    def test_vacuum(self):
        assert internal_energy(vacuum(), FULL) == 0.5
        assert internal_energy(vacuum(), COV) == 0.5

    def test_thermal(self):
        assert internal_energy(thermal_state([5])) == pytest.approx(5.5)

    def test_displaced(self):
        s = displaced_thermal(1, 1, 1)
        assert internal_energy(s, FULL) == pytest.approx(2)
        assert internal_energy(s, COV) == pytest.approx(1.5)
        assert internal_energy(s, "covariance") == pytest.approx(1.5)


class TestThermalize:
    def test_t0(self):
        s = displaced_thermal(2, 1, -1)
        out = thermalize(s, RES, 0)
        assert np.array_equal(out.sigma, s.sigma) and np.array_equal(out.d, s.d)

    def test_fixed_point(self):
        out = thermalize(displaced_thermal(0.3, 2, 2), RES, math.inf)
        assert np.allclose(out.sigma, 11 * np.eye(2)) and np.allclose(out.d, 0)

    def test_half_steps(self, rng):
        s, _ = random_state(rng, 1)
        a = thermalize(thermalize(s, RES, 3.5), RES, 3.5)
        b = thermalize(s, RES, 7)
        assert np.allclose(a.sigma, b.sigma, atol=1e-12) and np.allclose(a.d, b.d, atol=1e-12)

    def test_multimode(self):
        s = tensor([displaced_thermal(1, 1, 0), displaced_thermal(2, 0, 1)])
        out = thermalize(s, RES, math.inf)
        assert np.allclose(out.sigma, 11 * np.eye(4))


class TestEntropyProduction:
    def test_zero_time(self):
        rec = entropy_production(displaced_thermal(1, 1, 1), RES, 0)
        assert rec.sigma_prod == 0

    def test_equilibrium_input(self):
        for t in (0.5, 5, 50, math.inf):
            assert abs(entropy_production(thermal_state([5]), RES, t).sigma_prod) < 1e-12

    def test_full_attenuation_value(self):
        state = channel_output("att", math.pi / 2, **SWEEP)
        for conv in (FULL, COV):
            rec = entropy_production(state, RES, math.inf, conv)
            assert rec.sigma_prod == pytest.approx(SIGMA_ATT_HALF_PI, abs=1e-12)
            assert rec.sigma_prod == pytest.approx(0.246860, abs=1e-6)
            assert rec.sigma_prod == pytest.approx(-RES.beta * rec.delta_U + rec.delta_S, abs=1e-12)

    def test_nbar_zero_reservoir(self):
        with pytest.raises(DomainError):
            entropy_production(vacuum(), ThermalReservoir(0, 0.1), 1)

    @pytest.mark.parametrize("conv", [FULL, COV])
    def test_second_law(self, rng, conv):
        for _ in range(30):
            s, _ = random_state(rng, 1, nbar_max=8, d_max=3)
            res = ThermalReservoir(rng.uniform(0.05, 10), rng.uniform(0.01, 1))
            for t in (0.1, 1, 10, 100, math.inf):
                assert entropy_production(s, res, t, conv).sigma_prod >= -1e-10

    @pytest.mark.parametrize("family,ells", [("att", (0, math.pi / 2)), ("amp", (0, 0.5))])
    def test_monotone_in_time(self, family, ells):
        for ell in ells:
            s = channel_output(family, ell, **SWEEP)
            values = [entropy_production(s, RES, t, FULL).sigma_prod for t in np.linspace(0, 60, 200)]
            assert np.all(np.diff(values) >= -1e-12)


class TestRelativeEntropy:
    def test_gibbs(self):
        beta = 0.7
        s = thermal_state([nbar_from_beta(beta)])
        assert relative_entropy_to_gibbs(s, beta) == pytest.approx(0, abs=1e-12)

    @pytest.mark.parametrize("conv", [FULL, COV])
    def test_difference_identity(self, rng, conv):
        for _ in range(50):
            s, _ = random_state(rng, 1, nbar_max=6, d_max=3)
            res = ThermalReservoir(rng.uniform(0.1, 8), rng.uniform(0.01, 1))
            t = rng.uniform(0, 50)
            rec = entropy_production(s, res, t, conv)
            lhs = relative_entropy_to_gibbs(s, res.beta, conv) - relative_entropy_to_gibbs(
                thermalize(s, res, t), res.beta, conv
            )
            assert rec.sigma_prod == pytest.approx(lhs, abs=1e-12)

    @pytest.mark.parametrize("conv", [FULL, COV])
    def test_nonnegative(self, rng, conv):
        for _ in range(100):
            s, _ = random_state(rng, int(rng.integers(1, 3)), nbar_max=8, d_max=3)
            assert relative_entropy_to_gibbs(s, rng.uniform(0.01, 3), conv) >= -1e-12


class TestCoherenceCost:
    def test_att_reference(self):
        assert coherence_entropy_cost("att", math.pi / 2, RES, 5, **SWEEP) == 0

    def test_att_zero(self):
        cost = coherence_entropy_cost("att", 0, RES, math.inf, **SWEEP, convention=FULL)
        assert cost == pytest.approx(SIGMA_ATT_ZERO - SIGMA_ATT_HALF_PI, abs=1e-12)
        assert cost == pytest.approx(0.432087, abs=1e-6)

    def test_amp_reference(self):
        assert coherence_entropy_cost("amp", 10.0, RES, 5, **SWEEP) == 0

    def test_unknown_family(self):
        with pytest.raises(DomainError):
            coherence_entropy_cost("squeeze", 0, RES, 5, **SWEEP)


class TestThermalizationTime:
    def test_already_thermal(self):
        assert thermalization_time(thermal_state([5]), RES) == 0

    def test_bounded(self):
        for ell in (0, 0.7, math.pi / 2):
            assert thermalization_time(channel_output("att", ell, **SWEEP), RES, 1e-6) <= 400

    def test_envelope(self):
        # |d| = sqrt(2) decays as exp(-gamma t / 2) and outlasts the sigma deviation of 8
        s = displaced_thermal(1, 1, 1)
        expected = 2 * math.log(math.sqrt(2) / 1e-6) / 0.1
        assert thermalization_time(s, RES, 1e-6) == pytest.approx(expected, abs=2e-3)

    def test_gamma_scaling(self):
        s = channel_output("amp", 0.5, **SWEEP)
        t1 = thermalization_time(s, ThermalReservoir(5, 0.1))
        t2 = thermalization_time(s, ThermalReservoir(5, 0.2))
        assert t2 == pytest.approx(t1 / 2, abs=2e-3)
