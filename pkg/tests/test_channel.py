import numpy as np
import pytest
from hypothesis import given, strategies as st

from psea.channel import (
    SnrConstants,
    Topology,
    dbm_to_watts,
    harvested_energy,
    instantaneous_snrs,
    outage_threshold,
    pathloss_gain,
    sample_channel_power,
    snr_constants,
    watts_to_dbm,
)
from psea.errors import DomainError

from conftest import ref_params

gain = st.floats(0, 10, allow_nan=False)


def test_unit_conversion():
    assert dbm_to_watts(-80) == pytest.approx(1e-11, rel=1e-12)
    assert dbm_to_watts(30) == pytest.approx(1.0)
    assert watts_to_dbm(dbm_to_watts(-37.5)) == pytest.approx(-37.5)
    np.testing.assert_allclose(dbm_to_watts(np.array([0.0, 10.0])), [1e-3, 1e-2])


class TestPathloss:
    def test_values(self):
        assert pathloss_gain(8, 2) == pytest.approx(1 / 65)
        assert pathloss_gain(12, 2) == pytest.approx(1 / 145)
        assert pathloss_gain(0, 2) == 1.0

    def test_topology(self):
        topo = Topology(20, 8, 2)
        assert topo.d_br == 12
        assert topo.gains() == pytest.approx((1 / 65, 1 / 145))

    @pytest.mark.parametrize("d_ab, d_ar, alpha", [(20, 20, 2), (20, 0, 2), (20, 8, 1.5), (20, 8, 6)])
    def test_invalid_topology(self, d_ab, d_ar, alpha):
        with pytest.raises(DomainError):
            Topology(d_ab, d_ar, alpha)


class TestSampling:
    def test_moments(self):
        x = sample_channel_power(2, 0.5, np.random.default_rng(11), size=1_000_000)
        assert abs(x.mean() - 0.5) < 0.002
        assert abs(x.var() - 0.125) < 0.002

    def test_deterministic(self):
        a = sample_channel_power(3, 2.0, np.random.default_rng(5), size=1000)
        b = sample_channel_power(3, 2.0, np.random.default_rng(5), size=1000)
        np.testing.assert_array_equal(a, b)

    def test_scalar_draw(self):
        assert np.ndim(sample_channel_power(2, 1.0, np.random.default_rng(0))) == 0

    @pytest.mark.parametrize("m, omega", [(0, 1.0), (1.5, 1.0), (2, 0.0)])
    def test_invalid(self, m, omega):
        with pytest.raises(DomainError):
            sample_channel_power(m, omega, np.random.default_rng(0))


class TestHarvest:
    def test_examples(self):
        p = ref_params(p=1.0)
        assert harvested_energy(0, 0, p, "I") == 0.0
        assert harvested_energy(1, 1, p, "I") == pytest.approx(0.5)
        assert harvested_energy(0.3, 2.0, p, "II") == pytest.approx(0.9 * harvested_energy(0.3, 2.0, p, "I"))

    @given(gain, gain, gain, gain)
    def test_superposition(self, h1, h2, g1, g2):
        p = ref_params(p=3.0)
        lhs = harvested_energy(h1 + h2, g1 + g2, p, "I")
        rhs = harvested_energy(h1, g1, p, "I") + harvested_energy(h2, g2, p, "I")
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-15)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            harvested_energy(1, 1, ref_params(), "III")


class TestSnr:
    def test_constants(self):
        c = snr_constants(ref_params(p=1.0), 0.08)
        assert c.gbar_a == pytest.approx(0.1 / 5.5e-12)
        assert c.gbar_r == pytest.approx(8e9)

    def test_lambda_limit(self):
        p = ref_params(p=1.0)
        assert snr_constants(p, 1.0, lam=1e-12).gbar_a == pytest.approx(1.0 / 1e-11, rel=1e-9)

    @given(st.floats(0.01, 0.98), st.floats(0.001, 0.01))
    def test_lambda_monotone(self, lam, dl):
        p = ref_params(p=1.0)
        assert snr_constants(p, 1.0, lam=lam).gbar_a > snr_constants(p, 1.0, lam=lam + dl).gbar_a

    def test_invalid_power(self):
        with pytest.raises(DomainError):
            snr_constants(ref_params(), 0.0)

    def test_instantaneous_examples(self):
        c = SnrConstants(2.0, 2.0, 5.0)
        assert instantaneous_snrs(0.0, 1.3, c) == (0.0, 0.0)
        ga, gb = instantaneous_snrs(0.7, 0.7, c)
        assert ga == pytest.approx(gb)

    @given(gain, gain)
    def test_bounded_by_product(self, h, g):
        c = SnrConstants(3.0, 1.5, 7.0)
        ga, gb = instantaneous_snrs(h, g, c)
        bound_a, bound_b = c.gbar_r * c.gbar_b * h * g, c.gbar_r * c.gbar_a * h * g
        assert 0 <= ga <= bound_a * (1 + 1e-12)
        assert 0 <= gb <= bound_b * (1 + 1e-12)
        if h * g > 1e-6:
            assert ga < bound_a

    def test_monotone_along_ray(self):
        c = SnrConstants(3.0, 1.5, 7.0)
        t = np.linspace(0, 20, 500)
        ga, gb = instantaneous_snrs(t, t, c)
        assert np.all(np.diff(ga) >= 0) and np.all(np.diff(gb) >= 0)

    @pytest.mark.parametrize("sigma, v", [(1, 3), (0.5, 1), (1.5, 7)])
    def test_outage_threshold(self, sigma, v):
        assert outage_threshold(sigma) == pytest.approx(v)


class TestSystemParams:
    def test_with(self):
        p = ref_params()
        q = p.with_(lam=0.5)
        assert q.lam == 0.5 and p.lam == 0.9 and q.p_a == p.p_a

    @pytest.mark.parametrize("change", [{"lam": 1.0}, {"lam": 0.0}, {"eta": 1.2}, {"m_a": 0}, {"n0": -1.0}, {"m_b": 2.5}])
    def test_validation(self, change):
        with pytest.raises(DomainError):
            ref_params().with_(**change)
