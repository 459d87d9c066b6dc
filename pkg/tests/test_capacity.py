"""Capacity tests: power-law mechanics, closed forms against direct
quadrature and against each other, concavity and monotonicity properties,
and the interference Laplace transform."""

import dataclasses
import math

import pytest
import scipy.integrate

from edgedim.capacity import (
    NetworkConfig,
    PowerRegime,
    capacity_il,
    capacity_nl,
    laplace_interference,
    tx_power,
    tx_power_regime,
)
from edgedim.specfun import DomainError


def with_simple_powers(cfg: NetworkConfig) -> NetworkConfig:
    """Round the baseline powers onto P=10 mW, Pbar=200 mW for exact
    threshold arithmetic."""
    return dataclasses.replace(cfg, p_ref_w=0.01, p_peak_w=0.2)


class TestTxPower:
    def test_reference_power_at_unit_distance(self, baseline_network):
        cfg = with_simple_powers(baseline_network)
        assert tx_power(cfg, 1.0) == pytest.approx(0.01, rel=1e-15)

    def test_peak_reached_exactly_at_threshold(self, baseline_network):
        # alpha*eps = 2, so r_th = sqrt(Pbar/P) = sqrt(20).
        cfg = with_simple_powers(baseline_network)
        r_th = (0.2 / 0.01) ** (1.0 / 2.0)
        assert cfg.r_threshold_km == pytest.approx(math.sqrt(20.0), rel=1e-15)
        assert tx_power(cfg, r_th) == pytest.approx(0.2, rel=1e-12)

    def test_constant_power_at_zero_epsilon(self, baseline_network):
        cfg = dataclasses.replace(with_simple_powers(baseline_network), epsilon=0.0)
        for r in (0.01, 1.0, 50.0):
            assert tx_power(cfg, r) == 0.01
        assert cfg.r_threshold_km == math.inf

    def test_continuity_at_threshold(self, baseline_network):
        cfg = with_simple_powers(baseline_network)
        r_th = cfg.r_threshold_km
        below = tx_power(cfg, r_th * (1 - 1e-12))
        above = tx_power(cfg, r_th * (1 + 1e-12))
        assert abs(below - above) < 1e-12

    def test_nondecreasing(self, baseline_network):
        cfg = with_simple_powers(baseline_network)
        rs = [0.1, 0.5, 1.0, 3.0, 4.4, 5.0, 10.0]
        ps = [tx_power(cfg, r) for r in rs]
        assert all(a <= b for a, b in zip(ps, ps[1:]))

    def test_domain(self, baseline_network):
        with pytest.raises(DomainError):
            tx_power(baseline_network, 0.0)


class TestTxPowerRegime:
    def test_regimes_agree_at_threshold(self, baseline_network):
        cfg = with_simple_powers(baseline_network)
        r_th = cfg.r_threshold_km
        assert tx_power_regime(cfg, r_th, PowerRegime.FRACTIONAL) == pytest.approx(
            tx_power_regime(cfg, r_th, PowerRegime.PEAK), rel=1e-12)

    def test_fractional_below_peak_inside_threshold(self, baseline_network):
        cfg = with_simple_powers(baseline_network)
        r = 0.5 * cfg.r_threshold_km
        assert tx_power_regime(cfg, r, PowerRegime.FRACTIONAL) < cfg.p_peak_w

    @pytest.mark.parametrize("r", [0.2, 1.0, 4.4721, 8.0])
    def test_min_over_regimes_is_capped_law(self, baseline_network, r):
        cfg = with_simple_powers(baseline_network)
        assert min(tx_power_regime(cfg, r, PowerRegime.FRACTIONAL),
                   tx_power_regime(cfg, r, PowerRegime.PEAK)) == pytest.approx(
            tx_power(cfg, r), rel=1e-15)


class TestCapacityNl:
    def test_single_antenna_vs_direct_quadrature(self, baseline_network):
        cfg = dataclasses.replace(baseline_network, m_antennas=1)
        b, r = 1e6, 1.0
        theta = b * cfg.n0_w_hz * r**cfg.alpha / (cfg.gamma_fading * tx_power(cfg, r))
        e1 = scipy.integrate.quad(lambda t: math.exp(-theta * t) / t, 1.0,
                                  math.inf)[0]
        expected = b / math.log(2.0) * math.exp(theta) * e1
        assert capacity_nl(cfg, b, r) == pytest.approx(expected, rel=1e-9)

    def test_antenna_monotonicity(self, baseline_network):
        caps = [capacity_nl(dataclasses.replace(baseline_network, m_antennas=m),
                            1e6, 1.0) for m in (1, 4, 16)]
        assert caps[0] < caps[1] < caps[2]

    def test_increasing_in_bandwidth(self, baseline_network):
        caps = [capacity_nl(baseline_network, b, 1.0)
                for b in (1e5, 1e6, 1e7, 1e8)]
        assert all(a < b for a, b in zip(caps, caps[1:]))

    def test_midpoint_concavity_in_bandwidth(self, baseline_network):
        bs = [10 ** (5 + 0.25 * k) for k in range(13)]
        for b1, b2 in zip(bs, bs[2:]):
            mid = capacity_nl(baseline_network, 0.5 * (b1 + b2), 1.0)
            avg = 0.5 * (capacity_nl(baseline_network, b1, 1.0)
                         + capacity_nl(baseline_network, b2, 1.0))
            assert mid >= avg - 1e-9 * avg

    def test_decreasing_in_distance(self, baseline_network):
        # Nonincreasing below the power threshold (eps < 1), strictly
        # decreasing beyond it.
        cfg = with_simple_powers(baseline_network)
        rs = [0.2, 0.5, 1.0, 2.0, 4.0, 4.47, 5.0, 8.0]
        caps = [capacity_nl(cfg, 1e6, r) for r in rs]
        assert all(a >= b - 1e-9 * a for a, b in zip(caps, caps[1:]))
        assert caps[-1] < caps[-2]

    def test_regime_selection(self, baseline_network):
        cfg = with_simple_powers(baseline_network)
        r = 2.0  # below threshold: fractional is the active branch
        full = capacity_nl(cfg, 1e6, r)
        frac = capacity_nl(cfg, 1e6, r, PowerRegime.FRACTIONAL)
        peak = capacity_nl(cfg, 1e6, r, PowerRegime.PEAK)
        assert full == pytest.approx(frac, rel=1e-14)
        assert peak > frac  # peak branch transmits louder inside threshold

    def test_no_overflow_at_extreme_theta(self, baseline_network):
        # Far distance and wide band push theta ~ 1e5; the scaled integral
        # form must stay finite.
        cap = capacity_nl(baseline_network, 1e9, 30.0)
        assert math.isfinite(cap) and cap > 0

    def test_domains(self, baseline_network):
        with pytest.raises(DomainError):
            capacity_nl(baseline_network, 0.0, 1.0)
        with pytest.raises(DomainError):
            capacity_nl(baseline_network, 1e6, -1.0)


class TestLaplaceInterference:
    def test_unity_at_zero(self, baseline_network):
        assert laplace_interference(baseline_network, 0.0, 1.0) == 1.0

    def test_monotone_nonincreasing_on_log_grid(self, baseline_network):
        r_guard = 1.0
        svals = [10.0 ** k for k in range(9, 15)]
        lvals = [laplace_interference(baseline_network, s, r_guard)
                 for s in svals]
        assert all(a >= b - 1e-12 for a, b in zip(lvals, lvals[1:]))
        assert all(0.0 < v <= 1.0 for v in lvals)

    def test_larger_guard_means_less_interference(self, baseline_network):
        s = 1e12
        near = laplace_interference(baseline_network, s, 0.5)
        far = laplace_interference(baseline_network, s, 2.0)
        assert far > near

    def test_domain(self, baseline_network):
        with pytest.raises(DomainError):
            laplace_interference(baseline_network, 1.0, 0.0)
        with pytest.raises(DomainError):
            laplace_interference(baseline_network, -1.0, 1.0)


class TestCapacityIl:
    def test_linear_in_bandwidth(self, baseline_network):
        c1 = capacity_il(baseline_network, 1e6, 1.0)
        c2 = capacity_il(baseline_network, 3.7e6, 1.0)
        assert c2 == pytest.approx(3.7 * c1, rel=1e-12)

    def test_never_exceeds_noise_limited(self, baseline_network):
        for r in (0.5, 1.0, 2.0):
            assert capacity_nl(baseline_network, 1e6, r) >= capacity_il(
                baseline_network, 1e6, r)

    def test_equal_reuse_ratio_zero_epsilon_equivalence(self, baseline_network):
        # Same lambda_b/delta and eps=0 produce identical capacity at the
        # same physical distance (the Rayleigh displacement integrates out).
        cfg_a = dataclasses.replace(baseline_network, lambda_b=1.0, delta=4.0,
                                    epsilon=0.0)
        cfg_b = dataclasses.replace(baseline_network, lambda_b=2.0, delta=8.0,
                                    epsilon=0.0)
        for r in (0.5, 1.0):
            va = capacity_il(cfg_a, 1e6, r)
            vb = capacity_il(cfg_b, 1e6, r)
            assert vb == pytest.approx(va, rel=1e-6)

    def test_denser_cochannel_reuse_lowers_capacity(self, baseline_network):
        base = capacity_il(baseline_network, 1e6, 1.0)
        denser = capacity_il(
            dataclasses.replace(baseline_network, lambda_b=4.0), 1e6, 1.0)
        assert denser < base

    def test_antenna_gain(self, baseline_network):
        m4 = capacity_il(dataclasses.replace(baseline_network, m_antennas=4),
                         1e6, 1.0)
        m16 = capacity_il(baseline_network, 1e6, 1.0)
        assert m16 > m4

    def test_domains(self, baseline_network):
        with pytest.raises(DomainError):
            capacity_il(baseline_network, -1.0, 1.0)
        with pytest.raises(DomainError):
            capacity_il(baseline_network, 1e6, 0.0)


class TestNetworkConfigValidation:
    def test_invariants(self):
        with pytest.raises(ValueError):
            NetworkConfig(lambda_b=1.0, delta=4.0, alpha=2.0, epsilon=0.5,
                          p_ref_w=0.01, p_peak_w=0.2, n0_w_hz=4e-21,
                          f_c_hz=2.4e9, m_antennas=16)
        with pytest.raises(ValueError):
            NetworkConfig(lambda_b=1.0, delta=4.0, alpha=4.0, epsilon=1.5,
                          p_ref_w=0.01, p_peak_w=0.2, n0_w_hz=4e-21,
                          f_c_hz=2.4e9, m_antennas=16)
        with pytest.raises(ValueError):
            NetworkConfig(lambda_b=1.0, delta=4.0, alpha=4.0, epsilon=0.5,
                          p_ref_w=0.01, p_peak_w=0.2, n0_w_hz=4e-21,
                          f_c_hz=2.4e9, m_antennas=0)

    def test_fading_scale_from_carrier(self, baseline_network):
        # (lambda_c/4pi)^2 with the wavelength in km at 2.4 GHz.
        wavelength_km = 299792.458 / 2.4e9
        assert baseline_network.gamma_fading == pytest.approx(
            (wavelength_km / (4 * math.pi)) ** 2, rel=1e-12)
