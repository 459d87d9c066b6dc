"""Geometry law tests: analytic inversions, quadrature oracles for the
generalized-gamma CDF, quantile round-trips, density scaling of the
coverage constants."""

import math

import pytest
import scipy.integrate

from edgedim.geometry import (
    CELL_AREA_FIT,
    MAX_DISTANCE_FIT,
    GeneralizedGamma,
    GeometryModel,
    distance_cdf,
    gen_gamma_cdf,
    gen_gamma_quantile,
    kappa3,
    kappa4,
)
from edgedim.specfun import DomainError, reg_lower_gamma, reg_lower_gamma_inv


class TestDistanceCdf:
    def test_zero(self):
        assert distance_cdf(0.0) == 0.0

    def test_median_from_analytic_inversion(self):
        # Solving 1 - e^{-pi x^2} = 1/2 gives x = sqrt(ln 2 / pi).
        x_median = math.sqrt(math.log(2.0) / math.pi)
        assert x_median == pytest.approx(0.4697, abs=1e-4)
        assert distance_cdf(x_median) == pytest.approx(0.5, rel=1e-14)

    def test_tail_saturates(self):
        assert distance_cdf(10.0) == pytest.approx(1.0, abs=1e-15)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            distance_cdf(-0.1)


class TestGenGammaCdf:
    def test_zero(self):
        assert gen_gamma_cdf(CELL_AREA_FIT, 0.0) == 0.0

    @pytest.mark.parametrize("x", [0.1, 1.0, 3.0])
    def test_alpha_one_reduces_to_plain_gamma(self, x):
        assert gen_gamma_cdf(CELL_AREA_FIT, x) == pytest.approx(
            reg_lower_gamma(3.5, 3.5 * x), abs=1e-12)

    def test_max_distance_fit_vs_quadrature_oracle(self):
        # Direct adaptive quadrature of the defining density.
        a, b, g = 1.719, 5.528, 9.482
        norm = a * b ** (g / a) / math.gamma(g / a)
        oracle = norm * scipy.integrate.quad(
            lambda t: t ** (g - 1) * math.exp(-b * t**a), 0.0, 1.0)[0]
        assert gen_gamma_cdf(MAX_DISTANCE_FIT, 1.0) == pytest.approx(oracle, abs=1e-9)

    def test_monotone_to_one(self):
        vals = [gen_gamma_cdf(MAX_DISTANCE_FIT, x) for x in (0.2, 0.6, 1.0, 1.5, 3.0)]
        assert all(u < v for u, v in zip(vals, vals[1:]))
        assert gen_gamma_cdf(MAX_DISTANCE_FIT, 10.0) == pytest.approx(1.0, abs=1e-12)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            GeneralizedGamma(0.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            GeneralizedGamma(1.0, -1.0, 1.0)


class TestGenGammaQuantile:
    def test_zero(self):
        assert gen_gamma_quantile(MAX_DISTANCE_FIT, 0.0) == 0.0

    def test_area_p999_vs_bisection_oracle(self):
        p = 0.999
        lo, hi = 0.0, 50.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if reg_lower_gamma(3.5, 3.5 * mid) < p:
                lo = mid
            else:
                hi = mid
        assert gen_gamma_quantile(CELL_AREA_FIT, p) == pytest.approx(hi, rel=1e-9)

    @pytest.mark.parametrize("fit", [MAX_DISTANCE_FIT, CELL_AREA_FIT])
    @pytest.mark.parametrize("p", [0.1, 0.5, 0.8, 0.999])
    def test_round_trip(self, fit, p):
        x = gen_gamma_quantile(fit, p)
        assert gen_gamma_cdf(fit, x) == pytest.approx(p, abs=1e-9)

    def test_p_out_of_range(self):
        with pytest.raises(DomainError):
            gen_gamma_quantile(CELL_AREA_FIT, 1.0)


class TestCoverageConstants:
    def test_kappa3_density_scaling(self):
        base = kappa3(GeometryModel(lambda_b=1.0), 0.999)
        doubled = kappa3(GeometryModel(lambda_b=2.0), 0.999)
        assert doubled == pytest.approx(base / math.sqrt(2.0), rel=1e-14)
        assert kappa3(GeometryModel(lambda_b=4.0), 0.999) == pytest.approx(
            base / 2.0, rel=1e-14)

    def test_kappa3_unit_density_equals_quantile(self):
        assert kappa3(GeometryModel(lambda_b=1.0), 0.999) == pytest.approx(
            gen_gamma_quantile(MAX_DISTANCE_FIT, 0.999), rel=1e-14)

    def test_kappa4_density_scaling(self):
        base = kappa4(GeometryModel(lambda_b=1.0), 0.999)
        assert kappa4(GeometryModel(lambda_b=2.0), 0.999) == pytest.approx(
            base / 2.0, rel=1e-14)

    def test_kappa4_unit_density_from_gamma_inverse(self):
        expected = reg_lower_gamma_inv(3.5, 0.999) / 3.5
        assert kappa4(GeometryModel(lambda_b=1.0), 0.999) == pytest.approx(
            expected, rel=1e-12)

    def test_kappa4_vanishes_at_zero_coverage(self):
        assert kappa4(GeometryModel(lambda_b=1.0), 1e-12) == pytest.approx(
            0.0, abs=1e-3)

    @pytest.mark.parametrize("fn", [kappa3, kappa4])
    def test_monotone_in_coverage(self, fn):
        model = GeometryModel(lambda_b=1.5)
        vals = [fn(model, eta) for eta in (0.5, 0.9, 0.99, 0.999)]
        assert all(u < v for u, v in zip(vals, vals[1:]))

    def test_eta_domain(self):
        with pytest.raises(DomainError):
            kappa3(GeometryModel(lambda_b=1.0), 1.0)
        with pytest.raises(DomainError):
            kappa4(GeometryModel(lambda_b=1.0), 0.0)

    def test_density_validation(self):
        with pytest.raises(ValueError):
            GeometryModel(lambda_b=0.0)
