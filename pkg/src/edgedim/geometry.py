"""Poisson-Voronoi geometric distributions and the derived coverage constants.

Distances and areas follow the normalized-variable convention: with base
station density lambda_b (per km^2), the nearest-link distance normalizes as
rbar = sqrt(lambda_b) * r, the maximum cell-edge distance as
rbar_max = sqrt(lambda_b) * r_max, and the cell area as Abar = lambda_b * A.
The normalized laws are density-free; public quantile helpers return
physical units (km, km^2) by undoing the normalization.

The nearest-distance law 1 - exp(-pi x^2) is exact for a homogeneous PPP.
The maximum-distance and cell-area laws are published generalized-gamma fits
carried as data on GeometryModel so a refit never touches code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .specfun import DomainError, reg_lower_gamma, reg_lower_gamma_inv

__all__ = [
    "GeneralizedGamma",
    "GeometryModel",
    "MAX_DISTANCE_FIT",
    "CELL_AREA_FIT",
    "distance_cdf",
    "gen_gamma_cdf",
    "gen_gamma_quantile",
    "kappa3",
    "kappa4",
]


@dataclass(frozen=True)
class GeneralizedGamma:
    """Three-parameter family with CDF

        F(x) = (alpha * beta^(gamma/alpha) / Gamma(gamma/alpha))
               * int_0^x t^(gamma-1) exp(-beta t^alpha) dt,  x >= 0.

    Shape parameters are named shape_alpha/shape_gamma and the rate
    rate_beta to avoid collision with the path-loss exponent and the fading
    scale used elsewhere.  beta * X^alpha is Gamma(gamma/alpha) distributed,
    which is how the CDF and quantile are evaluated.
    """

    shape_alpha: float
    rate_beta: float
    shape_gamma: float

    def __post_init__(self) -> None:
        if not (self.shape_alpha > 0 and self.rate_beta > 0 and self.shape_gamma > 0):
            raise ValueError(f"GeneralizedGamma parameters must be positive: {self}")


# Published fits for the normalized maximum cell-edge distance and the
# normalized Voronoi cell area.
MAX_DISTANCE_FIT = GeneralizedGamma(1.719, 5.528, 9.482)
CELL_AREA_FIT = GeneralizedGamma(1.0, 3.5, 3.5)


@dataclass(frozen=True)
class GeometryModel:
    """Base-station density plus the geometric distribution fits."""

    lambda_b: float
    max_dist_fit: GeneralizedGamma = field(default=MAX_DISTANCE_FIT)
    area_fit: GeneralizedGamma = field(default=CELL_AREA_FIT)

    def __post_init__(self) -> None:
        if not self.lambda_b > 0:
            raise ValueError(f"lambda_b must be positive, got {self.lambda_b}")


def distance_cdf(x: float) -> float:
    """CDF of the normalized nearest-BS distance: 1 - exp(-pi x^2)."""
    if x < 0.0:
        raise DomainError(f"distance_cdf requires x >= 0, got {x}")
    return -math.expm1(-math.pi * x * x)


def gen_gamma_cdf(d: GeneralizedGamma, x: float) -> float:
    """Generalized-gamma CDF, evaluated as P(gamma/alpha, beta * x^alpha)."""
    if x < 0.0:
        raise DomainError(f"gen_gamma_cdf requires x >= 0, got {x}")
    return reg_lower_gamma(d.shape_gamma / d.shape_alpha, d.rate_beta * x**d.shape_alpha)


def gen_gamma_quantile(d: GeneralizedGamma, p: float) -> float:
    """Inverse of gen_gamma_cdf: (P^{-1}(gamma/alpha, p) / beta)^(1/alpha)."""
    y = reg_lower_gamma_inv(d.shape_gamma / d.shape_alpha, p)
    return (y / d.rate_beta) ** (1.0 / d.shape_alpha)


def kappa3(model: GeometryModel, eta_r: float) -> float:
    """Cell-edge distance (km) covering a fraction eta_r of worst-case users.

    The eta_r quantile of the normalized maximum distance, scaled back by
    1/sqrt(lambda_b); halves exactly when the density quadruples.
    """
    if not 0.0 < eta_r < 1.0:
        raise DomainError(f"kappa3 requires 0 < eta_r < 1, got {eta_r}")
    return gen_gamma_quantile(model.max_dist_fit, eta_r) / math.sqrt(model.lambda_b)


def kappa4(model: GeometryModel, eta_a: float) -> float:
    """Cell area (km^2) covering a fraction eta_a of servers; scales as 1/lambda_b."""
    if not 0.0 < eta_a < 1.0:
        raise DomainError(f"kappa4 requires 0 < eta_a < 1, got {eta_a}")
    return gen_gamma_quantile(model.area_fit, eta_a) / model.lambda_b
