"""Uplink transmit-power law and the two closed-form ergodic capacities.

Noise-limited: for a user at distance r (km) transmitting with power
ell(r) = min(P r^{alpha*eps}, Pbar) over bandwidth B,

    C_NL(B, r) = (B / ln 2) * sum_{i=0}^{M-1} e^theta E_{i+1}(theta),
    theta = B N0 r^alpha / (gamma * ell(r)),

with Gamma(M, gamma) fading after maximum-ratio combining.  Each summand is
evaluated in exponentially scaled form so large theta never overflows.

Interference-limited: with co-channel interferers forming a PPP of density
lambda_b/delta outside the guard radius r,

    C_IL(B, r) = (B / ln 2) * int_0^inf (1 - (1 + s g_sig)^{-M}) L(s)/s ds,
    L(s) = exp(-2 pi (lambda_b/delta) * int_r^inf beta(x, s) x dx),
    beta(x, s) = 1 - int_0^inf 2 pi lambda_b u e^{-pi lambda_b u^2}
                             / (1 + s gamma ell(u) x^{-alpha}) du,

where g_sig = gamma * ell(r) * r^{-alpha}.  The inner (Rayleigh-weighted)
integral depends on (x, s) only through q = s * gamma * x^{-alpha}, so it is
a one-dimensional kernel; after the substitution v = pi lambda_b u^2 it is an
exponential-weight integral split at the peak-power kink.  The SIR contains
no bandwidth term, so C_IL is exactly linear in B and the s-integral is
computed once per (config, r, regime) and cached.

Unit conventions: distances km, powers watts, bandwidth Hz, N0 in W/Hz.
The fading scale gamma = (lambda_c / (4 pi))^2 uses the carrier wavelength
expressed in km so that gamma * ell(r) * r^{-alpha} is consistent with
r in km throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .specfun import (
    DEFAULT_QUADRATURE,
    DomainError,
    QuadratureSpec,
    exp_integral_en_scaled,
    integrate,
)

__all__ = [
    "SPEED_OF_LIGHT_KM_S",
    "PowerRegime",
    "NetworkConfig",
    "tx_power",
    "tx_power_regime",
    "capacity_nl",
    "laplace_interference",
    "capacity_il",
]

SPEED_OF_LIGHT_KM_S = 299792.458

_LN2 = math.log(2.0)

# Tolerances for the nested interference integrals: each level runs a
# decade tighter than the one above so inner noise does not defeat the
# outer adaptivity.
_INNER_SPEC = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-13, max_subdivisions=200)
_MIDDLE_SPEC = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-13, max_subdivisions=500)
_OUTER_SPEC = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-12, max_subdivisions=2000)


class PowerRegime(Enum):
    """Branch of the capped fractional power control law."""

    FRACTIONAL = "fractional"
    PEAK = "peak"


@dataclass(frozen=True)
class NetworkConfig:
    """Radio and geometry parameters of the multi-cell uplink.

    lambda_b: base stations per km^2; delta: frequency reuse factor;
    alpha: path-loss exponent (> 2); epsilon: power-control coefficient in
    [0, 1]; p_ref_w: reference transmit power at 1 km (W); p_peak_w: peak
    transmit power (W); n0_w_hz: noise PSD (W/Hz); f_c_hz: carrier (Hz);
    m_antennas: receive antennas.
    """

    lambda_b: float
    delta: float
    alpha: float
    epsilon: float
    p_ref_w: float
    p_peak_w: float
    n0_w_hz: float
    f_c_hz: float
    m_antennas: int

    def __post_init__(self) -> None:
        if not self.lambda_b > 0:
            raise ValueError(f"lambda_b must be positive, got {self.lambda_b}")
        if not self.delta >= 1:
            raise ValueError(f"delta must be >= 1, got {self.delta}")
        if not self.alpha > 2:
            raise ValueError(f"alpha must exceed 2, got {self.alpha}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if not (self.p_ref_w > 0 and self.p_peak_w > 0):
            raise ValueError("transmit powers must be positive")
        if not self.n0_w_hz > 0:
            raise ValueError(f"n0_w_hz must be positive, got {self.n0_w_hz}")
        if not self.f_c_hz > 0:
            raise ValueError(f"f_c_hz must be positive, got {self.f_c_hz}")
        if not self.m_antennas >= 1:
            raise ValueError(f"m_antennas must be >= 1, got {self.m_antennas}")

    @property
    def gamma_fading(self) -> float:
        """Fading scale (lambda_c / 4 pi)^2 with the wavelength in km."""
        wavelength_km = SPEED_OF_LIGHT_KM_S / self.f_c_hz
        return (wavelength_km / (4.0 * math.pi)) ** 2

    @property
    def r_threshold_km(self) -> float:
        """Distance where fractional power control hits the peak cap.

        (Pbar/P)^(1/(alpha*eps)); infinite for epsilon = 0 (constant power
        never ramps into the cap) or when the reference power already
        exceeds the cap at all distances.
        """
        if self.epsilon == 0.0:
            return math.inf
        return (self.p_peak_w / self.p_ref_w) ** (1.0 / (self.alpha * self.epsilon))


def tx_power(cfg: NetworkConfig, r: float) -> float:
    """Capped fractional power control: min(P r^(alpha*eps), Pbar)."""
    if not r > 0:
        raise DomainError(f"tx_power requires r > 0, got {r}")
    return min(cfg.p_ref_w * r ** (cfg.alpha * cfg.epsilon), cfg.p_peak_w)


def tx_power_regime(cfg: NetworkConfig, r: float, regime: PowerRegime) -> float:
    """One branch of the power law: fractional ramp or the flat peak cap."""
    if not r > 0:
        raise DomainError(f"tx_power_regime requires r > 0, got {r}")
    if regime is PowerRegime.FRACTIONAL:
        return cfg.p_ref_w * r ** (cfg.alpha * cfg.epsilon)
    return cfg.p_peak_w


def _signal_power(cfg: NetworkConfig, r: float, regime: PowerRegime | None) -> float:
    if regime is None:
        return tx_power(cfg, r)
    return tx_power_regime(cfg, r, regime)


def capacity_nl(
    cfg: NetworkConfig,
    b: float,
    r: float,
    regime: PowerRegime | None = None,
) -> float:
    """Noise-limited ergodic capacity in bits/s.

    regime selects the desired-signal power branch; None applies the full
    capped law.
    """
    if not b > 0:
        raise DomainError(f"capacity_nl requires b > 0, got {b}")
    if not r > 0:
        raise DomainError(f"capacity_nl requires r > 0, got {r}")
    ell = _signal_power(cfg, r, regime)
    theta = b * cfg.n0_w_hz * r**cfg.alpha / (cfg.gamma_fading * ell)
    total = 0.0
    for i in range(cfg.m_antennas):
        total += exp_integral_en_scaled(i + 1, theta)
    return b / _LN2 * total


# ---------------------------------------------------------------------------
# Interference-limited capacity
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _interference_kernel_cache(cfg: NetworkConfig):
    """Per-config closure evaluating the Rayleigh-averaged interference kernel

        G(q) = 1 - int_0^inf e^{-v} / (1 + q * ell(sqrt(v/(pi lambda_b)))) dv
             = int_0^inf e^{-v} * q*ell / (1 + q*ell) dv,

    i.e. beta(x, s) = G(s * gamma * x^{-alpha}).  The substitution
    v = pi lambda_b u^2 absorbs the Rayleigh weight; the complement form on
    the second line avoids the 1 - (1 - tiny) cancellation that dominates
    G for small q.  The integrand has a kink where the interferer power law
    saturates and the integral is split there.
    """
    pi_lb = math.pi * cfg.lambda_b
    half_ae = 0.5 * cfg.alpha * cfg.epsilon
    p_ref, p_peak = cfg.p_ref_w, cfg.p_peak_w
    r_th = cfg.r_threshold_km
    v_kink = pi_lb * r_th * r_th if math.isfinite(r_th) else math.inf

    def kernel(q: float) -> float:
        if q <= 0.0:
            return 0.0

        def integrand(v: float) -> float:
            qell = q * min(p_ref * (v / pi_lb) ** half_ae, p_peak)
            return math.exp(-v) * qell / (1.0 + qell)

        if 0.0 < v_kink < 40.0:
            val = integrate(integrand, 0.0, v_kink, _INNER_SPEC) \
                + integrate(integrand, v_kink, math.inf, _INNER_SPEC)
        else:
            val = integrate(integrand, 0.0, math.inf, _INNER_SPEC)
        return min(1.0, max(0.0, val))

    return kernel


def _laplace_exponent(cfg: NetworkConfig, s: float, r_guard: float) -> float:
    """2 pi (lambda_b/delta) * int_{r_guard}^inf beta(x, s) x dx."""
    if s <= 0.0:
        return 0.0
    kernel = _interference_kernel_cache(cfg)
    sg = s * cfg.gamma_fading
    alpha = cfg.alpha

    def integrand(x: float) -> float:
        return kernel(sg * x**-alpha) * x

    middle = integrate(integrand, r_guard, math.inf, _MIDDLE_SPEC)
    return 2.0 * math.pi * cfg.lambda_b / cfg.delta * middle


def laplace_interference(cfg: NetworkConfig, s: float, r_guard: float) -> float:
    """Laplace transform of the co-channel interference at argument s.

    Equals 1 at s = 0 and decreases monotonically; interferer powers always
    follow the full capped law regardless of any desired-signal regime.
    """
    if s < 0.0:
        raise DomainError(f"laplace_interference requires s >= 0, got {s}")
    if not r_guard > 0.0:
        raise DomainError(f"laplace_interference requires r_guard > 0, got {r_guard}")
    if s == 0.0:
        return 1.0
    return math.exp(-_laplace_exponent(cfg, s, r_guard))


@lru_cache(maxsize=1024)
def _il_spectral_efficiency(
    cfg: NetworkConfig, r: float, regime: PowerRegime | None
) -> float:
    """Interference-limited spectral efficiency (bits/s/Hz) at distance r.

    The SIR carries no bandwidth dependence, so C_IL(B, r) = B * SE(r);
    this s-integral is the only expensive part and is cached per
    (config, r, regime).  The integral splits at the SIR scale
    s* = 1/(gamma * ell(r) * r^{-alpha}) where the signal term transitions.
    """
    m = cfg.m_antennas
    ell = _signal_power(cfg, r, regime)
    g_sig = cfg.gamma_fading * ell * r**-cfg.alpha
    s_star = 1.0 / g_sig

    def integrand(s: float) -> float:
        if s == 0.0:
            return m * g_sig  # limit of (1 - (1+s g)^-M)/s as s -> 0
        signal = -math.expm1(-m * math.log1p(s * g_sig))
        exponent = _laplace_exponent(cfg, s, r)
        if exponent > 745.0:
            return 0.0
        return signal * math.exp(-exponent) / s

    lower = integrate(integrand, 0.0, s_star, _OUTER_SPEC)
    upper = integrate(integrand, s_star, math.inf, _OUTER_SPEC)
    return (lower + upper) / _LN2


def capacity_il(
    cfg: NetworkConfig,
    b: float,
    r: float,
    regime: PowerRegime | None = None,
) -> float:
    """Interference-limited ergodic capacity in bits/s.

    The guard radius of the interferer process equals the link distance r
    (the serving station is the nearest, so no interferer can be closer).
    """
    if not b > 0:
        raise DomainError(f"capacity_il requires b > 0, got {b}")
    if not r > 0:
        raise DomainError(f"capacity_il requires r > 0, got {r}")
    return b * _il_spectral_efficiency(cfg, r, regime)
