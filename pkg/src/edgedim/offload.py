"""End-to-end offloading delay components.

Covers the per-frame uplink transmission time, the deterministic inference
service time and detection-accuracy model with its inversion, and the
waiting-time tail of the M/D/1 queue formed by Poisson frame arrivals and
deterministic service.

The M/D/1 waiting-time CCDF is the Erlang equilibrium series

    P(T_w > T) = 1 - (1 - rho) * sum_{v=0}^{floor(t)} [rho(v-t)]^v / v! * e^{-rho(v-t)},

with t = T / T_s.  The terms alternate in sign and grow roughly like
e^{1.2 t} before cancelling down to a probability, so a double-precision
sum loses all digits beyond t ~ 15.  Terms are evaluated as
sign * exp(v*ln|rho(t-v)| - lnGamma(v+1) + rho(t-v)) with compensated
accumulation on the float path, and the evaluation switches to mpmath with
t-proportional working precision once cancellation would exceed the error
budget.  Deep tails that underflow return 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .specfun import DomainError

__all__ = [
    "TrafficModel",
    "InferenceModel",
    "uplink_time",
    "service_time",
    "inference_work",
    "accuracy",
    "min_resolution",
    "mdone_wait_ccdf",
    "mdone_wait_quantile",
]

# Largest T/T_s handled in double precision; beyond it the alternating sum
# cancels more than ~1e6x and the evaluation moves to mpmath.
_FLOAT_T_MAX = 12.0


@dataclass(frozen=True)
class TrafficModel:
    """Video frame generation and encoding parameters.

    lambda_rate is the spatio-temporal frame intensity (frames/s/km^2),
    theta_bits the encoded bits per pixel, xi_compress the compression
    factor, and s_resolution the nominal frame width/height in pixels
    (frames are s x s).
    """

    lambda_rate: float
    theta_bits: float
    xi_compress: float
    s_resolution: float

    def __post_init__(self) -> None:
        if not self.lambda_rate > 0:
            raise ValueError(f"lambda_rate must be positive, got {self.lambda_rate}")
        if not self.theta_bits > 0:
            raise ValueError(f"theta_bits must be positive, got {self.theta_bits}")
        if not self.xi_compress >= 1:
            raise ValueError(f"xi_compress must be >= 1, got {self.xi_compress}")
        if not self.s_resolution > 0:
            raise ValueError(f"s_resolution must be positive, got {self.s_resolution}")

    def payload_bits(self, s: float | None = None) -> float:
        """Compressed payload of one s x s frame: theta * s^2 / xi."""
        s_px = self.s_resolution if s is None else s
        return self.theta_bits * s_px * s_px / self.xi_compress


@dataclass(frozen=True)
class InferenceModel:
    """Fitted detector profile: service time (c1 s^3 + c2)/H and accuracy
    c3 - c4 exp(-c5 s).

    c1 and c2 are TFLOP counts (per-pixel-cubed and fixed); h_capacity is
    the server compute rate in TFLOPS.
    """

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    h_capacity: float = 1.0

    def __post_init__(self) -> None:
        if not (self.c1 > 0 and self.c2 > 0 and self.c4 > 0 and self.c5 > 0):
            raise ValueError(f"c1, c2, c4, c5 must be positive: {self}")
        if not 0 < self.c3 <= 1:
            raise ValueError(f"c3 must lie in (0, 1], got {self.c3}")
        if not self.h_capacity > 0:
            raise ValueError(f"h_capacity must be positive, got {self.h_capacity}")


def uplink_time(traffic: TrafficModel, rate: float) -> float:
    """Time to push one compressed frame through an uplink of the given rate."""
    if not rate > 0:
        raise DomainError(f"uplink rate must be positive, got {rate}")
    return traffic.payload_bits() / rate


def inference_work(inf: InferenceModel, s: float) -> float:
    """Compute demand of one s x s frame in TFLOP: c1 s^3 + c2."""
    return inf.c1 * s**3 + inf.c2


def service_time(inf: InferenceModel, s: float) -> float:
    """Deterministic inference time of one frame: (c1 s^3 + c2) / H."""
    if s < 0:
        raise DomainError(f"service_time requires s >= 0, got {s}")
    return inference_work(inf, s) / inf.h_capacity


def accuracy(inf: InferenceModel, s: float) -> float:
    """Detection accuracy c3 - c4 exp(-c5 s); increasing, asymptote c3.

    The fit extrapolates below realistic resolutions (it can go negative at
    tiny s); the raw model value is returned as-is.
    """
    return inf.c3 - inf.c4 * math.exp(-inf.c5 * s)


def min_resolution(inf: InferenceModel, a_min: float) -> float:
    """Smallest frame width reaching accuracy a_min: (1/c5) ln(c4/(c3 - a_min)).

    Clamped at zero when a_min sits below the zero-resolution accuracy
    c3 - c4.  Raises for a_min >= c3, which no finite resolution attains.
    """
    if a_min >= inf.c3:
        raise DomainError(
            f"accuracy target {a_min} is unreachable (asymptote {inf.c3})")
    return max(0.0, math.log(inf.c4 / (inf.c3 - a_min)) / inf.c5)


# ---------------------------------------------------------------------------
# M/D/1 waiting-time tail
# ---------------------------------------------------------------------------

def _ccdf_float(rho: float, t: float) -> float:
    """Double-precision Erlang series, reliable for t <= _FLOAT_T_MAX."""
    total = 0.0
    comp = 0.0  # Kahan compensation
    for v in range(int(math.floor(t)) + 1):
        d = t - v
        if d == 0.0:
            term = 1.0 if v == 0 else 0.0
        else:
            mag = v * math.log(rho * d) - math.lgamma(v + 1) + rho * d
            term = math.exp(mag)
            if v % 2 == 1:
                term = -term
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return 1.0 - (1.0 - rho) * total


def _tail_log_bound(rho: float, t: float) -> float:
    """Chernoff upper bound on ln P(T_w > t) (t in service units).

    The waiting-time transform of the M/D/1 queue is
    E[e^{sW}] = (1-rho) s / (s - rho (e^s - 1)) for s below the Cramer root
    eta solving rho (e^eta - 1) = eta; the bound is ln E[e^{sW}] - s t at
    s = 0.95 eta.
    """
    lo, hi = 1e-12, 800.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if rho * math.expm1(mid) - mid < 0.0:
            lo = mid
        else:
            hi = mid
    s = 0.95 * lo
    denom = s - rho * math.expm1(s)
    if denom <= 0.0:
        return 0.0
    return math.log((1.0 - rho) * s / denom) - s * t


def _ccdf_mp_at(rho: float, t: float, dps: int) -> float:
    with mpmath.workdps(dps):
        rho_mp = mpmath.mpf(rho)
        t_mp = mpmath.mpf(t)
        total = mpmath.mpf(0)
        for v in range(int(math.floor(t)) + 1):
            d = t_mp - v
            if d == 0:
                term = mpmath.mpf(1 if v == 0 else 0)
            else:
                term = mpmath.power(-rho_mp * d, v) / mpmath.factorial(v) \
                    * mpmath.exp(rho_mp * d)
            total += term
        return float(1 - (1 - rho_mp) * total)


def _ccdf_mp(rho: float, t: float) -> float:
    """Arbitrary-precision Erlang series for large t.

    Intermediate terms reach ~e^{1.2 t} in magnitude before cancelling down
    to the (possibly exponentially small) result, so the required precision
    depends on both t and the result scale.  A Chernoff bound short-circuits
    tails below double-precision underflow; otherwise the sum is repeated at
    growing precision until two evaluations agree.
    """
    if _tail_log_bound(rho, t) < -745.0:
        return 0.0
    # Terms grow at most like e^{1.202 t} (the u ln((1-u)/u) + u + (1-u)
    # envelope at rho -> 1), so 40 + 0.55 t digits leave the cancellation
    # noise floor below 1e-40: a first pass that returns anything at or
    # above 1e-20 is already certified.  Smaller results re-run at growing
    # precision until two passes agree.
    dps = 40 + int(0.55 * t)
    prev: float | None = None
    val = 0.0
    for _ in range(8):
        val = _ccdf_mp_at(rho, t, dps)
        if prev is None and abs(val) >= 1e-20:
            return val
        if prev is not None and abs(val - prev) <= 1e-9 * max(abs(val), 1e-280):
            return val
        prev = val
        dps = int(1.6 * dps) + 40
    return val


def mdone_wait_ccdf(rho: float, t_s: float, t: float) -> float:
    """P(T_w > t) for an M/D/1 queue with load rho and service time t_s.

    t is the waiting-time threshold in seconds.  The value is clamped to
    [0, 1]; tails whose true value underflows double precision return 0.
    """
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"mdone_wait_ccdf requires 0 <= rho < 1, got {rho}")
    if not t_s > 0.0:
        raise DomainError(f"mdone_wait_ccdf requires t_s > 0, got {t_s}")
    if t < 0.0:
        raise DomainError(f"mdone_wait_ccdf requires t >= 0, got {t}")
    if rho == 0.0:
        return 0.0
    t_norm = t / t_s
    if t_norm <= _FLOAT_T_MAX:
        p = _ccdf_float(rho, t_norm)
    else:
        p = _ccdf_mp(rho, t_norm)
    return min(1.0, max(0.0, p))


def mdone_wait_quantile(rho: float, t_s: float, p_tail: float) -> float:
    """Smallest T >= 0 with P(T_w > T) <= p_tail, to 1e-9 * t_s absolute.

    Returns 0 immediately when rho <= p_tail (no waiting slack is needed:
    P(T_w > 0) = rho).  The bracket starts at t_s * max(1, 10/(1 - rho))
    and doubles until the tail drops below p_tail, then bisects.
    """
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"mdone_wait_quantile requires 0 <= rho < 1, got {rho}")
    if not t_s > 0.0:
        raise DomainError(f"mdone_wait_quantile requires t_s > 0, got {t_s}")
    if not 0.0 < p_tail < 1.0:
        raise DomainError(f"mdone_wait_quantile requires 0 < p_tail < 1, got {p_tail}")
    if rho <= p_tail:
        return 0.0

    lo = 0.0
    hi = t_s * max(1.0, 10.0 / (1.0 - rho))
    while mdone_wait_ccdf(rho, t_s, hi) > p_tail:
        lo = hi
        hi *= 2.0
        if hi > 1e12 * t_s:
            raise DomainError(
                f"waiting-time quantile bracket failed for rho={rho}, p_tail={p_tail}")
    tol = 1e-9 * t_s
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mdone_wait_ccdf(rho, t_s, mid) <= p_tail:
            hi = mid
        else:
            lo = mid
    return hi
