"""Resource dimensioning: constants, convex solve, certificate, Pareto sweep.

The reduced problem: with the cell-edge distance, cell area, and frame
resolution pinned at their coverage/accuracy bounds (kappa3, kappa4,
kappa5), the remaining decision is one-dimensional.  For a candidate
compute capacity H:

    rho(H)  = lambda * kappa4 * (c1 kappa5^3 + c2) / H        (server load)
    T(H)    = waiting-time quantile at tail 1 - omega_min
    tau(H)  = D - T(H) - T_s(H)                               (uplink budget)
    B(H)    = smallest bandwidth whose ergodic rate in BOTH power-control
              branches carries the kappa1*kappa5^2-bit payload within tau(H)

and the cost f(H) = beta1*lambda*B(H) + (1-beta1)*beta2*lambda_b*H_flops is
minimized by golden-section search (each elimination above is exact and
f is convex on the feasible interval).  The reported objective adds the
constant vartheta*kappa4 area term.

Cost units: the bandwidth term prices Hz directly, while the compute term
prices FLOPS; H is carried in TFLOPS everywhere else (matching the
service-time constants), so the objective converts with a factor 1e12.
This is what makes the two cost terms comparable under the baseline
weights.

Certificate: the reduction is globally optimal for the original non-convex
problem whenever T* >= T_s* (the waiting-time constraint sits in its convex
region) or rho* >= 1 + W(-omega_min / e) (the concave region is not
reachable at all).  Both conditions are sufficient, not necessary:
NOT_GUARANTEED does not imply suboptimality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .capacity import NetworkConfig, PowerRegime, capacity_il, capacity_nl
from .geometry import GeometryModel, kappa3, kappa4
from .offload import (
    InferenceModel,
    TrafficModel,
    inference_work,
    mdone_wait_ccdf,
    mdone_wait_quantile,
    min_resolution,
)
from .specfun import lambert_w0

__all__ = [
    "TFLOPS_TO_FLOPS",
    "Regime",
    "Certificate",
    "QosSpec",
    "CostSpec",
    "DerivedConstants",
    "DimensionSolution",
    "InfeasibleError",
    "ParetoPoint",
    "compute_constants",
    "required_bandwidth",
    "solve",
    "check_optimality",
    "constraint_residuals",
    "pareto_sweep",
    "end_to_end_success_prob",
]

TFLOPS_TO_FLOPS = 1e12

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class Regime(Enum):
    """Which ergodic-capacity law the uplink budget uses."""

    NOISE_LIMITED = "noise_limited"
    INTERFERENCE_LIMITED = "interference_limited"


class Certificate(Enum):
    """Which sufficient global-optimality condition held at the solution."""

    COND_T = "cond_t"
    COND_RHO = "cond_rho"
    BOTH = "both"
    NOT_GUARANTEED = "not_guaranteed"


@dataclass(frozen=True)
class QosSpec:
    """Statistical service targets: end-to-end deadline d_max with success
    probability omega_min, cell-edge and cell-area coverage fractions,
    minimum detection accuracy, and the server load cap."""

    d_max: float
    omega_min: float
    eta_r: float
    eta_a: float
    a_min: float
    rho_max: float

    def __post_init__(self) -> None:
        if not self.d_max > 0:
            raise ValueError(f"d_max must be positive, got {self.d_max}")
        for name in ("omega_min", "eta_r", "eta_a", "rho_max"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")


@dataclass(frozen=True)
class CostSpec:
    """Objective weights: beta1 trades bandwidth against compute cost,
    beta2 scales the compute term, vartheta prices cell area."""

    beta1: float
    beta2: float
    vartheta: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.beta1 <= 1.0:
            raise ValueError(f"beta1 must lie in [0, 1], got {self.beta1}")
        if not self.beta2 > 0:
            raise ValueError(f"beta2 must be positive, got {self.beta2}")
        if self.vartheta < 0:
            raise ValueError(f"vartheta must be >= 0, got {self.vartheta}")


@dataclass(frozen=True)
class DerivedConstants:
    """The five constants that freeze the QoS constraints: payload factor
    (bits/pixel^2), load-normalized traffic, cell-edge distance (km),
    cell area (km^2), and minimum resolution (pixels)."""

    kappa1: float
    kappa2: float
    kappa3: float
    kappa4: float
    kappa5: float


@dataclass(frozen=True)
class DimensionSolution:
    """Optimal (B, H, T, A) with the pinned (r, s), load, cost, and flags."""

    b_opt: float
    h_opt: float
    t_opt: float
    a_opt: float
    r_fixed: float
    s_fixed: float
    rho_opt: float
    objective: float
    certificate: Certificate
    regime: Regime


@dataclass(frozen=True)
class ParetoPoint:
    """One sweep entry: the weight, and either a solution or an error."""

    beta1: float
    solution: DimensionSolution | None
    error: str | None = None


class InfeasibleError(Exception):
    """No (B, H, T, A) satisfies the constraints; names the binding one."""

    def __init__(self, cause: str, detail: str):
        super().__init__(f"infeasible ({cause}): {detail}")
        self.cause = cause


def _geometry(net: NetworkConfig, geom: GeometryModel | None) -> GeometryModel:
    if geom is None:
        return GeometryModel(lambda_b=net.lambda_b)
    if geom.lambda_b != net.lambda_b:
        raise ValueError(
            f"geometry density {geom.lambda_b} disagrees with network {net.lambda_b}")
    return geom


def compute_constants(
    net: NetworkConfig,
    traffic: TrafficModel,
    inf: InferenceModel,
    qos: QosSpec,
    geom: GeometryModel | None = None,
) -> DerivedConstants:
    """kappa1 = theta/xi, kappa2 = lambda/rho_max, kappa3/kappa4 from the
    geometric quantiles, kappa5 from the accuracy inversion."""
    g = _geometry(net, geom)
    return DerivedConstants(
        kappa1=traffic.theta_bits / traffic.xi_compress,
        kappa2=traffic.lambda_rate / qos.rho_max,
        kappa3=kappa3(g, qos.eta_r),
        kappa4=kappa4(g, qos.eta_a),
        kappa5=min_resolution(inf, qos.a_min),
    )


def _rate(net: NetworkConfig, b: float, r: float, regime: Regime,
          power: PowerRegime | None) -> float:
    if regime is Regime.NOISE_LIMITED:
        return capacity_nl(net, b, r, power)
    return capacity_il(net, b, r, power)


def _min_regime_rate(net: NetworkConfig, b: float, r: float, regime: Regime) -> float:
    """Rate feasible in BOTH power-control branches; equals the capped-law
    rate because both capacities increase with the signal power."""
    return min(_rate(net, b, r, regime, PowerRegime.FRACTIONAL),
               _rate(net, b, r, regime, PowerRegime.PEAK))


def required_bandwidth(
    net: NetworkConfig,
    regime: Regime,
    r: float,
    need_rate: float,
    b_ceiling_hz: float = 1e10,
) -> float:
    """Smallest bandwidth whose rate at distance r reaches need_rate in both
    power-control branches, by doubling bracket plus bisection.

    Raises InfeasibleError("bandwidth") when the ceiling cannot carry it.
    """
    hi = 1e3
    while _min_regime_rate(net, hi, r, regime) < need_rate:
        hi *= 2.0
        if hi > b_ceiling_hz:
            raise InfeasibleError(
                "bandwidth",
                f"rate {need_rate:.6g} bit/s unreachable below ceiling "
                f"{b_ceiling_hz:.6g} Hz at r={r:.6g} km")
    lo = hi / 2.0
    if _min_regime_rate(net, lo, r, regime) >= need_rate:
        lo = 1e-6
    while hi - lo > 1e-12 * hi:
        mid = 0.5 * (lo + hi)
        if _min_regime_rate(net, mid, r, regime) >= need_rate:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class _Candidate:
    h: float
    rho: float
    t_wait: float
    t_service: float
    b: float
    cost: float  # objective without the constant area term


def solve(
    net: NetworkConfig,
    traffic: TrafficModel,
    inf: InferenceModel,
    qos: QosSpec,
    cost: CostSpec,
    geom: GeometryModel | None = None,
    regime: Regime = Regime.NOISE_LIMITED,
    *,
    b_ceiling_hz: float = 1e10,
    h_ceiling_tflops: float = 1e8,
    h_rel_tol: float = 1e-9,
) -> DimensionSolution:
    """Globally solve the reduced dimensioning problem.

    The search interval in H starts at the stability floor
    kappa4 * (c1 kappa5^3 + c2) * kappa2 (the load cap) and grows
    geometrically until the cost turns upward; infeasible candidates
    (exhausted deadline or bandwidth ceiling) count as infinite cost.
    Ties prefer the smaller H.
    """
    consts = compute_constants(net, traffic, inf, qos, geom)
    work = inference_work(inf, consts.kappa5)  # TFLOP per frame
    payload = consts.kappa1 * consts.kappa5**2  # bits per frame
    h_floor = consts.kappa4 * work * consts.kappa2
    p_tail = 1.0 - qos.omega_min
    compute_price = (1.0 - cost.beta1) * cost.beta2 * net.lambda_b * TFLOPS_TO_FLOPS

    if h_floor > h_ceiling_tflops:
        raise InfeasibleError(
            "load",
            f"stability floor {h_floor:.6g} TFLOPS exceeds the compute "
            f"ceiling {h_ceiling_tflops:.6g} TFLOPS")
    if qos.d_max <= work / h_ceiling_tflops:
        raise InfeasibleError(
            "deadline",
            f"deadline {qos.d_max} s is below the service time at the "
            f"compute ceiling {h_ceiling_tflops} TFLOPS")

    def evaluate(h: float) -> _Candidate | None:
        rho = traffic.lambda_rate * consts.kappa4 * work / h
        if rho >= 1.0:
            return None
        t_service = work / h
        t_wait = mdone_wait_quantile(rho, t_service, p_tail)
        tau = qos.d_max - t_wait - t_service
        if tau <= 0.0:
            return None
        try:
            b = required_bandwidth(net, regime, consts.kappa3, payload / tau,
                                   b_ceiling_hz)
        except InfeasibleError:
            return None
        return _Candidate(h, rho, t_wait, t_service, b,
                          cost.beta1 * traffic.lambda_rate * b + compute_price * h)

    cache: dict[float, _Candidate | None] = {}

    def f(h: float) -> float:
        if h not in cache:
            cache[h] = evaluate(h)
        cand = cache[h]
        return cand.cost if cand is not None else math.inf

    def binding_constraint(h_probe: float) -> InfeasibleError:
        rho = traffic.lambda_rate * consts.kappa4 * work / h_probe
        t_service = work / h_probe
        t_wait = mdone_wait_quantile(rho, t_service, p_tail)
        tau = qos.d_max - t_wait - t_service
        if tau <= 0.0:
            return InfeasibleError(
                "deadline",
                f"waiting {t_wait:.4g} s + service {t_service:.4g} s exhaust "
                f"the deadline {qos.d_max} s even at the compute ceiling")
        return InfeasibleError(
            "bandwidth",
            f"payload {payload:.6g} bits needs rate {payload / tau:.6g} bit/s, "
            f"unreachable below ceiling {b_ceiling_hz:.6g} Hz")

    # Expand the upper end until the cost turns upward between consecutive
    # feasible probes (feasibility is monotone in H: larger capacity only
    # relaxes the load and deadline constraints).
    lo = h_floor
    prev, hi = h_floor, 2.0 * h_floor
    while hi < h_ceiling_tflops:
        if math.isfinite(f(prev)) and f(hi) > f(prev):
            break
        prev, hi = hi, 2.0 * hi
    hi = min(hi, h_ceiling_tflops)
    if all(cand is None for cand in cache.values()) and f(hi) == math.inf:
        raise binding_constraint(hi)

    # Golden-section search; infinite costs (infeasible left edge) steer the
    # bracket right, preserving unimodality on the feasible interval.
    a, b_end = lo, hi
    c = b_end - _GOLDEN * (b_end - a)
    d = a + _GOLDEN * (b_end - a)
    fc, fd = f(c), f(d)
    while b_end - a > h_rel_tol * max(1.0, abs(b_end)):
        if fc <= fd:
            b_end, d, fd = d, c, fc
            c = b_end - _GOLDEN * (b_end - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b_end - a)
            fd = f(d)

    # Prefer the smallest H among equal-cost candidates (flat region ties).
    finite = [(h, cand) for h, cand in cache.items() if cand is not None]
    if not finite:
        raise InfeasibleError("deadline", "no feasible compute capacity found")
    best_cost = min(cand.cost for _, cand in finite)
    tol = 1e-12 * max(1.0, abs(best_cost))
    h_best = min(h for h, cand in finite if cand.cost <= best_cost + tol)
    cand = cache[h_best]
    assert cand is not None

    sol = DimensionSolution(
        b_opt=cand.b,
        h_opt=cand.h,
        t_opt=cand.t_wait,
        a_opt=consts.kappa4,
        r_fixed=consts.kappa3,
        s_fixed=consts.kappa5,
        rho_opt=cand.rho,
        objective=cand.cost + cost.vartheta * consts.kappa4,
        certificate=Certificate.NOT_GUARANTEED,
        regime=regime,
    )
    return replace(sol, certificate=check_optimality(sol, inf, qos))


def check_optimality(
    sol: DimensionSolution, inf: InferenceModel, qos: QosSpec
) -> Certificate:
    """Evaluate the two sufficient global-optimality conditions."""
    t_service = inference_work(inf, sol.s_fixed) / sol.h_opt
    cond_t = sol.t_opt >= t_service * (1.0 - 1e-12)
    rho_threshold = 1.0 + lambert_w0(-qos.omega_min / math.e)
    cond_rho = sol.rho_opt >= rho_threshold - 1e-12
    if cond_t and cond_rho:
        return Certificate.BOTH
    if cond_t:
        return Certificate.COND_T
    if cond_rho:
        return Certificate.COND_RHO
    return Certificate.NOT_GUARANTEED


def constraint_residuals(
    sol: DimensionSolution,
    net: NetworkConfig,
    traffic: TrafficModel,
    inf: InferenceModel,
    qos: QosSpec,
    geom: GeometryModel | None = None,
) -> dict[str, float]:
    """Signed slack of every reduced-problem constraint (>= 0 is feasible),
    normalized by the constraint scale."""
    consts = compute_constants(net, traffic, inf, qos, geom)
    work = inference_work(inf, consts.kappa5)
    payload = consts.kappa1 * consts.kappa5**2
    t_service = work / sol.h_opt
    tail = mdone_wait_ccdf(sol.rho_opt, t_service, sol.t_opt)
    p_tail = 1.0 - qos.omega_min
    budget = {}
    for power in PowerRegime:
        t_ul = payload / _rate(net, sol.b_opt, consts.kappa3, sol.regime, power)
        budget[power.value] = (qos.d_max - t_ul - sol.t_opt - t_service) / qos.d_max
    return {
        "wait_tail": (p_tail - tail) / p_tail,
        "deadline_fractional": budget["fractional"],
        "deadline_peak": budget["peak"],
        "server_stability": (sol.h_opt - consts.kappa4 * work * consts.kappa2)
                            / sol.h_opt,
        "load_cap": (qos.rho_max - sol.rho_opt) / qos.rho_max,
        "area_bound": (sol.a_opt - consts.kappa4) / consts.kappa4,
        "distance_bound": (sol.r_fixed - consts.kappa3) / consts.kappa3,
        "resolution_bound": (sol.s_fixed - consts.kappa5) / consts.kappa5,
    }


def pareto_sweep(
    net: NetworkConfig,
    traffic: TrafficModel,
    inf: InferenceModel,
    qos: QosSpec,
    cost: CostSpec,
    beta1_grid: list[float],
    geom: GeometryModel | None = None,
    regime: Regime = Regime.NOISE_LIMITED,
) -> list[ParetoPoint]:
    """Solve once per beta1, tracing the bandwidth/compute cost frontier.

    Per-point failures are recorded in the result instead of aborting; the
    output is sorted by beta1.
    """
    for b1 in beta1_grid:
        if not 0.0 < b1 < 1.0:
            raise ValueError(f"beta1 grid values must lie in (0, 1), got {b1}")
    points: list[ParetoPoint] = []
    for b1 in sorted(beta1_grid):
        try:
            sol = solve(net, traffic, inf, qos, replace(cost, beta1=b1),
                        geom, regime)
            points.append(ParetoPoint(beta1=b1, solution=sol))
        except InfeasibleError as err:
            points.append(ParetoPoint(beta1=b1, solution=None, error=str(err)))
    return points


def end_to_end_success_prob(
    sol: DimensionSolution,
    net: NetworkConfig,
    traffic: TrafficModel,
    inf: InferenceModel,
    qos: QosSpec,
    geom: GeometryModel | None = None,
) -> float:
    """P(T_ul + T_w + T_s <= D) for the worst-case user of a solution.

    Uses the capped-law rate at the cell edge and the waiting-time CCDF at
    the solution's load; any feasible solution returns at least
    omega_min - 1e-6.
    """
    consts = compute_constants(net, traffic, inf, qos, geom)
    payload = consts.kappa1 * consts.kappa5**2
    t_ul = payload / _min_regime_rate(net, sol.b_opt, consts.kappa3, sol.regime)
    t_service = inference_work(inf, consts.kappa5) / sol.h_opt
    margin = qos.d_max - t_ul - t_service
    if margin < 0.0:
        return 0.0
    return 1.0 - mdone_wait_ccdf(sol.rho_opt, t_service, margin)
