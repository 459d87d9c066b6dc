"""Simulation oracles for the closed-form models.

Independent validation paths: Poisson-Voronoi sampling for the geometric
laws, fading/interference simulation for the two ergodic capacities, and a
discrete-event M/D/1 queue for the waiting-time tail and the end-to-end
deadline guarantee.

Reproducibility: every operation takes a SimSeed and derives its generator
through numpy's SeedSequence spawn keys, so a fixed (seed, stream_id) yields
bit-identical output regardless of what ran before; distinct stream_ids are
statistically independent.  Aggregations run over preallocated per-trial
slots, so results do not depend on execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import Voronoi, cKDTree

from .capacity import NetworkConfig, tx_power
from .offload import InferenceModel, TrafficModel

__all__ = [
    "SimWindow",
    "SimSeed",
    "InterferenceField",
    "McEstimate",
    "GeometrySamples",
    "sample_ppp",
    "empirical_geometry",
    "sample_interference_field",
    "mc_capacity_nl",
    "mc_capacity_il",
    "sim_mdone_queue",
    "sim_deadline_success",
    "sim_end_to_end",
]


@dataclass(frozen=True)
class SimWindow:
    """Square observation window [-w, w]^2 with an edge-exclusion margin
    for unbiased interior-cell statistics."""

    half_width: float
    guard_margin: float = 0.0

    def __post_init__(self) -> None:
        if not self.half_width > self.guard_margin >= 0.0:
            raise ValueError(
                f"require half_width > guard_margin >= 0, got {self}")


@dataclass(frozen=True)
class SimSeed:
    """Root entropy plus a stream index; distinct streams are independent."""

    seed: int = 0x5ED6E
    stream_id: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned value, got {self.seed}")
        if self.stream_id < 0:
            raise ValueError(f"stream_id must be nonnegative, got {self.stream_id}")

    def rng(self, *subkeys: int) -> np.random.Generator:
        """Generator for (stream_id, *subkeys); order-independent derivation."""
        ss = np.random.SeedSequence(entropy=self.seed,
                                    spawn_key=(self.stream_id, *subkeys))
        return np.random.default_rng(ss)


@dataclass(frozen=True)
class InterferenceField:
    """One realization of the co-channel interferers seen by a tagged user:
    distances to the tagged base station (d), distances to their own serving
    stations (r_own), and projected fading gains."""

    d: np.ndarray
    r_own: np.ndarray
    fade: np.ndarray
    guard_radius: float

    def __post_init__(self) -> None:
        if self.d.size and float(self.d.min()) < self.guard_radius:
            raise ValueError("interferer inside the guard radius")

    def power(self, cfg: NetworkConfig) -> float:
        """Aggregate interference power, capped power law per interferer."""
        if self.d.size == 0:
            return 0.0
        ell = np.minimum(cfg.p_ref_w * self.r_own ** (cfg.alpha * cfg.epsilon),
                         cfg.p_peak_w)
        return float(np.sum(self.fade * ell * self.d ** -cfg.alpha))


@dataclass(frozen=True)
class McEstimate:
    """Point estimate with its standard error and sample count."""

    mean: float
    std_error: float
    n: int


@dataclass(frozen=True)
class GeometrySamples:
    """Normalized geometric samples: nearest-link distances, per-cell maximum
    distances, and cell areas (interior cells only)."""

    nearest: np.ndarray
    max_dist: np.ndarray
    area: np.ndarray


def sample_ppp(lambda_b: float, window: SimWindow, seed: SimSeed) -> np.ndarray:
    """Homogeneous PPP of intensity lambda_b on the window; (n, 2) array."""
    if not lambda_b > 0:
        raise ValueError(f"lambda_b must be positive, got {lambda_b}")
    rng = seed.rng()
    w = window.half_width
    n = rng.poisson(lambda_b * (2.0 * w) ** 2)
    return rng.uniform(-w, w, size=(n, 2))


def _interior_cells(points: np.ndarray, window: SimWindow):
    """Voronoi cells whose nucleus lies inside the guarded window and whose
    region is bounded; yields (nucleus, vertex array)."""
    vor = Voronoi(points)
    limit = window.half_width - window.guard_margin
    for i, region_idx in enumerate(vor.point_region):
        region = vor.regions[region_idx]
        if len(region) == 0 or -1 in region:
            continue
        p = vor.points[i]
        if abs(p[0]) > limit or abs(p[1]) > limit:
            continue
        yield p, vor.vertices[region]


def empirical_geometry(
    lambda_b: float,
    window: SimWindow,
    seed: SimSeed,
    n_trials: int = 1,
) -> GeometrySamples:
    """Sample the three normalized geometric laws from Poisson-Voronoi draws.

    Nearest distances come from uniform probe users matched against the full
    point set; the per-cell maximum distance is the distance from the nucleus
    to the farthest cell vertex (cells are convex, so this equals the
    supremum over uniformly resampled users in the cell); areas use the
    shoelace formula.  Max-distance and area use interior cells only.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    nearest_parts = [np.empty(0)] * n_trials
    max_parts = [np.empty(0)] * n_trials
    area_parts = [np.empty(0)] * n_trials
    sqrt_lb = math.sqrt(lambda_b)
    for trial in range(n_trials):
        rng = seed.rng(trial)
        w = window.half_width
        n_bs = rng.poisson(lambda_b * (2.0 * w) ** 2)
        points = rng.uniform(-w, w, size=(n_bs, 2))
        if n_bs < 4:
            continue
        limit = w - window.guard_margin
        n_probe = max(1, int(lambda_b * (2.0 * limit) ** 2))
        probes = rng.uniform(-limit, limit, size=(n_probe, 2))
        dist, _ = cKDTree(points).query(probes)
        nearest_parts[trial] = sqrt_lb * dist

        rmax, areas = [], []
        for nucleus, verts in _interior_cells(points, window):
            offsets = verts - nucleus
            rmax.append(math.sqrt(float((offsets * offsets).sum(axis=1).max())))
            x, y = verts[:, 0], verts[:, 1]
            areas.append(0.5 * abs(float(np.dot(x, np.roll(y, 1))
                                         - np.dot(y, np.roll(x, 1)))))
        max_parts[trial] = sqrt_lb * np.asarray(rmax)
        area_parts[trial] = lambda_b * np.asarray(areas)
    return GeometrySamples(
        nearest=np.concatenate(nearest_parts),
        max_dist=np.concatenate(max_parts),
        area=np.concatenate(area_parts),
    )


def mc_capacity_nl(
    cfg: NetworkConfig,
    b: float,
    r: float,
    n_samples: int,
    seed: SimSeed,
) -> McEstimate:
    """Monte Carlo mean of B log2(1 + SNR) over Gamma(M, gamma) fading draws."""
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    rng = seed.rng()
    gain = rng.gamma(cfg.m_antennas, cfg.gamma_fading, size=n_samples)
    snr = gain * tx_power(cfg, r) * r ** -cfg.alpha / (cfg.n0_w_hz * b)
    rate = b * np.log2(1.0 + snr)
    return McEstimate(float(rate.mean()),
                      float(rate.std(ddof=1) / math.sqrt(n_samples)),
                      n_samples)


def _rayleigh_link_distances(rng: np.random.Generator, lambda_b: float,
                             n: int) -> np.ndarray:
    """Distances of interferers to their own serving stations: the nearest-BS
    law, sqrt(-ln U / (pi lambda_b))."""
    u = rng.random(n)
    return np.sqrt(-np.log1p(-u) / (math.pi * lambda_b))


def sample_interference_field(
    cfg: NetworkConfig,
    r_guard: float,
    window: SimWindow,
    rng: np.random.Generator,
) -> InterferenceField:
    """Draw one co-channel interference realization.

    Interferer positions form a PPP of density lambda_b/delta on the annulus
    between the guard radius and the window half-width (only the radial
    coordinate matters for path loss); per-interferer link distances are
    Rayleigh and projected gains are exponential with mean gamma.
    """
    r_out = window.half_width
    if r_out <= r_guard:
        raise ValueError("window half_width must exceed the guard radius")
    density = cfg.lambda_b / cfg.delta
    area = math.pi * (r_out**2 - r_guard**2)
    n = rng.poisson(density * area)
    d = np.sqrt(rng.uniform(r_guard**2, r_out**2, size=n))
    r_own = _rayleigh_link_distances(rng, cfg.lambda_b, n)
    fade = rng.exponential(cfg.gamma_fading, size=n)
    return InterferenceField(d=d, r_own=r_own, fade=fade, guard_radius=r_guard)


def mc_capacity_il(
    cfg: NetworkConfig,
    b: float,
    r: float,
    window: SimWindow,
    n_samples: int,
    seed: SimSeed,
    exact_scheduling: bool = False,
) -> McEstimate:
    """Monte Carlo mean of B log2(1 + SIR) over interference-field draws.

    The default draws interferer link distances i.i.d. Rayleigh, matching
    the closed form's displacement approximation.  exact_scheduling instead
    samples one active user per co-channel Voronoi cell of a full base
    station process (slow; diagnostic only).
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    if exact_scheduling:
        return _mc_capacity_il_exact(cfg, b, r, window, n_samples, seed)

    alpha = cfg.alpha
    sig_scale = tx_power(cfg, r) * r**-alpha
    density = cfg.lambda_b / cfg.delta
    r_out = window.half_width
    area = math.pi * (r_out**2 - r**2)
    pi_lb = math.pi * cfg.lambda_b
    ae = cfg.alpha * cfg.epsilon

    rate_sum = 0.0
    rate_sq_sum = 0.0
    chunk = max(1, min(n_samples, int(2e6 / max(1.0, density * area))))
    done = 0
    part = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        rng = seed.rng(part)
        counts = rng.poisson(density * area, size=m)
        total = int(counts.sum())
        d = np.sqrt(rng.uniform(r**2, r_out**2, size=total))
        u = rng.random(total)
        r_own = np.sqrt(-np.log1p(-u) / pi_lb)
        fade = rng.exponential(cfg.gamma_fading, size=total)
        ell = np.minimum(cfg.p_ref_w * r_own**ae, cfg.p_peak_w)
        contrib = fade * ell * d**-alpha
        bounds = np.concatenate(([0], np.cumsum(counts)))
        interference = np.add.reduceat(
            np.concatenate((contrib, [0.0])), bounds[:-1])
        interference[counts == 0] = np.inf  # empty field: treat SIR as 0
        gain = rng.gamma(cfg.m_antennas, cfg.gamma_fading, size=m)
        rate = b * np.log2(1.0 + gain * sig_scale / interference)
        rate_sum += float(rate.sum())
        rate_sq_sum += float((rate * rate).sum())
        done += m
        part += 1
    mean = rate_sum / n_samples
    var = max(0.0, (rate_sq_sum - n_samples * mean * mean) / max(1, n_samples - 1))
    return McEstimate(mean, math.sqrt(var / n_samples), n_samples)


def _mc_capacity_il_exact(cfg, b, r, window, n_samples, seed) -> McEstimate:
    """Dependent-scheduling variant: one uniform user per co-channel cell.

    Quantifies the gap left by the i.i.d. Rayleigh displacement
    approximation; too slow for large n_samples.
    """
    alpha = cfg.alpha
    sig_scale = tx_power(cfg, r) * r**-alpha
    w = window.half_width
    ae = cfg.alpha * cfg.epsilon
    rates = np.empty(n_samples)
    for i in range(n_samples):
        rng = seed.rng(i)
        n_bs = rng.poisson(cfg.lambda_b * (2.0 * w) ** 2)
        bs = rng.uniform(-w, w, size=(max(n_bs, 1), 2))
        tree = cKDTree(bs)
        cochannel = rng.random(len(bs)) < 1.0 / cfg.delta
        # one uniform user per cell: scatter candidates, keep first hit per cell
        candidates = rng.uniform(-w, w, size=(len(bs) * 30, 2))
        _, owner = tree.query(candidates)
        first = np.full(len(bs), -1)
        seen = np.zeros(len(bs), dtype=bool)
        for j, cell in enumerate(owner):
            if not seen[cell]:
                seen[cell] = True
                first[cell] = j
        active = np.flatnonzero(cochannel & seen)
        users = candidates[first[active]]
        d = np.sqrt((users**2).sum(axis=1))
        keep = d > r
        users, active = users[keep], active[keep]
        r_own = np.sqrt(((users - bs[active]) ** 2).sum(axis=1))
        fade = rng.exponential(cfg.gamma_fading, size=len(active))
        ell = np.minimum(cfg.p_ref_w * r_own**ae, cfg.p_peak_w)
        d = np.sqrt((users**2).sum(axis=1))
        interference = float(np.sum(fade * ell * d**-alpha)) if len(active) else math.inf
        gain = rng.gamma(cfg.m_antennas, cfg.gamma_fading)
        rates[i] = b * math.log2(1.0 + gain * sig_scale / interference)
    return McEstimate(float(rates.mean()),
                      float(rates.std(ddof=1) / math.sqrt(n_samples)),
                      n_samples)


def sim_mdone_queue(
    rho: float,
    t_s: float,
    n_frames: int,
    seed: SimSeed,
) -> np.ndarray:
    """Discrete-event M/D/1 waiting times (FCFS, infinite buffer).

    Poisson arrivals of rate rho/t_s feed a single server with deterministic
    service t_s; waits follow the Lindley recursion, vectorized through the
    running-minimum representation.  The warm-up discard is 10% of frames,
    at least 10^4 once the run is long enough to afford it.
    """
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    if not t_s > 0:
        raise ValueError(f"t_s must be positive, got {t_s}")
    if n_frames < 1:
        raise ValueError(f"n_frames must be >= 1, got {n_frames}")
    if rho == 0.0:
        return np.zeros(n_frames)
    rng = seed.rng()
    gaps = rng.exponential(t_s / rho, size=n_frames)
    # W_1 = 0; W_k = max(0, W_{k-1} + t_s - gap_k).  With S_k the cumulative
    # sum of (t_s - gap_i) over i = 2..k, W_k = S_k - min(S_1..S_k).
    increments = t_s - gaps
    increments[0] = 0.0
    s = np.cumsum(increments)
    waits = s - np.minimum.accumulate(s)
    warmup = n_frames // 10
    if n_frames > 20_000:
        warmup = max(warmup, 10_000)
    return waits[warmup:]


def sim_deadline_success(
    t_ul: float,
    t_service: float,
    rho: float,
    deadline: float,
    n_frames: int,
    seed: SimSeed,
    n_batches: int = 20,
) -> McEstimate:
    """Empirical probability that T_ul + T_w + T_s meets the deadline.

    Simulates the tagged server queue; the uplink and service times are the
    deterministic values the analytic pipeline uses.  The standard error
    comes from batch means over the (autocorrelated) wait sequence.
    """
    waits = sim_mdone_queue(rho, t_service, n_frames, seed)
    success = (t_ul + waits + t_service <= deadline).astype(float)
    n = len(success)
    batches = np.array_split(success, min(n_batches, n))
    means = np.array([batch.mean() for batch in batches])
    se = float(means.std(ddof=1) / math.sqrt(len(means))) if len(means) > 1 else 0.0
    return McEstimate(float(success.mean()), se, n)


def sim_end_to_end(
    sol,
    net: NetworkConfig,
    traffic: TrafficModel,
    inf: InferenceModel,
    qos,
    geom=None,
    n_frames: int = 1_000_000,
    seed: SimSeed = SimSeed(),
) -> McEstimate:
    """End-to-end deadline success for a dimensioning solution.

    Simulates the worst-case cell (area kappa4, tagged user at kappa3):
    Poisson frame arrivals of rate lambda * kappa4 into the M/D/1 server,
    deterministic uplink time from the closed-form rate at the solution
    bandwidth, then counts deadline hits.
    """
    from .dimension import compute_constants, _min_regime_rate
    from .offload import inference_work as _work

    consts = compute_constants(net, traffic, inf, qos, geom)
    payload = consts.kappa1 * consts.kappa5**2
    rate = _min_regime_rate(net, sol.b_opt, consts.kappa3, sol.regime)
    t_ul = payload / rate
    t_service = _work(inf, consts.kappa5) / sol.h_opt
    return sim_deadline_success(t_ul, t_service, sol.rho_opt, qos.d_max,
                                n_frames, seed)
