"""Command-line front door: config ingestion, sweeps, solver, validation.

Subcommands: capacity-sweep, dimension, pareto, validate.  Exit codes:
0 ok, 2 config/usage error, 3 infeasible, 4 validation failure.

Config files are YAML with nested sections mirroring the model types.
Power quantities are given in dBm (dBm/Hz for the noise density) and are
converted once at parse time via watts = 10^((dBm - 30)/10); everything
downstream is linear.  Serialization preserves the dBm form, so
parse -> serialize -> parse is the identity.

CSV output: comma-separated, header row, 12 significant digits, LF line
endings; identical config and seed produce byte-identical files.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Any, Callable, Sequence

import numpy as np
import yaml

from . import dimension, montecarlo
from .capacity import NetworkConfig, capacity_il, capacity_nl, tx_power
from .dimension import (
    CostSpec,
    DimensionSolution,
    InfeasibleError,
    QosSpec,
    Regime,
    compute_constants,
    constraint_residuals,
    end_to_end_success_prob,
    pareto_sweep,
    solve,
)
from .geometry import (
    CELL_AREA_FIT,
    MAX_DISTANCE_FIT,
    GeneralizedGamma,
    GeometryModel,
    distance_cdf,
    gen_gamma_cdf,
)
from .montecarlo import (
    SimSeed,
    SimWindow,
    empirical_geometry,
    mc_capacity_il,
    mc_capacity_nl,
    sim_end_to_end,
    sim_mdone_queue,
)
from .offload import InferenceModel, TrafficModel, mdone_wait_ccdf

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "load_config",
    "dumps_config",
    "default_config",
    "cmd_capacity_sweep",
    "cmd_dimension",
    "cmd_pareto",
    "cmd_validate",
    "main",
]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_VALIDATION = 4

_CONFIG_HEADER = """\
# edgedim scenario configuration.
# Powers are dBm (noise density dBm/Hz); converted at parse time via
#   watts = 10 ** ((dBm - 30) / 10).
# Distances km, areas km^2, bandwidth Hz, compute TFLOPS.
"""


class ConfigError(ValueError):
    """Configuration file rejected; message names the offending field."""


@dataclass(frozen=True)
class NetworkSection:
    lambda_b: float = 2.0
    delta: float = 4.0
    alpha: float = 4.0
    epsilon: float = 0.5
    p_ref_dbm: float = 10.0
    p_peak_dbm: float = 23.0
    n0_dbm_hz: float = -174.0
    f_c_hz: float = 2.4e9
    m_antennas: int = 16


@dataclass(frozen=True)
class TrafficSection:
    lambda_rate: float = 100.0
    theta_bits: float = 24.0
    xi_compress: float = 2.0
    s_resolution: float = 640.0


@dataclass(frozen=True)
class InferenceSection:
    c1: float = 7e-10
    c2: float = 0.083
    c3: float = 1.0
    c4: float = 1.578
    c5: float = 6.5e-3
    h_capacity: float = 1.0


@dataclass(frozen=True)
class QosSection:
    d_max: float = 0.5
    omega_min: float = 0.8
    eta_r: float = 0.999
    eta_a: float = 0.999
    a_min: float = 0.9
    rho_max: float = 0.99


@dataclass(frozen=True)
class CostSection:
    beta1: float = 0.5
    beta2: float = 1e-6
    vartheta: float = 1.0


@dataclass(frozen=True)
class GeometrySection:
    max_dist_fit: tuple[float, float, float] = (1.719, 5.528, 9.482)
    area_fit: tuple[float, float, float] = (1.0, 3.5, 3.5)


@dataclass(frozen=True)
class SeedSection:
    seed: int = 20250101
    stream_id: int = 0


@dataclass(frozen=True)
class ScenarioConfig:
    """Typed view of one scenario file; defaults are the baseline values."""

    network: NetworkSection = field(default_factory=NetworkSection)
    traffic: TrafficSection = field(default_factory=TrafficSection)
    inference: InferenceSection = field(default_factory=InferenceSection)
    qos: QosSection = field(default_factory=QosSection)
    cost: CostSection = field(default_factory=CostSection)
    geometry: GeometrySection = field(default_factory=GeometrySection)
    regime: str = "noise_limited"
    seed: SeedSection = field(default_factory=SeedSection)

    def __post_init__(self) -> None:
        if self.regime not in ("noise_limited", "interference_limited"):
            raise ConfigError(
                f"regime must be noise_limited or interference_limited, "
                f"got {self.regime!r}")

    def network_config(self) -> NetworkConfig:
        n = self.network
        return NetworkConfig(
            lambda_b=n.lambda_b, delta=n.delta, alpha=n.alpha,
            epsilon=n.epsilon, p_ref_w=dbm_to_watts(n.p_ref_dbm),
            p_peak_w=dbm_to_watts(n.p_peak_dbm),
            n0_w_hz=dbm_to_watts(n.n0_dbm_hz), f_c_hz=n.f_c_hz,
            m_antennas=n.m_antennas)

    def traffic_model(self) -> TrafficModel:
        t = self.traffic
        return TrafficModel(lambda_rate=t.lambda_rate, theta_bits=t.theta_bits,
                            xi_compress=t.xi_compress,
                            s_resolution=t.s_resolution)

    def inference_model(self) -> InferenceModel:
        i = self.inference
        return InferenceModel(c1=i.c1, c2=i.c2, c3=i.c3, c4=i.c4, c5=i.c5,
                              h_capacity=i.h_capacity)

    def qos_spec(self) -> QosSpec:
        q = self.qos
        return QosSpec(d_max=q.d_max, omega_min=q.omega_min, eta_r=q.eta_r,
                       eta_a=q.eta_a, a_min=q.a_min, rho_max=q.rho_max)

    def cost_spec(self) -> CostSpec:
        c = self.cost
        return CostSpec(beta1=c.beta1, beta2=c.beta2, vartheta=c.vartheta)

    def geometry_model(self) -> GeometryModel:
        g = self.geometry
        return GeometryModel(
            lambda_b=self.network.lambda_b,
            max_dist_fit=GeneralizedGamma(*g.max_dist_fit),
            area_fit=GeneralizedGamma(*g.area_fit))

    def regime_enum(self) -> Regime:
        return Regime(self.regime)

    def sim_seed(self) -> SimSeed:
        return SimSeed(seed=self.seed.seed, stream_id=self.seed.stream_id)


def dbm_to_watts(dbm: float) -> float:
    """watts = 10^((dBm - 30)/10)."""
    return 10.0 ** ((dbm - 30.0) / 10.0)


_SECTION_TYPES = {
    "network": NetworkSection,
    "traffic": TrafficSection,
    "inference": InferenceSection,
    "qos": QosSection,
    "cost": CostSection,
    "geometry": GeometrySection,
    "seed": SeedSection,
}


def _coerce(section: str, name: str, expected: type, value: Any) -> Any:
    if expected is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{section}.{name}: expected a number, got {value!r}")
        return float(value)
    if expected is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{section}.{name}: expected an integer, got {value!r}")
        return value
    if expected is tuple or str(expected).startswith("tuple"):
        if not isinstance(value, (list, tuple)) or len(value) != 3:
            raise ConfigError(
                f"{section}.{name}: expected a 3-element list, got {value!r}")
        return tuple(float(v) for v in value)
    return value


def _parse_section(name: str, cls, raw: Any):
    if raw is None:
        return cls()
    if not isinstance(raw, dict):
        raise ConfigError(f"{name}: expected a mapping, got {raw!r}")
    known = {f.name: f for f in fields(cls)}
    unknown = set(raw) - set(known)
    if unknown:
        raise ConfigError(f"{name}: unknown field(s) {sorted(unknown)}")
    kwargs = {}
    for key, value in raw.items():
        f = known[key]
        expected = {"float": float, "int": int}.get(f.type, tuple)
        kwargs[key] = _coerce(name, key, expected, value)
    try:
        return cls(**kwargs)
    except (ValueError, TypeError) as err:
        raise ConfigError(f"{name}: {err}") from err


def parse_config(raw: Any) -> ScenarioConfig:
    """Build a ScenarioConfig from a YAML-decoded mapping."""
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be a mapping, got {type(raw).__name__}")
    known = set(_SECTION_TYPES) | {"regime"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown top-level section(s) {sorted(unknown)}")
    sections = {
        name: _parse_section(name, cls, raw.get(name))
        for name, cls in _SECTION_TYPES.items()
    }
    regime = raw.get("regime", "noise_limited")
    if not isinstance(regime, str):
        raise ConfigError(f"regime: expected a string, got {regime!r}")
    try:
        cfg = ScenarioConfig(regime=regime, **sections)
        cfg.network_config()  # surface invariant violations now
        cfg.traffic_model()
        cfg.inference_model()
        cfg.qos_spec()
        cfg.cost_spec()
        cfg.geometry_model()
    except ConfigError:
        raise
    except (ValueError, TypeError) as err:
        raise ConfigError(str(err)) from err
    return cfg


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    except yaml.YAMLError as err:
        raise ConfigError(f"invalid YAML in {path}: {err}") from err
    return parse_config(raw)


def dumps_config(cfg: ScenarioConfig) -> str:
    """Serialize to YAML; parsing the output reproduces cfg exactly."""
    doc = dataclasses.asdict(cfg)
    doc["geometry"]["max_dist_fit"] = list(cfg.geometry.max_dist_fit)
    doc["geometry"]["area_fit"] = list(cfg.geometry.area_fit)
    return _CONFIG_HEADER + yaml.safe_dump(doc, sort_keys=False,
                                           default_flow_style=False)


def default_config() -> ScenarioConfig:
    return ScenarioConfig()


# ---------------------------------------------------------------------------
# Output formatting
# ---------------------------------------------------------------------------

def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(rows: list[dict[str, Any]], columns: list[str], out) -> None:
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(_fmt(row.get(col, "")) for col in columns) + "\n")


def _parse_grid(text: str) -> list[float]:
    """Grid syntax: comma list '1,2,4' or range 'lo:hi:n' (inclusive, linear)."""
    text = text.strip()
    if not text:
        raise ConfigError("empty grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range grid must be lo:hi:n, got {text!r}")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            raise ConfigError(f"grid needs at least one point, got n={n}")
        return [float(v) for v in np.linspace(lo, hi, n)]
    return [float(v) for v in text.split(",")]


def _solution_row(cfg: ScenarioConfig, sol: DimensionSolution,
                  success: float) -> dict[str, Any]:
    lam = cfg.traffic.lambda_rate
    return {
        "b_opt_hz": sol.b_opt,
        "h_opt_tflops": sol.h_opt,
        "t_opt_s": sol.t_opt,
        "a_opt_km2": sol.a_opt,
        "r_fixed_km": sol.r_fixed,
        "s_fixed_px": sol.s_fixed,
        "rho_opt": sol.rho_opt,
        "objective": sol.objective,
        "certificate": sol.certificate.value,
        "per_frame_compute_tflop": sol.h_opt / (lam * sol.a_opt),
        "success_probability": success,
    }


_SOLUTION_COLUMNS = [
    "b_opt_hz", "h_opt_tflops", "t_opt_s", "a_opt_km2", "r_fixed_km",
    "s_fixed_px", "rho_opt", "objective", "certificate",
    "per_frame_compute_tflop", "success_probability",
]


def _solve_scenario(cfg: ScenarioConfig) -> tuple[DimensionSolution, float]:
    sol = solve(cfg.network_config(), cfg.traffic_model(),
                cfg.inference_model(), cfg.qos_spec(), cfg.cost_spec(),
                cfg.geometry_model(), cfg.regime_enum())
    success = end_to_end_success_prob(
        sol, cfg.network_config(), cfg.traffic_model(), cfg.inference_model(),
        cfg.qos_spec(), cfg.geometry_model())
    return sol, success


def _replace_axis(cfg: ScenarioConfig, axis: str, value: float) -> ScenarioConfig:
    if axis == "lambda_b":
        return dataclasses.replace(
            cfg, network=dataclasses.replace(cfg.network, lambda_b=value))
    if axis == "lambda":
        return dataclasses.replace(
            cfg, traffic=dataclasses.replace(cfg.traffic, lambda_rate=value))
    if axis == "beta1":
        return dataclasses.replace(
            cfg, cost=dataclasses.replace(cfg.cost, beta1=value))
    if axis == "delta":
        return dataclasses.replace(
            cfg, network=dataclasses.replace(cfg.network, delta=value))
    raise ConfigError(f"unsupported dimension sweep axis {axis!r}")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_capacity_sweep(
    cfg: ScenarioConfig,
    axis: str,
    grid: list[float],
    bandwidth_hz: float,
    distance_km: float,
) -> tuple[list[dict[str, Any]], list[str]]:
    """Ergodic capacity along one axis (r, bandwidth, antennas, or epsilon)."""
    if not grid:
        raise ConfigError("capacity sweep requires a nonempty grid")
    if axis not in ("r", "bandwidth", "antennas", "epsilon"):
        raise ConfigError(f"unsupported capacity sweep axis {axis!r}")
    rows = []
    for value in grid:
        net = cfg.network_config()
        b, r = bandwidth_hz, distance_km
        if axis == "r":
            r = value
        elif axis == "bandwidth":
            b = value
        elif axis == "antennas":
            net = dataclasses.replace(net, m_antennas=int(value))
        elif axis == "epsilon":
            net = dataclasses.replace(net, epsilon=value)
        cap = (capacity_nl(net, b, r) if cfg.regime == "noise_limited"
               else capacity_il(net, b, r))
        rows.append({
            axis: value,
            "bandwidth_hz": b,
            "r_km": r,
            "m_antennas": net.m_antennas,
            "epsilon": net.epsilon,
            "capacity_bit_s": cap,
            "tx_power_w": tx_power(net, r),
            "r_threshold_km": net.r_threshold_km,
            "regime": cfg.regime,
        })
    columns = [axis] + [c for c in
                        ("bandwidth_hz", "r_km", "m_antennas", "epsilon",
                         "capacity_bit_s", "tx_power_w", "r_threshold_km",
                         "regime") if c != axis]
    return rows, columns


def cmd_dimension(
    cfg: ScenarioConfig,
    axis: str | None = None,
    grid: list[float] | None = None,
    threads: int = 1,
) -> tuple[Any, int]:
    """Single solve (JSON document) or sweep (CSV rows) of the dimensioning
    problem.  Returns (payload, exit_code)."""
    if axis is None:
        try:
            sol, success = _solve_scenario(cfg)
        except InfeasibleError as err:
            return {"status": "infeasible", "binding_constraint": err.cause,
                    "detail": str(err)}, EXIT_INFEASIBLE
        residuals = constraint_residuals(
            sol, cfg.network_config(), cfg.traffic_model(),
            cfg.inference_model(), cfg.qos_spec(), cfg.geometry_model())
        consts = compute_constants(
            cfg.network_config(), cfg.traffic_model(), cfg.inference_model(),
            cfg.qos_spec(), cfg.geometry_model())
        doc = {
            "status": "ok",
            "regime": cfg.regime,
            "solution": _solution_row(cfg, sol, success),
            "constraint_residuals": residuals,
            "constants": dataclasses.asdict(consts),
        }
        return doc, EXIT_OK

    if not grid:
        raise ConfigError("dimension sweep requires a nonempty grid")

    def solve_point(value: float) -> dict[str, Any]:
        point_cfg = _replace_axis(cfg, axis, value)
        row: dict[str, Any] = {axis: value}
        try:
            sol, success = _solve_scenario(point_cfg)
            row.update(_solution_row(point_cfg, sol, success))
            row["status"] = "ok"
        except InfeasibleError as err:
            row["status"] = f"infeasible:{err.cause}"
        return row

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(solve_point, grid))
    else:
        rows = [solve_point(v) for v in grid]
    columns = [axis] + _SOLUTION_COLUMNS + ["status"]
    code = EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_INFEASIBLE
    return (rows, columns), code


def cmd_pareto(
    cfg: ScenarioConfig,
    beta1_grid: list[float],
    threads: int = 1,
) -> tuple[tuple[list[dict[str, Any]], list[str]], int]:
    """Pareto frontier sweep over the cost trade-off weight."""
    if not beta1_grid:
        raise ConfigError("pareto requires a nonempty beta1 grid")
    points = pareto_sweep(
        cfg.network_config(), cfg.traffic_model(), cfg.inference_model(),
        cfg.qos_spec(), cfg.cost_spec(), beta1_grid, cfg.geometry_model(),
        cfg.regime_enum())
    lam_b = cfg.network.lambda_b
    lam = cfg.traffic.lambda_rate
    rows = []
    for p in points:
        row: dict[str, Any] = {"beta1": p.beta1}
        if p.solution is not None:
            sol = p.solution
            bw_cost = p.beta1 * lam * sol.b_opt
            compute_cost = ((1.0 - p.beta1) * cfg.cost.beta2 * lam_b
                            * sol.h_opt * dimension.TFLOPS_TO_FLOPS)
            row.update({
                "b_opt_hz": sol.b_opt,
                "h_opt_tflops": sol.h_opt,
                "comm_cost_per_km2": lam_b * sol.b_opt,
                "compute_cost_per_km2": lam_b * sol.h_opt,
                "objective": sol.objective,
                "certificate": sol.certificate.value,
                "cost_ratio_bw_over_compute":
                    bw_cost / compute_cost if compute_cost > 0 else math.inf,
                "status": "ok",
            })
        else:
            row["status"] = f"error:{p.error}"
        rows.append(row)
    columns = ["beta1", "b_opt_hz", "h_opt_tflops", "comm_cost_per_km2",
               "compute_cost_per_km2", "objective", "certificate",
               "cost_ratio_bw_over_compute", "status"]
    code = EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_INFEASIBLE
    return (rows, columns), code


def _ks_distance(samples: np.ndarray, cdf: Callable[[float], float]) -> float:
    xs = np.sort(samples)
    n = len(xs)
    theo = np.array([cdf(float(x)) for x in xs])
    hi = np.abs(theo - np.arange(1, n + 1) / n).max()
    lo = np.abs(theo - np.arange(0, n) / n).max()
    return float(max(hi, lo))


def cmd_validate(
    cfg: ScenarioConfig,
    which: str,
    n: int,
    seed: SimSeed,
) -> tuple[list[str], int]:
    """Run one Monte Carlo oracle against its closed form; returns report
    lines and an exit code (0 all-pass, 4 any-fail)."""
    if n <= 0:
        raise ConfigError(f"validation sample count must be positive, got {n}")
    net = cfg.network_config()
    geom = cfg.geometry_model()
    lines: list[str] = []
    ok = True

    def record(name: str, passed: bool, detail: str) -> None:
        nonlocal ok
        ok &= passed
        lines.append(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")

    if which == "geometry":
        half_width = 0.5 * math.sqrt(n / net.lambda_b) + 8.0 / math.sqrt(net.lambda_b)
        window = SimWindow(half_width=half_width,
                           guard_margin=6.0 / math.sqrt(net.lambda_b))
        g = empirical_geometry(net.lambda_b, window, seed)
        ks = _ks_distance(g.nearest, distance_cdf)
        record("nearest_distance_ks", ks < 0.01, f"KS={ks:.4f} < 0.01 at n={len(g.nearest)}")
        sup_r = _ks_distance(g.max_dist, lambda x: gen_gamma_cdf(geom.max_dist_fit, x))
        record("max_distance_fit", sup_r < 0.03, f"sup={sup_r:.4f} < 0.03 at n={len(g.max_dist)}")
        sup_a = _ks_distance(g.area, lambda x: gen_gamma_cdf(geom.area_fit, x))
        record("cell_area_fit", sup_a < 0.03, f"sup={sup_a:.4f} < 0.03 at n={len(g.area)}")
    elif which == "capacity_nl":
        consts = compute_constants(net, cfg.traffic_model(),
                                   cfg.inference_model(), cfg.qos_spec(), geom)
        for b, r in [(1e6, consts.kappa3), (1e6, 1.0), (3e6, consts.kappa3)]:
            cf = capacity_nl(net, b, r)
            mc = mc_capacity_nl(net, b, r, n, seed)
            rel = abs(cf - mc.mean) / cf
            record(f"capacity_nl_b{b:.0f}_r{r:.3f}", rel < 0.01,
                   f"closed={cf:.6g} mc={mc.mean:.6g}+-{mc.std_error:.3g} rel={rel:.3%}")
    elif which == "capacity_il":
        consts = compute_constants(net, cfg.traffic_model(),
                                   cfg.inference_model(), cfg.qos_spec(), geom)
        window = SimWindow(half_width=30.0 / math.sqrt(net.lambda_b / net.delta))
        for b, r in [(1e6, consts.kappa3)]:
            cf = capacity_il(net, b, r)
            mc = mc_capacity_il(net, b, r, window, n, seed)
            rel = abs(cf - mc.mean) / cf
            record(f"capacity_il_b{b:.0f}_r{r:.3f}", rel < 0.03,
                   f"closed={cf:.6g} mc={mc.mean:.6g}+-{mc.std_error:.3g} rel={rel:.3%}")
    elif which == "queue":
        t_s = 0.1
        reps = 20
        per_rep = max(1, n // reps)
        for rho in (0.3, 0.6, 0.9):
            for mult in (0.0, 0.5, 1.0, 2.0, 5.0):
                t = mult * t_s
                vals = []
                for k in range(reps):
                    w = sim_mdone_queue(rho, t_s, per_rep,
                                        SimSeed(seed=seed.seed,
                                                stream_id=seed.stream_id + 1 + k))
                    vals.append(float((w > t).mean()))
                arr = np.array(vals)
                emp = float(arr.mean())
                se = float(arr.std(ddof=1) / math.sqrt(reps))
                ana = mdone_wait_ccdf(rho, t_s, t)
                half = max(1.96 * se, 3.7 / (per_rep * reps))
                record(f"queue_rho{rho}_t{mult}", abs(emp - ana) <= half,
                       f"emp={emp:.5f}+-{se:.5f} analytic={ana:.5f}")
    elif which == "end_to_end":
        try:
            sol, success = _solve_scenario(cfg)
        except InfeasibleError as err:
            record("end_to_end", False, f"solver infeasible: {err}")
            return lines, EXIT_VALIDATION
        est = sim_end_to_end(sol, net, cfg.traffic_model(),
                             cfg.inference_model(), cfg.qos_spec(), geom,
                             n_frames=n, seed=seed)
        omega = cfg.qos.omega_min
        ci = 1.96 * est.std_error
        record("end_to_end_guarantee", est.mean >= omega - ci,
               f"sim={est.mean:.5f}+-{est.std_error:.5f} >= omega_min={omega} - CI")
        record("end_to_end_analytic", abs(est.mean - success) <= max(ci, 1e-4),
               f"sim={est.mean:.5f} analytic={success:.5f}")
    else:
        raise ConfigError(f"unknown validation target {which!r}")
    return lines, EXIT_OK if ok else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgedim",
        description="Dimension wireless bandwidth and edge compute for "
                    "multi-cell video analytics.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="YAML scenario file (defaults: baseline)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--threads", type=int, default=1,
                       help="parallel sweep evaluation")

    p = sub.add_parser("capacity-sweep", help="ergodic capacity along one axis")
    common(p)
    p.add_argument("--axis", required=True,
                   choices=["r", "bandwidth", "antennas", "epsilon"])
    p.add_argument("--grid", required=True,
                   help="comma list '0.1,0.5,1' or range 'lo:hi:n'")
    p.add_argument("--bandwidth-hz", type=float, default=1e6)
    p.add_argument("--distance-km", type=float, default=1.0)

    p = sub.add_parser("dimension", help="solve the dimensioning problem")
    common(p)
    p.add_argument("--axis", choices=["lambda_b", "lambda", "beta1", "delta"])
    p.add_argument("--grid", help="sweep grid (requires --axis)")

    p = sub.add_parser("pareto", help="sweep the cost trade-off weight")
    common(p)
    p.add_argument("--grid", default="0.05:0.95:19",
                   help="beta1 grid, default 19 points in (0,1)")

    p = sub.add_parser("validate", help="Monte Carlo vs closed forms")
    common(p)
    p.add_argument("--which", required=True,
                   choices=["geometry", "capacity_nl", "capacity_il",
                            "queue", "end_to_end"])
    p.add_argument("--n", type=int, required=True, help="sample budget")

    p = sub.add_parser("write-config", help="emit the baseline config file")
    common(p)
    return parser


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_to_csv(rows: list[dict[str, Any]], columns: list[str]) -> str:
    import io
    buf = io.StringIO()
    write_csv(rows, columns, buf)
    return buf.getvalue()


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else default_config()
        if args.seed is not None:
            cfg = dataclasses.replace(
                cfg, seed=dataclasses.replace(cfg.seed, seed=args.seed))

        if args.command == "write-config":
            _emit(dumps_config(cfg), args.out)
            return EXIT_OK

        if args.command == "capacity-sweep":
            rows, columns = cmd_capacity_sweep(
                cfg, args.axis, _parse_grid(args.grid),
                args.bandwidth_hz, args.distance_km)
            _emit(_rows_to_csv(rows, columns), args.out)
            return EXIT_OK

        if args.command == "dimension":
            if args.axis is not None and args.grid is None:
                raise ConfigError("--axis requires --grid")
            if args.axis is None:
                doc, code = cmd_dimension(cfg)
                _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
                return code
            (rows, columns), code = cmd_dimension(
                cfg, args.axis, _parse_grid(args.grid), threads=args.threads)
            _emit(_rows_to_csv(rows, columns), args.out)
            return code

        if args.command == "pareto":
            (rows, columns), code = cmd_pareto(
                cfg, _parse_grid(args.grid), threads=args.threads)
            _emit(_rows_to_csv(rows, columns), args.out)
            return code

        if args.command == "validate":
            lines, code = cmd_validate(cfg, args.which, args.n, cfg.sim_seed())
            _emit("\n".join(lines) + "\n", args.out)
            return code
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleError as err:
        print(json.dumps({"status": "infeasible", "binding_constraint": err.cause,
                          "detail": str(err)}, sort_keys=True), file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
