"""Dimensioning of wireless bandwidth and edge compute for multi-cell
video analytics: closed-form ergodic capacities, queueing tails,
Poisson-Voronoi geometry, a certified convex solver, and Monte Carlo
oracles validating every closed form."""

from .capacity import NetworkConfig, PowerRegime, capacity_il, capacity_nl, tx_power
from .dimension import (
    Certificate,
    CostSpec,
    DerivedConstants,
    DimensionSolution,
    InfeasibleError,
    QosSpec,
    Regime,
    compute_constants,
    end_to_end_success_prob,
    pareto_sweep,
    solve,
)
from .geometry import GeneralizedGamma, GeometryModel, distance_cdf
from .montecarlo import McEstimate, SimSeed, SimWindow
from .offload import (
    InferenceModel,
    TrafficModel,
    accuracy,
    mdone_wait_ccdf,
    mdone_wait_quantile,
    min_resolution,
    service_time,
    uplink_time,
)

__version__ = "0.1.0"

__all__ = [
    "NetworkConfig", "PowerRegime", "capacity_il", "capacity_nl", "tx_power",
    "Certificate", "CostSpec", "DerivedConstants", "DimensionSolution",
    "InfeasibleError", "QosSpec", "Regime", "compute_constants",
    "end_to_end_success_prob", "pareto_sweep", "solve",
    "GeneralizedGamma", "GeometryModel", "distance_cdf",
    "McEstimate", "SimSeed", "SimWindow",
    "InferenceModel", "TrafficModel", "accuracy", "mdone_wait_ccdf",
    "mdone_wait_quantile", "min_resolution", "service_time", "uplink_time",
    "__version__",
]
