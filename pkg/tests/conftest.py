"""Shared fixtures: the baseline scenario used across the suite."""

import pytest

from edgedim.capacity import NetworkConfig
from edgedim.dimension import CostSpec, QosSpec
from edgedim.geometry import GeometryModel
from edgedim.offload import InferenceModel, TrafficModel


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@pytest.fixture(scope="session")
def baseline_network() -> NetworkConfig:
    return NetworkConfig(
        lambda_b=2.0,
        delta=4.0,
        alpha=4.0,
        epsilon=0.5,
        p_ref_w=dbm_to_watts(10.0),
        p_peak_w=dbm_to_watts(23.0),
        n0_w_hz=dbm_to_watts(-174.0),
        f_c_hz=2.4e9,
        m_antennas=16,
    )


@pytest.fixture(scope="session")
def baseline_traffic() -> TrafficModel:
    return TrafficModel(lambda_rate=100.0, theta_bits=24.0, xi_compress=2.0,
                        s_resolution=640.0)


@pytest.fixture(scope="session")
def baseline_inference() -> InferenceModel:
    return InferenceModel(c1=7e-10, c2=0.083, c3=1.0, c4=1.578, c5=6.5e-3,
                          h_capacity=1.0)


@pytest.fixture(scope="session")
def baseline_qos() -> QosSpec:
    return QosSpec(d_max=0.5, omega_min=0.8, eta_r=0.999, eta_a=0.999,
                   a_min=0.9, rho_max=0.99)


@pytest.fixture(scope="session")
def baseline_cost() -> CostSpec:
    return CostSpec(beta1=0.5, beta2=1e-6, vartheta=1.0)


@pytest.fixture(scope="session")
def baseline_geometry() -> GeometryModel:
    return GeometryModel(lambda_b=2.0)
