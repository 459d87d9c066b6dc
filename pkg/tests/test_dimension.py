"""Dimensioning tests: constant pipeline, solver feasibility and activeness,
certificate logic, Pareto monotonicity, and infeasibility causes.  The
randomized grid-oracle battery and figure-trend properties run in the
acceptance suite."""

import dataclasses
import math

import pytest

from edgedim.dimension import (
    Certificate,
    CostSpec,
    DimensionSolution,
    InfeasibleError,
    QosSpec,
    Regime,
    TFLOPS_TO_FLOPS,
    check_optimality,
    compute_constants,
    constraint_residuals,
    end_to_end_success_prob,
    pareto_sweep,
    required_bandwidth,
    solve,
)
from edgedim.geometry import GeometryModel, gen_gamma_quantile, MAX_DISTANCE_FIT
from edgedim.offload import mdone_wait_ccdf
from edgedim.specfun import lambert_w0


@pytest.fixture(scope="module")
def baseline_solution(baseline_network, baseline_traffic, baseline_inference,
                      baseline_qos, baseline_cost):
    return solve(baseline_network, baseline_traffic, baseline_inference,
                 baseline_qos, baseline_cost)


class TestComputeConstants:
    def test_payload_factor(self, baseline_network, baseline_traffic,
                            baseline_inference, baseline_qos):
        consts = compute_constants(baseline_network, baseline_traffic,
                                   baseline_inference, baseline_qos)
        assert consts.kappa1 == pytest.approx(12.0, rel=1e-15)

    def test_load_normalized_traffic(self, baseline_network, baseline_traffic,
                                     baseline_inference, baseline_qos):
        consts = compute_constants(baseline_network, baseline_traffic,
                                   baseline_inference, baseline_qos)
        assert consts.kappa2 == pytest.approx(100.0 / 0.99, rel=1e-15)

    def test_min_resolution_constant(self, baseline_network, baseline_traffic,
                                     baseline_inference, baseline_qos):
        consts = compute_constants(baseline_network, baseline_traffic,
                                   baseline_inference, baseline_qos)
        assert consts.kappa5 == pytest.approx(424.42, abs=5e-3)

    def test_geometry_constants_delegate(self, baseline_network,
                                         baseline_traffic, baseline_inference,
                                         baseline_qos):
        consts = compute_constants(baseline_network, baseline_traffic,
                                   baseline_inference, baseline_qos)
        expected_k3 = gen_gamma_quantile(MAX_DISTANCE_FIT, 0.999) / math.sqrt(2.0)
        assert consts.kappa3 == pytest.approx(expected_k3, rel=1e-12)

    def test_density_mismatch_rejected(self, baseline_network, baseline_traffic,
                                       baseline_inference, baseline_qos):
        with pytest.raises(ValueError):
            compute_constants(baseline_network, baseline_traffic,
                              baseline_inference, baseline_qos,
                              GeometryModel(lambda_b=1.0))


class TestRequiredBandwidth:
    def test_meets_rate_minimally(self, baseline_network):
        b = required_bandwidth(baseline_network, Regime.NOISE_LIMITED, 1.0, 5e6)
        from edgedim.capacity import capacity_nl
        assert capacity_nl(baseline_network, b, 1.0) >= 5e6
        assert capacity_nl(baseline_network, b * (1 - 1e-9), 1.0) < 5e6 * (1 + 1e-9)

    def test_ceiling_raises(self, baseline_network):
        with pytest.raises(InfeasibleError) as err:
            required_bandwidth(baseline_network, Regime.NOISE_LIMITED, 1.0, 1e18)
        assert err.value.cause == "bandwidth"


class TestSolve:
    def test_constraints_satisfied(self, baseline_solution, baseline_network,
                                   baseline_traffic, baseline_inference,
                                   baseline_qos):
        residuals = constraint_residuals(
            baseline_solution, baseline_network, baseline_traffic,
            baseline_inference, baseline_qos)
        for name, slack in residuals.items():
            assert slack >= -1e-6, f"{name} violated: {slack}"

    def test_active_constraints_at_optimum(self, baseline_solution,
                                           baseline_network, baseline_traffic,
                                           baseline_inference, baseline_qos):
        # No wasted budget: the wait-tail and at least one deadline branch
        # sit on their bounds.
        residuals = constraint_residuals(
            baseline_solution, baseline_network, baseline_traffic,
            baseline_inference, baseline_qos)
        assert residuals["wait_tail"] <= 1e-6
        assert min(residuals["deadline_fractional"],
                   residuals["deadline_peak"]) <= 1e-6

    def test_boundary_variables(self, baseline_solution, baseline_network,
                                baseline_traffic, baseline_inference,
                                baseline_qos):
        consts = compute_constants(baseline_network, baseline_traffic,
                                   baseline_inference, baseline_qos)
        assert baseline_solution.a_opt == consts.kappa4
        assert baseline_solution.r_fixed == consts.kappa3
        assert baseline_solution.s_fixed == consts.kappa5

    def test_load_consistency(self, baseline_solution, baseline_traffic,
                              baseline_inference):
        work = (baseline_inference.c1 * baseline_solution.s_fixed**3
                + baseline_inference.c2)
        rho = (baseline_traffic.lambda_rate * baseline_solution.a_opt * work
               / baseline_solution.h_opt)
        assert baseline_solution.rho_opt == pytest.approx(rho, rel=1e-12)
        assert baseline_solution.rho_opt <= 0.99

    def test_objective_composition(self, baseline_solution, baseline_network,
                                   baseline_traffic, baseline_cost):
        bw_term = (baseline_cost.beta1 * baseline_traffic.lambda_rate
                   * baseline_solution.b_opt)
        compute_term = ((1 - baseline_cost.beta1) * baseline_cost.beta2
                        * baseline_network.lambda_b
                        * baseline_solution.h_opt * TFLOPS_TO_FLOPS)
        area_term = baseline_cost.vartheta * baseline_solution.a_opt
        assert baseline_solution.objective == pytest.approx(
            bw_term + compute_term + area_term, rel=1e-12)

    def test_success_probability_feasible(self, baseline_solution,
                                          baseline_network, baseline_traffic,
                                          baseline_inference, baseline_qos):
        p = end_to_end_success_prob(baseline_solution, baseline_network,
                                    baseline_traffic, baseline_inference,
                                    baseline_qos)
        assert p >= 0.8 - 1e-6

    def test_infeasible_deadline(self, baseline_network, baseline_traffic,
                                 baseline_inference, baseline_qos,
                                 baseline_cost):
        # Deadline below the service time achievable at the compute ceiling.
        qos = dataclasses.replace(baseline_qos, d_max=1e-12)
        with pytest.raises(InfeasibleError) as err:
            solve(baseline_network, baseline_traffic, baseline_inference,
                  qos, baseline_cost)
        assert err.value.cause == "deadline"

    def test_infeasible_bandwidth(self, baseline_network, baseline_traffic,
                                  baseline_inference, baseline_qos,
                                  baseline_cost):
        with pytest.raises(InfeasibleError) as err:
            solve(baseline_network, baseline_traffic, baseline_inference,
                  baseline_qos, baseline_cost, b_ceiling_hz=1e4)
        assert err.value.cause == "bandwidth"

    def test_matches_dense_scan(self, baseline_network, baseline_traffic,
                                baseline_inference, baseline_qos,
                                baseline_cost, baseline_solution):
        # 1-D golden section vs a dense local H-scan around the optimum.
        import numpy as np
        from edgedim.dimension import _Candidate  # noqa: F401
        from edgedim.offload import inference_work, mdone_wait_quantile
        consts = compute_constants(baseline_network, baseline_traffic,
                                   baseline_inference, baseline_qos)
        work = inference_work(baseline_inference, consts.kappa5)
        payload = consts.kappa1 * consts.kappa5**2
        best = math.inf
        for h in np.linspace(baseline_solution.h_opt * 0.9,
                             baseline_solution.h_opt * 1.1, 400):
            rho = baseline_traffic.lambda_rate * consts.kappa4 * work / h
            if rho >= 0.99:
                continue
            t_s = work / h
            t_w = mdone_wait_quantile(rho, t_s, 0.2)
            tau = baseline_qos.d_max - t_w - t_s
            if tau <= 0:
                continue
            b = required_bandwidth(baseline_network, Regime.NOISE_LIMITED,
                                   consts.kappa3, payload / tau)
            cost_val = (0.5 * 100.0 * b + 0.5 * 1e-6 * 2.0 * h * TFLOPS_TO_FLOPS
                        + 1.0 * consts.kappa4)
            best = min(best, cost_val)
        assert baseline_solution.objective <= best * (1 + 1e-6)


class TestCertificate:
    def test_baseline_certificate_holds(self, baseline_solution):
        assert baseline_solution.certificate in (Certificate.BOTH,
                                                 Certificate.COND_T,
                                                 Certificate.COND_RHO)

    def test_rho_threshold_value(self):
        assert 1.0 + lambert_w0(-0.8 / math.e) == pytest.approx(0.528, abs=1e-3)

    def test_cond_t_from_large_wait_budget(self, baseline_inference,
                                           baseline_qos):
        sol = DimensionSolution(
            b_opt=1e6, h_opt=10.0, t_opt=2.0 * 0.01365, a_opt=1.0,
            r_fixed=1.0, s_fixed=424.422, rho_opt=0.3,
            objective=1.0, certificate=Certificate.NOT_GUARANTEED,
            regime=Regime.NOISE_LIMITED)
        # t_opt = 2 T_s regardless of the load condition
        assert check_optimality(sol, baseline_inference, baseline_qos) in (
            Certificate.COND_T, Certificate.BOTH)

    def test_not_guaranteed_when_both_fail(self, baseline_inference,
                                           baseline_qos):
        sol = DimensionSolution(
            b_opt=1e6, h_opt=10.0, t_opt=0.0, a_opt=1.0,
            r_fixed=1.0, s_fixed=424.422, rho_opt=0.3,
            objective=1.0, certificate=Certificate.NOT_GUARANTEED,
            regime=Regime.NOISE_LIMITED)
        assert check_optimality(sol, baseline_inference,
                                baseline_qos) is Certificate.NOT_GUARANTEED

    def test_cond_rho_threshold_boundary(self, baseline_inference,
                                         baseline_qos):
        rho_min = 1.0 + lambert_w0(-0.8 / math.e)
        sol = DimensionSolution(
            b_opt=1e6, h_opt=100.0, t_opt=0.0, a_opt=1.0,
            r_fixed=1.0, s_fixed=424.422, rho_opt=rho_min + 0.01,
            objective=1.0, certificate=Certificate.NOT_GUARANTEED,
            regime=Regime.NOISE_LIMITED)
        assert check_optimality(sol, baseline_inference, baseline_qos) in (
            Certificate.COND_RHO, Certificate.BOTH)


class TestParetoSweep:
    def test_monotone_trade_off(self, baseline_network, baseline_traffic,
                                baseline_inference, baseline_qos,
                                baseline_cost):
        grid = [0.2, 0.35, 0.5, 0.65, 0.8]
        points = pareto_sweep(baseline_network, baseline_traffic,
                              baseline_inference, baseline_qos, baseline_cost,
                              grid)
        assert [p.beta1 for p in points] == sorted(grid)
        bs = [p.solution.b_opt for p in points]
        hs = [p.solution.h_opt for p in points]
        assert all(a >= b - 1e-9 * a for a, b in zip(bs, bs[1:]))
        assert all(a <= b + 1e-9 * b for a, b in zip(hs, hs[1:]))

    def test_no_mutual_domination(self, baseline_network, baseline_traffic,
                                  baseline_inference, baseline_qos,
                                  baseline_cost):
        points = pareto_sweep(baseline_network, baseline_traffic,
                              baseline_inference, baseline_qos, baseline_cost,
                              [0.3, 0.5, 0.7])
        sols = [p.solution for p in points if p.solution is not None]
        for i, a in enumerate(sols):
            for b in sols[i + 1:]:
                dominates = (a.b_opt <= b.b_opt and a.h_opt <= b.h_opt
                             and (a.b_opt < b.b_opt or a.h_opt < b.h_opt))
                dominated = (b.b_opt <= a.b_opt and b.h_opt <= a.h_opt
                             and (b.b_opt < a.b_opt or b.h_opt < a.h_opt))
                assert not dominates and not dominated

    def test_singleton_grid_reduces_to_solve(self, baseline_network,
                                             baseline_traffic,
                                             baseline_inference, baseline_qos,
                                             baseline_cost,
                                             baseline_solution):
        points = pareto_sweep(baseline_network, baseline_traffic,
                              baseline_inference, baseline_qos, baseline_cost,
                              [0.5])
        assert points[0].solution.b_opt == pytest.approx(
            baseline_solution.b_opt, rel=1e-9)

    def test_invalid_weight_rejected(self, baseline_network, baseline_traffic,
                                     baseline_inference, baseline_qos,
                                     baseline_cost):
        with pytest.raises(ValueError):
            pareto_sweep(baseline_network, baseline_traffic,
                         baseline_inference, baseline_qos, baseline_cost,
                         [0.0, 0.5])


class TestSpecValidation:
    def test_qos_invariants(self):
        with pytest.raises(ValueError):
            QosSpec(d_max=0.0, omega_min=0.8, eta_r=0.999, eta_a=0.999,
                    a_min=0.9, rho_max=0.99)
        with pytest.raises(ValueError):
            QosSpec(d_max=0.5, omega_min=1.0, eta_r=0.999, eta_a=0.999,
                    a_min=0.9, rho_max=0.99)

    def test_cost_invariants(self):
        with pytest.raises(ValueError):
            CostSpec(beta1=1.5, beta2=1e-6, vartheta=1.0)
        with pytest.raises(ValueError):
            CostSpec(beta1=0.5, beta2=0.0, vartheta=1.0)
