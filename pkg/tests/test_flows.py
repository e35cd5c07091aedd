"""
Tests for Euler flows, integrators and conservation monitors
"""

import numpy as np
import pytest

from src.algebra.liealg import (
    BlockPartition, SpectralParams, project, sample_generic, scalar_product, wedge
)
from src.core.config import config
from src.core.errors import ConvergenceError, ParameterError
from src.dynamics.flows import (
    IntegratorConfig, Trajectory, euler_field, integrate, lax_residual, lax_spectrum,
    noether_drift, operator_field, relative_drift, rigid_body_field, singular_flow_field,
    spectrum_drift
)
from src.dynamics.sectional import MetricKind, MetricSpec, OperatorKind, SectionalOperator
from src.invariants.families import casimir_family, manakov_family


@pytest.fixture
def regular5():
    return SpectralParams(BlockPartition.regular(5), (0.2, 0.5, 0.9, 1.4, 2.0),
                          (0.1, 0.3, 0.8, 1.1, 1.7))


@pytest.fixture
def block22():
    return SpectralParams(BlockPartition((2, 2)), (0.5, 1.0), (0.25, 1.0))


class TestFields:
    def test_eigen_direction_is_equilibrium(self, regular3, e23):
        op = SectionalOperator(OperatorKind.REGULAR, regular3)
        assert np.abs(euler_field(e23, op)).max() == 0.0

    def test_zero_state(self, regular3):
        op = SectionalOperator(OperatorKind.REGULAR, regular3)
        assert np.abs(euler_field(np.zeros((3, 3)), op)).max() == 0.0

    def test_normal_metric_is_stationary(self):
        op = MetricSpec(MetricKind.NORMAL, BlockPartition.regular(3)).to_operator()
        M = sample_generic(8, 'so', 3)
        assert np.abs(euler_field(M, op)).max() == 0.0

    @pytest.mark.parametrize("parts", [(2, 2), (1, 1, 2), (1, 2, 3)])
    def test_split_field_matches_euler_field(self, parts):
        params = SpectralParams.default(BlockPartition(parts))
        op = SectionalOperator(OperatorKind.SINGULAR, params)
        for seed in range(100):
            M = sample_generic(seed, 'so', params.n)
            field = euler_field(M, op)
            scale = max(1.0, float(np.linalg.norm(M) * np.linalg.norm(op.apply(M))))
            assert np.linalg.norm(singular_flow_field(M, op) - field) <= 1e-12 * scale

    def test_transversal_start_keeps_isotropy_still(self, block22):
        op = SectionalOperator(OperatorKind.SINGULAR, block22)
        M = sample_generic(3, 'v', 4, block22.partition)
        iso, _ = project(singular_flow_field(M, op), block22.partition)
        assert np.abs(iso).max() <= 1e-15

    def test_rigid_body_entrywise_field(self):
        op = SectionalOperator.rigid_body(BlockPartition.regular(4), (0.5, 1.0, 1.5, 2.5))
        M = sample_generic(9, 'so', 4)
        np.testing.assert_allclose(rigid_body_field(M, op.params), euler_field(M, op), atol=1e-14)

    def test_rigid_body_single_block_is_static(self):
        op = SectionalOperator.rigid_body(BlockPartition((3,)), (2.0,))
        M = sample_generic(9, 'so', 3)
        assert np.abs(rigid_body_field(M, op.params)).max() == 0.0

    def test_rigid_body_single_wedge_is_static(self):
        op = SectionalOperator.rigid_body(BlockPartition.regular(4), (0.5, 1.0, 1.5, 2.5))
        assert np.abs(rigid_body_field(2.0 * wedge(4, 1, 3), op.params)).max() == 0.0


class TestIntegrate:
    def test_zero_field_gives_constant_trajectory(self):
        M0 = sample_generic(1, 'so', 3)
        cfg = IntegratorConfig('rk4', 0.1, 1.0, 2)
        traj = integrate(lambda M: np.zeros_like(M), M0, cfg)
        assert len(traj) == 6
        assert all(np.array_equal(M, M0) for M in traj.states)
        assert traj.meta['method'] == 'rk4'

    def test_manakov_integrals_are_conserved(self, regular5):
        op = SectionalOperator(OperatorKind.REGULAR, regular5)
        M0 = sample_generic(12, 'so', 5)
        traj = integrate(operator_field(op), M0, IntegratorConfig('rk4', 1e-3, 1.0, 100))
        for member in manakov_family(regular5):
            assert relative_drift([member.evaluate(M) for M in traj.states]) <= 1e-9
        assert spectrum_drift(traj, regular5, (-1.5, 0.5, 2.0)) <= 1e-8

    def test_noether_charge_is_conserved(self, block22):
        op = SectionalOperator(OperatorKind.SINGULAR, block22)
        M0 = sample_generic(4, 'so', 4)
        traj = integrate(operator_field(op), M0, IntegratorConfig('rk4', 1e-3, 1.0, 50))
        assert noether_drift(traj, block22.partition) <= 1e-10

    def test_transversal_start_stays_transversal(self, block22):
        op = SectionalOperator(OperatorKind.SINGULAR, block22)
        M0 = sample_generic(4, 'v', 4, block22.partition)
        traj = integrate(operator_field(op), M0, IntegratorConfig('rk4', 1e-3, 1.0, 50))
        iso, _ = project(traj.final, block22.partition)
        assert np.linalg.norm(iso) <= 1e-8

    def test_regular_partition_has_no_noether_drift(self, regular5):
        op = SectionalOperator(OperatorKind.REGULAR, regular5)
        traj = integrate(operator_field(op), sample_generic(2, 'so', 5),
                         IntegratorConfig('rk4', 1e-2, 0.1, 1))
        assert noether_drift(traj, regular5.partition) == 0.0

    def test_midpoint_conserves_casimirs(self, regular3):
        op = SectionalOperator(OperatorKind.REGULAR, regular3)
        traj = integrate(operator_field(op), sample_generic(5, 'so', 3),
                         IntegratorConfig('implicit_midpoint', 1e-2, 1.0, 10))
        for member in casimir_family(3):
            assert relative_drift([member.evaluate(M) for M in traj.states]) <= 1e-10

    def test_midpoint_reports_the_failing_step(self, regular3):
        config.tolerances = config.tolerances.override('midpoint_max_iter', 1)
        op = SectionalOperator(OperatorKind.REGULAR, regular3)
        with pytest.raises(ConvergenceError) as info:
            integrate(operator_field(op), sample_generic(5, 'so', 3),
                      IntegratorConfig('implicit_midpoint', 1e-2, 1.0, 10))
        assert info.value.step == 1

    def test_rk4_is_fourth_order(self):
        op = SectionalOperator.rigid_body(BlockPartition.regular(4), (0.5, 1.0, 1.5, 2.5))
        field_fn = operator_field(op)
        M0 = sample_generic(9, 'so', 4)
        reference = integrate(field_fn, M0, IntegratorConfig('rk4', 0.0025, 5.0, 2000)).final

        errors, drifts = [], []
        for h in (0.04, 0.02):
            traj = integrate(field_fn, M0, IntegratorConfig('rk4', h, 5.0, 1))
            errors.append(np.linalg.norm(traj.final - reference))
            drifts.append(relative_drift([op.hamiltonian(M) for M in traj.states]))
        assert errors[0] / errors[1] >= 8.0
        assert drifts[0] / drifts[1] >= 8.0

    @pytest.mark.slow
    def test_long_horizon_casimir(self, regular3):
        op = SectionalOperator(OperatorKind.REGULAR, regular3)
        traj = integrate(operator_field(op), sample_generic(5, 'so', 3),
                         IntegratorConfig('rk4', 1e-3, 100.0, 1000))
        assert relative_drift([scalar_product(M, M) for M in traj.states]) <= 1e-8

    @pytest.mark.slow
    def test_long_horizon_manakov_regular(self, regular5):
        op = SectionalOperator(OperatorKind.REGULAR, regular5)
        traj = integrate(operator_field(op), sample_generic(12, 'so', 5),
                         IntegratorConfig('rk4', 1e-3, 100.0, 1000))
        for member in manakov_family(regular5):
            assert relative_drift([member.evaluate(M) for M in traj.states]) <= 1e-6
        assert relative_drift([op.hamiltonian(M) for M in traj.states]) <= 1e-6
        assert spectrum_drift(traj, regular5, config.sampling.lax_lambdas) <= 1e-6

    @pytest.mark.parametrize("horizon", [2.0, pytest.param(100.0, marks=pytest.mark.slow)])
    def test_rigid_body_blocks_conserve_integrals(self, horizon):
        partition = BlockPartition((3, 3))
        op = SectionalOperator.rigid_body(partition, (1.0, 2.0))
        traj = integrate(operator_field(op), sample_generic(6, 'so', 6),
                         IntegratorConfig('rk4', 1e-3, horizon, 100))
        for member in manakov_family(op.params):
            assert relative_drift([member.evaluate(M) for M in traj.states]) <= 1e-6
        assert relative_drift([op.hamiltonian(M) for M in traj.states]) <= 1e-6
        assert spectrum_drift(traj, op.params, config.sampling.lax_lambdas) <= 1e-6
        assert noether_drift(traj, partition) <= 1e-8

    @pytest.mark.parametrize("parts", [(2, 2), (3, 3)])
    def test_stiefel_flow_stays_in_p(self, parts):
        partition = BlockPartition(parts)
        op = MetricSpec(MetricKind.STIEFEL, partition, kappa=2.0, chi=1.5).to_operator()
        M0 = sample_generic(7, 'p', partition.n, partition, 1)
        traj = integrate(operator_field(op), M0, IntegratorConfig('rk4', 1e-3, 2.0, 100))
        first = slice(0, parts[0])
        assert np.abs(traj.final[first, first]).max() <= 1e-10
        for member in manakov_family(op.params):
            assert relative_drift([member.evaluate(M) for M in traj.states]) <= 1e-6
        assert noether_drift(traj, partition) <= 1e-8

    @pytest.mark.parametrize("kwargs", [
        {'step': 0.0}, {'horizon': -1.0}, {'step': 2.0, 'horizon': 1.0}, {'stride': 0},
    ])
    def test_invalid_config(self, kwargs):
        with pytest.raises(ParameterError):
            IntegratorConfig(**kwargs)


class TestLax:
    def test_zero_lambda_reduces_to_euler(self, regular5):
        op = SectionalOperator(OperatorKind.REGULAR, regular5)
        assert lax_residual(sample_generic(3, 'so', 5), op, 0.0) == 0.0

    def test_identity_holds_for_random_lambdas(self, regular5, rng):
        op = SectionalOperator(OperatorKind.REGULAR, regular5)
        M = sample_generic(3, 'so', 5)
        for lam in rng.uniform(-2.0, 2.0, size=5):
            assert lax_residual(M, op, float(lam)) <= 1e-12 * 10.0

    def test_violating_operator_has_residual(self, regular3):
        normal = SpectralParams(regular3.partition, (1.0, 2.0, 3.0), (1.0, 2.0, 3.0))
        op = SectionalOperator(OperatorKind.REGULAR, normal)
        M = sample_generic(3, 'so', 3)
        assert lax_residual(M, op, 1.0, lax_params=regular3) > 1e-3

    def test_spectrum_of_single_wedge(self, regular3, e12):
        eigs = lax_spectrum(e12, regular3, 0.0)
        np.testing.assert_allclose(sorted(eigs.imag), [-1.0, 0.0, 1.0], atol=1e-14)
        np.testing.assert_allclose(eigs.real, 0.0, atol=1e-14)


class TestTrajectory:
    def test_times_must_increase(self):
        states = np.zeros((2, 3, 3))
        with pytest.raises(ParameterError):
            Trajectory(np.array([0.0, 0.0]), states)

    def test_csv_layout(self, e12):
        traj = Trajectory(np.array([0.0]), np.array([e12]))
        assert traj.csv_header() == ['time', 'M_1_2', 'M_1_3', 'M_2_3']
        assert list(traj.csv_rows()) == [[0.0, 1.0, 0.0, 0.0]]

    def test_relative_drift(self):
        assert relative_drift([2.0, 2.5, 1.0]) == pytest.approx(0.5)
        assert relative_drift([0.0, 1e-3]) == pytest.approx(1e-3)
