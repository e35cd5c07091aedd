"""
Tests for sectional operators and invariant metrics
"""

import numpy as np
import pytest

from src.algebra.liealg import BlockPartition, SpectralParams, sample_generic, wedge
from src.core.errors import MetricPositivityError, ParameterError, SingularDenominatorError
from src.dynamics.sectional import (
    MetricKind, MetricSpec, OperatorKind, SectionalOperator, build_omega,
    check_manakov_condition, hamiltonian_of, manakov_omega, metric_coefficients,
    noether_applicable, rigid_body_omega
)


@pytest.fixture
def two_one():
    """partition (2,1), alpha = (1,2), beta = (1,3)"""
    return SpectralParams(BlockPartition((2, 1)), (1.0, 2.0), (1.0, 3.0))


class TestManakovOmega:
    def test_unit_coefficient(self, regular3, e12):
        np.testing.assert_allclose(manakov_omega(e12, regular3), e12)

    def test_identity_when_b_equals_a(self):
        params = SpectralParams(BlockPartition.regular(4), (1.0, 2.0, 3.0, 4.0), (1.0, 2.0, 3.0, 4.0))
        M = sample_generic(0, 'so', 4)
        np.testing.assert_allclose(manakov_omega(M, params), M)

    def test_squared_spectrum(self):
        params = SpectralParams(BlockPartition.regular(3), (1.0, 2.0, 3.0), (1.0, 4.0, 9.0))
        M = sample_generic(1, 'so', 3)
        Omega = manakov_omega(M, params)
        assert Omega[0, 2] == pytest.approx(4.0 * M[0, 2])
        assert Omega[0, 1] == pytest.approx(3.0 * M[0, 1])

    def test_repeated_entries_name_the_pair(self, two_one):
        with pytest.raises(SingularDenominatorError) as info:
            manakov_omega(wedge(3, 0, 1), two_one)
        assert info.value.pair == (1, 2)
        with pytest.raises(SingularDenominatorError):
            SectionalOperator(OperatorKind.REGULAR, two_one)


class TestSingularOperator:
    def test_isotropy_through_identity(self, two_one):
        op = SectionalOperator(OperatorKind.SINGULAR, two_one)
        np.testing.assert_allclose(op.apply(wedge(3, 0, 1)), wedge(3, 0, 1))

    def test_transversal_coefficient(self, two_one):
        op = SectionalOperator(OperatorKind.SINGULAR, two_one)
        np.testing.assert_allclose(op.apply(wedge(3, 0, 2)), 2.0 * wedge(3, 0, 2))

    def test_normal_case(self):
        params = SpectralParams(BlockPartition((2, 2)), (1.0, 2.0), (1.0, 2.0))
        M = sample_generic(2, 'so', 4)
        op = SectionalOperator(OperatorKind.SINGULAR, params)
        np.testing.assert_allclose(op.apply(M), M)

    def test_interior_must_be_positive(self, two_one):
        with pytest.raises(MetricPositivityError):
            SectionalOperator(OperatorKind.SINGULAR, two_one, np.array([[-1.0]]))

    def test_transversal_must_be_positive(self):
        params = SpectralParams(BlockPartition((2, 1)), (1.0, 2.0), (3.0, 1.0))
        with pytest.raises(MetricPositivityError):
            SectionalOperator(OperatorKind.SINGULAR, params)

    def test_interior_only_for_singular(self, regular3):
        with pytest.raises(ParameterError):
            SectionalOperator(OperatorKind.REGULAR, regular3, np.eye(1))


class TestRigidBody:
    def test_coefficients(self):
        params = SpectralParams(BlockPartition((2, 1)), (1.0, 4.0), (1.0, 2.0))
        np.testing.assert_allclose(rigid_body_omega(wedge(3, 0, 1), params), 0.5 * wedge(3, 0, 1))
        np.testing.assert_allclose(rigid_body_omega(wedge(3, 0, 2), params), wedge(3, 0, 2) / 3.0)

    def test_inverse_relation(self):
        op = SectionalOperator.rigid_body(BlockPartition.regular(4), (0.5, 1.0, 1.5, 2.5))
        M = sample_generic(3, 'so', 4)
        Omega = op.apply(M)
        B = np.diag(op.params.b)
        assert np.abs(B @ Omega + Omega @ B - M).max() <= 1e-13

    def test_dispatch_agrees(self):
        op = SectionalOperator.rigid_body(BlockPartition((2, 2)), (1.0, 2.0))
        M = sample_generic(4, 'so', 4)
        np.testing.assert_allclose(build_omega(M, op), op.apply(M), atol=1e-15)

    def test_needs_positive_betas(self):
        with pytest.raises(MetricPositivityError):
            SectionalOperator.rigid_body(BlockPartition.regular(2), (1.0, -2.0))


class TestManakovCondition:
    def test_holds_for_manakov_operator(self, regular3):
        M = sample_generic(5, 'so', 3)
        assert check_manakov_condition(M, manakov_omega(M, regular3), regular3) <= 1e-12

    def test_fails_for_identity_operator(self, regular3):
        M = sample_generic(5, 'so', 3)
        assert check_manakov_condition(M, M, regular3) > 1e-3

    def test_zero(self, regular3):
        assert check_manakov_condition(np.zeros((3, 3)), np.zeros((3, 3)), regular3) == 0.0


class TestMetrics:
    def test_submersion_coefficient(self, two_one):
        spec = MetricSpec(MetricKind.SUBMERSION, two_one.partition, two_one)
        assert metric_coefficients(spec).transversal[(0, 1)] == pytest.approx(0.5)

    def test_equal_spectra_give_normal_metric(self):
        params = SpectralParams(BlockPartition.regular(3), (1.0, 2.0, 3.0), (1.0, 2.0, 3.0))
        table = MetricSpec(MetricKind.SUBMERSION, params.partition, params).coefficients()
        assert all(c == pytest.approx(1.0) for c in table.values())

    def test_stiefel_identity_is_normal(self):
        spec = MetricSpec(MetricKind.STIEFEL, BlockPartition((2, 2)))
        table = metric_coefficients(spec)
        assert table.transversal == {(0, 1): 1.0}
        np.testing.assert_array_equal(table.isotropy, np.eye(1))

    def test_stiefel_needs_two_blocks(self):
        with pytest.raises(ParameterError):
            MetricSpec(MetricKind.STIEFEL, BlockPartition((1, 1, 2)))

    def test_negative_submersion_coefficient(self):
        params = SpectralParams(BlockPartition((2, 1)), (1.0, 2.0), (3.0, 1.0))
        with pytest.raises(MetricPositivityError):
            MetricSpec(MetricKind.SUBMERSION, params.partition, params)

    def test_stiefel_operator_inverts_kappa(self):
        spec = MetricSpec(MetricKind.STIEFEL, BlockPartition((2, 2)), kappa=4.0)
        op = spec.to_operator()
        np.testing.assert_allclose(op.apply(wedge(4, 0, 2)), 0.25 * wedge(4, 0, 2))


def test_hamiltonian_of_single_wedge():
    params = SpectralParams(BlockPartition.regular(3), (1.0, 2.0, 3.0), (1.0, 4.0, 9.0))
    op = SectionalOperator(OperatorKind.REGULAR, params)
    assert hamiltonian_of(op, wedge(3, 0, 1)) == pytest.approx(1.5)


def test_hamiltonian_of_metric():
    spec = MetricSpec(MetricKind.NORMAL, BlockPartition.regular(3))
    M = sample_generic(6, 'so', 3)
    assert hamiltonian_of(spec, M) == pytest.approx(0.5 * float(np.sum(M * M)) / 2.0)


class TestNoetherApplicability:
    def test_default_singular_and_rigid_body(self, two_one):
        assert noether_applicable(SectionalOperator(OperatorKind.SINGULAR, two_one))
        assert noether_applicable(SectionalOperator.rigid_body(two_one.partition, (1.0, 2.0)))

    def test_regular_has_no_isotropy(self, regular3):
        assert not noether_applicable(SectionalOperator(OperatorKind.REGULAR, regular3))

    def test_block_scalar_interior(self):
        params = SpectralParams(BlockPartition((2, 2)), (1.0, 2.0), (1.0, 2.0))
        assert noether_applicable(SectionalOperator(OperatorKind.SINGULAR, params, np.diag([1.0, 3.0])))
        coupled = np.array([[2.0, 0.5], [0.5, 2.0]])
        assert not noether_applicable(SectionalOperator(OperatorKind.SINGULAR, params, coupled))

    def test_anisotropic_block(self):
        params = SpectralParams(BlockPartition((3, 1)), (1.0, 2.0), (1.0, 2.0))
        op = SectionalOperator(OperatorKind.SINGULAR, params, np.diag([1.0, 2.0, 3.0]))
        assert not noether_applicable(op)
