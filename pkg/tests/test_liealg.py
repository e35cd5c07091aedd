"""
Tests for the so(n) substrate, numerical rank tools and adjoint orbits
"""

import numpy as np
import pytest

from src.algebra.liealg import (
    BlockPartition, Carrier, SpectralParams, WedgeBasis, commutator, derived_seed,
    from_coords, partitions_of, project, sample_generic, scalar_product, skew_matrix,
    to_coords, wedge
)
from src.algebra.orbits import centralizer_basis, j_space, orbit_dimension
from src.algebra.rank import null_space, numerical_rank, orth_rows, subspace_distance
from src.core.errors import ParameterError, ShapeError


class TestScalarProduct:
    def test_wedge_basis_is_orthonormal(self, e12, e13):
        assert scalar_product(e12, e12) == pytest.approx(1.0)
        assert scalar_product(e12, e13) == pytest.approx(0.0)

    def test_symmetric_argument(self):
        X = np.diag([1.0, 2.0, 3.0])
        assert scalar_product(X, X) == pytest.approx(-7.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            scalar_product(np.zeros((3, 3)), np.zeros((4, 4)))


class TestCommutator:
    def test_structure_constant(self, e12, e13, e23):
        np.testing.assert_allclose(commutator(e12, e13), -e23)

    def test_self_commutator_vanishes(self, rng):
        M = sample_generic(3, 'so', 5)
        assert np.abs(commutator(M, M)).max() == 0.0

    def test_diagonals_commute(self):
        assert np.abs(commutator(np.diag([1.0, 2.0]), np.diag([3.0, -1.0]))).max() == 0.0


def test_skew_matrix_rejects_bad_shapes():
    with pytest.raises(ShapeError):
        skew_matrix(np.zeros((2, 3)))
    with pytest.raises(ShapeError):
        skew_matrix(np.zeros((17, 17)))


@pytest.mark.parametrize("n", [0, 1])
def test_skew_matrix_rejects_trivial_dimensions(n):
    with pytest.raises(ShapeError, match="2..16"):
        skew_matrix(np.zeros((n, n)))


def test_skew_matrix_antisymmetrizes():
    M = skew_matrix([[0.0, 2.0], [0.0, 0.0]])
    np.testing.assert_allclose(M, [[0.0, 1.0], [-1.0, 0.0]])


class TestBlockPartition:
    def test_invalid_partitions(self):
        with pytest.raises(ParameterError):
            BlockPartition(())
        with pytest.raises(ParameterError):
            BlockPartition((2, 0))

    def test_padding(self):
        assert BlockPartition.padded((3,), 5).parts == (3, 1, 1)
        with pytest.raises(ParameterError):
            BlockPartition.padded((4, 3), 5)

    def test_dimensions(self):
        p = BlockPartition((2, 2))
        assert p.n == 4 and p.r == 2
        assert p.iso_dim() == 2
        assert p.v_dim() == 4
        assert str(p) == "(2,2)"

    @pytest.mark.parametrize("n, count", [(1, 1), (3, 3), (4, 5), (5, 7), (6, 11)])
    def test_partitions_of(self, n, count):
        parts = partitions_of(n)
        assert len(parts) == count
        assert all(p.n == n for p in parts)
        assert all(list(p.parts) == sorted(p.parts) for p in parts)


class TestSpectralParams:
    def test_repeated_alphas_rejected(self):
        with pytest.raises(ParameterError, match="alphas"):
            SpectralParams(BlockPartition.regular(3), (1.0, 1.0, 2.0), (1.0, 2.0, 3.0))

    def test_length_must_match_blocks(self):
        with pytest.raises(ParameterError):
            SpectralParams(BlockPartition((2, 1)), (1.0, 2.0, 3.0), (1.0, 2.0, 3.0))

    def test_expansion_follows_blocks(self):
        params = SpectralParams(BlockPartition((2, 1)), (1.0, 2.0), (1.0, 3.0))
        A, B = params.expand()
        np.testing.assert_array_equal(np.diag(A), [1.0, 1.0, 2.0])
        np.testing.assert_array_equal(np.diag(B), [1.0, 1.0, 3.0])


class TestProject:
    def test_two_blocks(self):
        M = wedge(4, 0, 1) + wedge(4, 0, 2)
        iso, v = project(M, BlockPartition((2, 2)))
        np.testing.assert_array_equal(iso, wedge(4, 0, 1))
        np.testing.assert_array_equal(v, wedge(4, 0, 2))

    def test_single_block_is_all_isotropy(self):
        M = sample_generic(1, 'so', 4)
        iso, v = project(M, BlockPartition((4,)))
        np.testing.assert_array_equal(iso, M)
        assert np.abs(v).max() == 0.0

    def test_regular_partition_is_all_transversal(self):
        M = sample_generic(1, 'so', 4)
        iso, v = project(M, BlockPartition.regular(4))
        assert np.abs(iso).max() == 0.0
        np.testing.assert_array_equal(v, M)


class TestSampling:
    def test_deterministic(self):
        a = sample_generic(42, 'so', 3)
        b = sample_generic(42, 'so', 3)
        assert a.tobytes() == b.tobytes()
        np.testing.assert_array_equal(a, -a.T)

    def test_transversal_space(self):
        M = sample_generic(5, 'v', 4, BlockPartition((2, 2)))
        assert M[0, 1] == 0.0 and M[2, 3] == 0.0
        assert abs(M[0, 2]) > 0.0

    def test_symmetric_space(self):
        S = sample_generic(5, 'sym', 4)
        np.testing.assert_array_equal(S, S.T)

    def test_stiefel_carrier(self):
        partition = BlockPartition((2, 1, 1))
        M = sample_generic(9, 'p', 4, partition, l_split=1)
        assert M[0, 1] == 0.0
        assert Carrier('p', partition, 1).dim == 5

    def test_unknown_space(self):
        with pytest.raises(ParameterError):
            sample_generic(0, 'hermitian', 3)

    def test_derived_seeds(self):
        assert derived_seed(11, 0) == 11
        assert derived_seed(11, 1) != derived_seed(11, 2)
        assert derived_seed(11, 1) == derived_seed(11, 1)


def test_wedge_coordinates_roundtrip():
    M = sample_generic(3, 'so', 5)
    np.testing.assert_array_equal(from_coords(to_coords(M), 5), M)
    assert WedgeBasis(BlockPartition.regular(5)).pairs[0] == (0, 1)


class TestRank:
    def test_clear_gap(self):
        decision = numerical_rank(np.diag([1.0, 1e-20]))
        assert decision.rank == 1 and decision.stable

    def test_value_inside_band_is_unstable(self):
        # tau = 2 * eps * 1e4 ~ 4.4e-12
        decision = numerical_rank(np.diag([1.0, 5e-12]))
        assert not decision.stable

    def test_reference_raises_threshold(self):
        assert numerical_rank(np.diag([1e-6, 1e-6])).rank == 2
        assert numerical_rank(np.diag([1e-6, 1e-6]), reference=1e12).rank == 0

    def test_empty_matrix_has_full_null_space(self):
        basis, decision = null_space(np.zeros((0, 3)), cols=3)
        assert basis.shape == (3, 3)
        assert decision.rank == 0

    def test_orth_rows(self):
        basis, decision = orth_rows([[1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        assert decision.rank == 2
        np.testing.assert_allclose(basis @ basis.T, np.eye(2), atol=1e-14)

    def test_subspace_distance(self):
        U = np.eye(3)[:, :2]
        V = U @ np.array([[0.6, -0.8], [0.8, 0.6]])
        assert subspace_distance(U, V) < 1e-12
        assert subspace_distance(U, np.eye(3)[:, :1]) == 1.0


class TestOrbits:
    def test_generic_so4(self):
        assert orbit_dimension(sample_generic(7, 'so', 4)) == 4

    def test_single_wedge_so4(self):
        x = wedge(4, 0, 1)
        assert orbit_dimension(x) == 4
        assert centralizer_basis(x).shape[0] == 2

    def test_zero(self):
        assert orbit_dimension(np.zeros((4, 4))) == 0

    def test_generic_so5(self):
        assert orbit_dimension(sample_generic(7, 'so', 5)) == 8


class TestJSpace:
    def test_single_transversal_wedge(self):
        basis = j_space(wedge(4, 0, 1), BlockPartition((1, 3)))
        assert basis.shape == (1, 6)
        assert abs(basis[0, 0]) == pytest.approx(1.0)

    def test_regular_partition_gives_everything(self):
        basis = j_space(sample_generic(2, 'so', 4), BlockPartition.regular(4))
        assert basis.shape == (6, 6)

    def test_dimension_is_constant_on_generic_points(self):
        partition = BlockPartition((2, 3))
        dims = {j_space(sample_generic(s, 'v', 5, partition), partition).shape[0] for s in range(10)}
        assert len(dims) == 1
