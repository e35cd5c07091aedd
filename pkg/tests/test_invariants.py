"""
Tests for integral families, brackets and algebraic identities
"""

import numpy as np
import pytest
import sympy

from src.algebra.liealg import (
    BlockPartition, Carrier, SpectralParams, sample_generic, scalar_product, wedge
)
from src.core.errors import CarrierMismatchError, ParameterError, PoleError
from src.dynamics.sectional import OperatorKind, SectionalOperator
from src.invariants.brackets import BracketKind, bracket, involution_matrix, jacobiator
from src.invariants.families import (
    BolsinovTrace, GLTrace, IntegralFamily, LinearForm, ManakovCoefficient, PencilCasimir,
    ShiftedTrace, casimir_family, casimir_gl_eval, eval_manakov_coeffs, factor_manakov_family,
    hamiltonian_family, j_family_eval, manakov_family, noether_family, pencil_casimir_family
)
from src.invariants.identities import cross_commutation_check, det_identity_check, restriction_check


@pytest.fixture
def m123():
    """(M_12, M_13, M_23) = (1, 2, 3)"""
    return np.array([[0.0, 1.0, 2.0], [-1.0, 0.0, 3.0], [-2.0, -3.0, 0.0]])


def fd_max_error(member, X, directions, h=1e-5):
    """Largest deviation of central differences from <grad, E> over the given directions"""
    G = member.gradient(X)
    errors, sizes = [], []
    for E in directions:
        fd = (member.evaluate(X + h * E) - member.evaluate(X - h * E)) / (2.0 * h)
        exact = scalar_product(G, E)
        errors.append(abs(fd - exact))
        sizes.append(abs(exact))
    return max(errors) / max(1.0, max(sizes))


def so_directions(n):
    return [wedge(n, i, j) for i in range(n) for j in range(i + 1, n)]


def gl_directions(n):
    out = []
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n))
            E[i, j] = 1.0
            out.append(E)
    return out


class TestManakovCoefficients:
    def test_worked_values(self, m123):
        table = eval_manakov_coeffs(m123, np.diag([1.0, 2.0, 3.0]))
        assert table[(2, 0)] == pytest.approx(-28.0)
        assert table[(2, 1)] == pytest.approx(0.0, abs=1e-12)
        assert table[(3, 0)] == pytest.approx(0.0, abs=1e-10)

    def test_even_in_m(self, m123):
        member = ManakovCoefficient((1.0, 2.0, 3.0), 2, 0)
        assert member.evaluate(-m123) == member.evaluate(m123)

    @pytest.mark.parametrize("k, s", [(2, 0), (3, 1), (4, 0), (4, 2), (4, 3)])
    def test_against_symbolic_expansion(self, k, s):
        entries = [[0, 2, -1, 3], [-2, 0, 1, 1], [1, -1, 0, -2], [-3, -1, 2, 0]]
        a = (1, 2, 4, 7)
        lam = sympy.symbols('lam')
        expr = sympy.expand(((sympy.Matrix(entries) + lam * sympy.diag(*a)) ** k).trace())
        expected = float(sympy.Poly(expr, lam).coeff_monomial(lam ** s))

        M = np.asarray(entries, dtype=float)
        assert ManakovCoefficient(tuple(map(float, a)), k, s).evaluate(M) == pytest.approx(expected)
        table = eval_manakov_coeffs(M, np.asarray(a, dtype=float))
        assert table[(k, s)] == pytest.approx(expected, rel=1e-9, abs=1e-7)

    def test_generating_set(self):
        tags = manakov_family(SpectralParams.default(BlockPartition.regular(4))).tags
        assert tags == ["L(2,0)", "L(3,1)", "L(4,0)", "L(4,2)"]

    def test_invalid_degree(self):
        with pytest.raises(ParameterError):
            ManakovCoefficient((1.0, 2.0), 2, 3)


class TestGradients:
    def test_quadratic_casimir(self):
        M = sample_generic(3, 'so', 4)
        np.testing.assert_allclose(ManakovCoefficient((0.0,) * 4, 2, 0).gradient(M), -4.0 * M)

    def test_linear_form(self):
        M = sample_generic(3, 'so', 4)
        np.testing.assert_array_equal(LinearForm(0, 1).gradient(M), wedge(4, 0, 1))
        assert LinearForm(0, 1).evaluate(M) == M[0, 1]

    def test_skew_members_match_finite_differences(self):
        params = SpectralParams(BlockPartition.regular(4), (0.3, 0.7, 1.2, 1.9), (0.1, 0.4, 0.9, 1.5))
        members = manakov_family(params).members + (
            ShiftedTrace(tuple(params.a), 3, -0.8),
            BolsinovTrace(tuple(params.a), 1, 0.45),
            BolsinovTrace(tuple(params.a), 2, -2.6),
        ) + factor_manakov_family(BlockPartition((1, 3)), Carrier.so(4), 1).members
        for seed in range(5):
            M = sample_generic(seed, 'so', 4)
            for member in members:
                assert fd_max_error(member, M, so_directions(4)) <= 1e-6, member.tag

    def test_gl_members_match_finite_differences(self):
        a = (0.5, 1.0, 2.0)
        members = [PencilCasimir(a, 0.7, 3), PencilCasimir(a, -1.3, 2),
                   GLTrace(np.diag(a), 3)]
        for seed in range(5):
            X = sample_generic(seed, 'gl', 3)
            for member in members:
                assert fd_max_error(member, X, gl_directions(3)) <= 1e-6, member.tag


class TestFamilies:
    def test_noether_members(self):
        family = noether_family(BlockPartition((2, 3)))
        assert family.tags == ["S(1,2)", "S(3,4)", "S(3,5)", "S(4,5)"]

    def test_casimirs(self):
        assert len(casimir_family(5)) == 2

    def test_carriers_must_agree(self):
        partition = BlockPartition((2, 2))
        with pytest.raises(CarrierMismatchError):
            noether_family(partition) + manakov_family(SpectralParams.default(partition),
                                                       Carrier('v', partition))

    def test_gl_member_rejected_on_so(self):
        with pytest.raises(CarrierMismatchError):
            IntegralFamily(Carrier.so(3), (PencilCasimir((1.0, 2.0, 3.0), 1.0, 2),))

    def test_point_outside_carrier(self):
        partition = BlockPartition((2, 2))
        family = manakov_family(SpectralParams.default(partition), Carrier('v', partition))
        with pytest.raises(CarrierMismatchError):
            involution_matrix(family, sample_generic(0, 'so', 4), BracketKind.reduced(partition))


class TestBrackets:
    def test_structure_constant(self):
        X = sample_generic(2, 'so', 3)
        value = bracket(LinearForm(0, 1), LinearForm(0, 2), X, BracketKind.lie_poisson())
        assert value == pytest.approx(X[1, 2])

    def test_antisymmetry(self):
        X = sample_generic(2, 'so', 4)
        f, g = ManakovCoefficient((0.1, 0.5, 0.9, 1.3), 3, 1), LinearForm(1, 3)
        kind = BracketKind.frozen(np.diag([0.1, 0.5, 0.9, 1.3]))
        assert bracket(f, f, X, kind) == pytest.approx(0.0, abs=1e-15)
        assert bracket(f, g, X, kind) == pytest.approx(-bracket(g, f, X, kind))

    def test_quadratic_casimir_commutes(self):
        X = sample_generic(4, 'so', 4)
        casimir = ManakovCoefficient((0.0,) * 4, 2, 0)
        for g in manakov_family(SpectralParams.default(BlockPartition.regular(4))):
            scale = np.linalg.norm(casimir.gradient(X)) * np.linalg.norm(g.gradient(X)) * np.linalg.norm(X)
            assert abs(bracket(casimir, g, X, BracketKind.lie_poisson())) <= 1e-12 * scale

    def test_manakov_family_is_involutive(self):
        params = SpectralParams.default(BlockPartition.regular(4))
        family = manakov_family(params)
        for seed in range(5):
            X = sample_generic(seed, 'so', 4)
            assert involution_matrix(family, X, BracketKind.lie_poisson()).max_normalized <= 1e-9

    def test_manakov_family_commutes_with_noether_forms(self):
        partition = BlockPartition((2, 2))
        L = manakov_family(SpectralParams.default(partition))
        S = noether_family(partition)
        X = sample_generic(6, 'so', 4)
        assert involution_matrix(L, X, BracketKind.lie_poisson(), rows=S).max_normalized <= 1e-9

    @pytest.mark.parametrize("kind", ["singular", "rigid_body"])
    def test_hamiltonians_commute_with_l_and_s(self, kind):
        partition = BlockPartition((1, 2, 2))
        params = SpectralParams.default(partition)
        if kind == "rigid_body":
            op = SectionalOperator.rigid_body(partition, params.betas)
        else:
            op = SectionalOperator(OperatorKind.SINGULAR, params)
        H = hamiltonian_family([op])
        L = manakov_family(op.params)
        S = noether_family(partition)
        for seed in range(3):
            X = sample_generic(seed, 'so', 5)
            assert involution_matrix(L, X, BracketKind.lie_poisson(), rows=H).max_normalized <= 1e-9
            assert involution_matrix(S, X, BracketKind.lie_poisson(), rows=H).max_normalized <= 1e-9

    def test_regular_hamiltonian_commutes_with_l(self):
        params = SpectralParams(BlockPartition.regular(4), (1.0, 2.0, 3.0, 4.0), (1.0, 4.0, 9.0, 16.0))
        H = hamiltonian_family([SectionalOperator(OperatorKind.REGULAR, params)])
        X = sample_generic(8, 'so', 4)
        assert H.tags == ["H[regular]"]
        assert involution_matrix(manakov_family(params), X, BracketKind.lie_poisson(),
                                 rows=H).max_normalized <= 1e-9

    def test_generic_hamiltonian_does_not_commute(self):
        params = SpectralParams.default(BlockPartition((3, 1)))
        op = SectionalOperator(OperatorKind.SINGULAR, params, np.diag([1.0, 2.0, 3.0]))
        H = hamiltonian_family([op])
        X = sample_generic(2, 'so', 4)
        assert involution_matrix(noether_family(params.partition), X, BracketKind.lie_poisson(),
                                 rows=H).max_normalized > 1e-6

    def test_noether_block_reproduces_structure_constants(self):
        partition = BlockPartition((3,))
        S = noether_family(partition)
        X = sample_generic(6, 'so', 3)
        matrix = involution_matrix(S, X, BracketKind.lie_poisson()).matrix
        # {M_12, M_13} = M_23
        assert matrix[0, 1] == pytest.approx(X[1, 2])

    @pytest.mark.parametrize("kind", [
        BracketKind.lie_poisson(),
        BracketKind.frozen(np.diag([0.2, 0.9, 1.7])),
    ])
    def test_jacobi_on_so(self, kind):
        X = sample_generic(1, 'so', 3)
        a, b, c = (sample_generic(s, 'so', 3) for s in (11, 12, 13))
        assert jacobiator(X, kind, a, b, c) <= 1e-9

    @pytest.mark.parametrize("lambdas", [(1.0, 0.0), (0.0, 1.0), (0.4, -1.3)])
    def test_pencil_is_compatible(self, lambdas):
        A = np.diag([0.2, 0.9, 1.7])
        X = sample_generic(1, 'gl', 3)
        a, b, c = (sample_generic(s, 'gl', 3) for s in (11, 12, 13))
        assert jacobiator(X, BracketKind.pencil(A, *lambdas), a, b, c) <= 1e-9

    def test_pencil_needs_a_nonzero_combination(self):
        with pytest.raises(ParameterError):
            BracketKind.pencil(np.eye(2), 0.0, 0.0)

    def test_gl_member_needs_pencil(self):
        with pytest.raises(CarrierMismatchError):
            bracket(PencilCasimir((1.0, 2.0), 1.0, 2), LinearForm(0, 1),
                    sample_generic(0, 'so', 2), BracketKind.lie_poisson())

    @pytest.mark.parametrize("lam", [0.0, 0.6, -0.45])
    def test_pencil_casimirs_are_central(self, lam):
        a = (0.2, 0.9, 1.7)
        kind = BracketKind.pencil(np.diag(a), 1.0 - lam ** 2, lam ** 2)
        X = sample_generic(3, 'gl', 3)
        g = GLTrace(sample_generic(4, 'gl', 3), 3)
        family = pencil_casimir_family(a, [lam])
        assert [f.k for f in family] == [1, 2, 3]
        for f in family:
            scale = (np.linalg.norm(f.gradient(X)) * np.linalg.norm(g.gradient(X))
                     * (np.linalg.norm(X) + np.linalg.norm(a)))
            assert abs(bracket(f, g, X, kind)) / scale <= 1e-9


class TestJFamily:
    def test_worked_value(self, m123):
        assert j_family_eval(m123, np.diag([1.0, 2.0, 3.0]), 1, 0.0) == pytest.approx(-20.0 / 3.0)

    def test_zero(self):
        assert j_family_eval(np.zeros((3, 3)), [1.0, 2.0, 3.0], 1, 0.5) == 0.0

    def test_large_lambda_limit(self, m123):
        lam = 1e6
        value = lam ** 2 * j_family_eval(m123, [1.0, 2.0, 3.0], 1, lam)
        assert value == pytest.approx(float(np.trace(m123 @ m123)), rel=1e-4)

    def test_pole(self, m123):
        with pytest.raises(PoleError):
            j_family_eval(m123, [1.0, 2.0, 3.0], 1, -2.0)


class TestIdentities:
    @pytest.mark.parametrize("partition", [(2, 2), (1, 1, 1)])
    def test_cross_commutation(self, partition):
        partition = BlockPartition(partition)
        params = SpectralParams.default(partition)
        for seed in range(3):
            assert cross_commutation_check(sample_generic(seed, 'so', partition.n), params).passed

    def test_cross_commutation_negative_control(self):
        params = SpectralParams(BlockPartition.regular(3), (0.2, 0.9, 1.7), (0.1, 0.5, 1.0))
        other = SpectralParams(BlockPartition.regular(3), (0.5, 1.1, 2.3), (0.1, 0.5, 1.0))
        result = cross_commutation_check(sample_generic(1, 'so', 3), params, j_params=other)
        assert not result.passed

    def test_restriction(self, rng):
        for seed in range(20):
            n = 2 + seed % 5
            M = sample_generic(seed, 'so', n)
            a = rng.uniform(-2.0, 2.0, size=n)
            lam = float(rng.uniform(-2.0, 2.0))
            k = 1 + seed % n
            assert restriction_check(M, a, lam, k) <= 1e-12

    def test_zero_lambda_keeps_symmetric_part(self):
        X = sample_generic(2, 'gl', 3)
        P = (X + X.T) / 2.0
        value = casimir_gl_eval(X, [1.0, 2.0, 3.0], 0.0, 3)
        assert value == pytest.approx(float(np.trace(P @ P @ P)))

    def test_det_identity_two_by_two(self):
        m, a1, a2, alpha, beta = 0.7, 0.4, 1.3, 0.25, -0.6
        M = np.array([[0.0, m], [-m, 0.0]])
        expected = (beta ** 2 * (a1 + alpha) * (a2 + alpha) + m ** 2) / ((a1 + alpha) * (a2 + alpha))
        lhs = np.linalg.det(M @ np.diag([1 / (a1 + alpha), 1 / (a2 + alpha)]) + beta * np.eye(2))
        assert lhs == pytest.approx(expected)
        assert det_identity_check(M, [a1, a2], alpha, beta) <= 1e-14

    def test_det_identity_at_zero(self):
        assert det_identity_check(np.zeros((4, 4)), [1.0, 2.0, 3.0, 4.0], 0.5, 1.5) <= 1e-13

    def test_det_identity_random(self, rng):
        for seed in range(30):
            n = 2 + seed % 7
            M = sample_generic(seed, 'so', n)
            a = rng.uniform(-2.0, 2.0, size=n)
            alpha, beta = rng.uniform(0.5, 2.0), rng.uniform(-2.0, 2.0)
            assert det_identity_check(M, a + 2.5, alpha, beta) <= 1e-10

    def test_det_identity_pole(self):
        with pytest.raises(PoleError):
            det_identity_check(np.zeros((2, 2)), [1.0, 2.0], -1.0, 1.0)
