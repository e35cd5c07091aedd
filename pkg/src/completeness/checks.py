"""
Identity and Involution Targets
Seeded runs of the involution, cross-commutation, determinant, restriction and Lax checks
aggregated into verdicts
"""

from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from ..algebra.liealg import BlockPartition, Carrier, SpectralParams, sample_generic
from ..core.config import config
from ..core.errors import (
    MetricPositivityError, ParameterError, PoleError, SingularDenominatorError
)
from ..core.logger import logger
from ..dynamics.flows import euler_field, lax_residual, singular_flow_field
from ..dynamics.sectional import (
    OperatorKind, SectionalOperator, check_manakov_condition, noether_applicable
)
from ..invariants.brackets import BracketKind, involution_matrix
from ..invariants.families import hamiltonian_family, manakov_family, noether_family
from ..invariants.identities import (
    cross_commutation_check, det_identity_check, restriction_check
)
from .report import CompletenessVerdict
from .theorems import PartitionLike, finish_verdict, as_partition, evaluate_points, resolve_seeds


def _operators(params: SpectralParams, strict: bool = True) -> List[SectionalOperator]:
    """Operator kinds applicable to the spectra; with strict=False unbuildable kinds are skipped"""
    partition = params.partition
    builders: List[Callable[[], SectionalOperator]] = [
        lambda: SectionalOperator(OperatorKind.SINGULAR, params)
    ]
    if all(k == 1 for k in partition.parts):
        builders.append(lambda: SectionalOperator(OperatorKind.REGULAR, params))
    if min(params.betas) > 0.0:
        builders.append(lambda: SectionalOperator.rigid_body(partition, params.betas))

    ops = []
    for build in builders:
        try:
            ops.append(build())
        except (MetricPositivityError, ParameterError, SingularDenominatorError) as e:
            if strict:
                raise
            logger.debug(f"operator skipped for {partition}: {e}")
    return ops


def verify_involution(n: int, partition: PartitionLike, seeds: Optional[Sequence[int]] = None,
                      params: Optional[SpectralParams] = None, jobs: int = 1) -> CompletenessVerdict:
    """L is involutive and commutes with S on so(n); L_v is involutive under the reduced bracket

    The Hamiltonian of every applicable operator kind commutes with the L built
    on its own spectrum, and with S when the flow conserves the isotropy block.
    """
    partition = as_partition(partition, n)
    params = params or SpectralParams.default(partition)
    seeds = resolve_seeds(seeds)
    L = manakov_family(params)
    S = noether_family(partition)
    L_v = manakov_family(params, Carrier('v', partition))
    hamiltonians = [(op, hamiltonian_family([op]), manakov_family(op.params))
                    for op in _operators(params, strict=False)]
    lie_poisson = BracketKind.lie_poisson()
    reduced = BracketKind.reduced(partition)
    tol = config.tolerances.involution

    def measure(point_seed: int) -> Dict[str, Any]:
        M = sample_generic(point_seed, 'so', n)
        residuals = {
            'L_L': involution_matrix(L, M, lie_poisson).max_normalized,
            'L_S': involution_matrix(L, M, lie_poisson, rows=S).max_normalized,
        }
        for op, H, L_op in hamiltonians:
            label = op.kind.value
            residuals[f"H_{label}_L"] = involution_matrix(L_op, M, lie_poisson, rows=H).max_normalized
            if noether_applicable(op):
                residuals[f"H_{label}_S"] = involution_matrix(S, M, lie_poisson, rows=H).max_normalized
        M_v = sample_generic(point_seed, 'v', n, partition)
        residuals['L_v_reduced'] = involution_matrix(L_v, M_v, reduced).max_normalized
        return {'residuals': residuals, 'passed': max(residuals.values()) <= tol}

    records = evaluate_points(seeds, measure, jobs)
    return finish_verdict(CompletenessVerdict.aggregate(
        "involution", n, partition.parts, seeds, records,
        identity="max normalized bracket <= involution tolerance"
    ))


def verify_cross_commutation(n: int, partition: PartitionLike, seeds: Optional[Sequence[int]] = None,
                             params: Optional[SpectralParams] = None,
                             jobs: int = 1) -> CompletenessVerdict:
    """L and J commute under the Lie-Poisson bracket"""
    partition = as_partition(partition, n)
    params = params or SpectralParams.default(partition)
    seeds = resolve_seeds(seeds)

    def measure(point_seed: int) -> Dict[str, Any]:
        M = sample_generic(point_seed, 'so', n)
        result = cross_commutation_check(M, params)
        return {'residuals': {'L_J': result.value}, 'passed': result.passed}

    records = evaluate_points(seeds, measure, jobs)
    return finish_verdict(CompletenessVerdict.aggregate(
        "cross-commute", n, partition.parts, seeds, records,
        identity="max normalized {L, J} <= involution tolerance"
    ))


def verify_det_identity(n: int, seeds: Optional[Sequence[int]] = None,
                        jobs: int = 1) -> CompletenessVerdict:
    """det(M (A + alpha I)^-1 + beta I) = det(M + beta A + alpha beta I) / det(alpha I + A)"""
    seeds = resolve_seeds(seeds)
    tol = config.tolerances.identity

    def measure(point_seed: int) -> Dict[str, Any]:
        rng = np.random.default_rng(point_seed)
        M = sample_generic(point_seed, 'so', n)
        a = rng.uniform(-2.0, 2.0, size=n)
        alpha, beta = rng.uniform(-2.0, 2.0, size=2)
        try:
            residual = det_identity_check(M, a, float(alpha), float(beta))
        except PoleError as e:
            return {'passed': False, 'generic': False, 'note': str(e)}
        return {'residuals': {'det_identity': residual}, 'passed': residual <= tol}

    records = evaluate_points(seeds, measure, jobs)
    return finish_verdict(CompletenessVerdict.aggregate(
        "det-identity", n, list(BlockPartition.regular(n).parts), seeds, records,
        identity="determinant identity residual <= identity tolerance"
    ))


def verify_restriction(n: int, partition: PartitionLike, seeds: Optional[Sequence[int]] = None,
                       params: Optional[SpectralParams] = None, jobs: int = 1) -> CompletenessVerdict:
    """f_{lam,k} restricted to so(n) equals lam^k tr(M + lam A)^k"""
    partition = as_partition(partition, n)
    params = params or SpectralParams.default(partition)
    seeds = resolve_seeds(seeds)
    tol = config.tolerances.identity

    def measure(point_seed: int) -> Dict[str, Any]:
        M = sample_generic(point_seed, 'so', n)
        worst = max(restriction_check(M, params.a, lam, k)
                    for lam in config.sampling.lax_lambdas for k in range(1, n + 1))
        return {'residuals': {'restriction': worst}, 'passed': worst <= tol}

    records = evaluate_points(seeds, measure, jobs)
    return finish_verdict(CompletenessVerdict.aggregate(
        "restriction", n, partition.parts, seeds, records,
        identity="f_{lam,k}(M) = lam^k tr(M + lam A)^k on so(n)"
    ))


def verify_lax(n: int, partition: PartitionLike, seeds: Optional[Sequence[int]] = None,
               params: Optional[SpectralParams] = None, jobs: int = 1) -> CompletenessVerdict:
    """Manakov condition, Lax residual at the configured lambdas and split-field consistency

    Every applicable operator kind for the partition is checked; residuals are
    divided by the scale of the terms they compare.
    """
    partition = as_partition(partition, n)
    params = params or SpectralParams.default(partition)
    seeds = resolve_seeds(seeds)
    ops = _operators(params)
    tol = config.tolerances.identity

    def measure(point_seed: int) -> Dict[str, Any]:
        M = sample_generic(point_seed, 'so', n)
        norm_m = max(1.0, float(np.linalg.norm(M)))
        residuals: Dict[str, float] = {}
        for op in ops:
            A, B = op.params.expand()
            Omega = op.apply(M)
            scale = norm_m * max(1.0, float(np.linalg.norm(Omega)), float(np.linalg.norm(A)),
                                 float(np.linalg.norm(B)))
            label = op.kind.value
            residuals[f"{label}_manakov"] = check_manakov_condition(M, Omega, op.params) / scale
            residuals[f"{label}_lax"] = max(
                lax_residual(M, op, lam) for lam in config.sampling.lax_lambdas
            ) / (scale * (1.0 + max(abs(x) for x in config.sampling.lax_lambdas)) ** 2)
            if op.kind == OperatorKind.SINGULAR:
                split = np.linalg.norm(singular_flow_field(M, op) - euler_field(M, op))
                residuals[f"{label}_split"] = float(split) / scale
        return {'residuals': residuals, 'passed': max(residuals.values()) <= tol}

    records = evaluate_points(seeds, measure, jobs)
    return finish_verdict(CompletenessVerdict.aggregate(
        "lax", n, partition.parts, seeds, records,
        identity="Manakov, Lax and split-field residuals <= identity tolerance"
    ))
