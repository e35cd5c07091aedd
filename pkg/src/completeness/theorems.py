"""
Structural Theorem Drivers
Seeded verification of completeness counts for L + S, J + S, L_v and L_p + K,
the pencil-kernel nullity and the normal-form reduction
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from ..algebra.liealg import (
    BlockPartition, Carrier, SpectralParams, commutator, from_coords, sample_generic,
    skew_matrix, to_coords, wedge
)
from ..algebra.orbits import centralizer_basis, orbit_dimension
from ..algebra.rank import numerical_rank
from ..core.config import config
from ..core.errors import IndeterminateRankError, NonGenericPointError, ParameterError
from ..core.logger import logger
from ..invariants.brackets import BracketKind, involution_matrix
from ..invariants.families import (
    IntegralFamily, ShiftedTrace, bolsinov_family, diag_vector, factor_manakov_family,
    manakov_family, noether_family
)
from .criteria import (
    bracket_corank, coisotropy_residual, ddim_dind, self_orthogonality, with_resampling
)
from .reduction import (
    conjugation_error, normal_form_reduce, reduced_partition, verify_reduction_equality
)
from .report import CompletenessVerdict, PointRecord

PartitionLike = Union[BlockPartition, Sequence[int]]
Measure = Callable[[int], Dict[str, Any]]

# Extra spectral samples appended for the saturation check
SATURATION_LAMBDAS = (0.37, -1.21, 2.53)


def as_partition(partition: PartitionLike, n: int) -> BlockPartition:
    """Coerce to a BlockPartition of n, padding short partitions with size-1 blocks"""
    if isinstance(partition, BlockPartition):
        parts = partition.parts
    else:
        parts = tuple(int(k) for k in partition)
    result = BlockPartition.padded(parts, n)
    if result.n != n:
        raise ParameterError(f"partition {parts} does not sum to n={n}")
    return result


def resolve_seeds(seeds: Optional[Sequence[int]]) -> List[int]:
    if seeds is None:
        return list(range(config.sampling.default_seeds))
    return [int(s) for s in seeds]


def evaluate_points(seeds: Sequence[int], measure: Measure, jobs: int = 1) -> List[PointRecord]:
    """Measure every seed (with resampling), optionally on a thread pool

    Args:
        seeds: Base seeds, one point each
        measure: Callable point_seed -> dict of PointRecord fields
        jobs: Worker threads

    Returns:
        PointRecords in seed order
    """
    def run(seed: int) -> PointRecord:
        try:
            fields, point_seed, attempt = with_resampling(seed, measure)
        except IndeterminateRankError as e:
            logger.warning(f"seed {seed} flagged non-generic: {e}")
            return PointRecord(seed=seed, point_seed=seed,
                               attempt=config.tolerances.resample_attempts,
                               passed=False, generic=False, note=str(e))
        record = PointRecord(seed=seed, point_seed=point_seed, attempt=attempt, **fields)
        logger.debug(f"seed {seed}: ranks={record.ranks} passed={record.passed}")
        return record

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, seeds))
    return [run(s) for s in seeds]


def finish_verdict(verdict: CompletenessVerdict) -> CompletenessVerdict:
    logger.info(f"{verdict.theorem} n={verdict.n} {verdict.partition}: {verdict.verdict.value} "
                f"({verdict.passed_points}/{len(verdict.per_point)} points, "
                f"{verdict.non_generic_points} non-generic)")
    return verdict


def _so_completeness(theorem: str, family: IntegralFamily, n: int, partition: BlockPartition,
                     seeds: List[int], jobs: int, identity: str) -> CompletenessVerdict:
    """ddim + dind = n(n-1)/2 + floor(n/2) and coisotropy of F_M at generic M in so(n)"""
    kind = BracketKind.lie_poisson()
    target = n * (n - 1) // 2 + n // 2
    tol = config.tolerances.subspace

    def measure(point_seed: int) -> Dict[str, Any]:
        M = sample_generic(point_seed, 'so', n)
        report = ddim_dind(family, M, kind, seed=point_seed)
        residual = coisotropy_residual(family, M, kind)
        lhs = report.ddim + report.dind
        return {
            'ranks': {'ddim': report.ddim, 'dind': report.dind},
            'residuals': {'coisotropy': residual},
            'lhs': lhs, 'rhs': target,
            'passed': lhs == target and residual <= tol,
        }

    records = evaluate_points(seeds, measure, jobs)
    return finish_verdict(CompletenessVerdict.aggregate(
        theorem, n, partition.parts, seeds, records, identity=identity, target=target
    ))


def verify_theorem1(n: int, partition: PartitionLike, seeds: Optional[Sequence[int]] = None,
                    params: Optional[SpectralParams] = None, jobs: int = 1) -> CompletenessVerdict:
    """L + S is complete on so(n): ddim + dind = n(n-1)/2 + floor(n/2) and F_M is coisotropic

    Args:
        n: Dimension
        partition: Block partition of A
        seeds: Point seeds (default: config.sampling.default_seeds of them)
        params: Spectra (default: SpectralParams.default)
        jobs: Worker threads

    Returns:
        CompletenessVerdict
    """
    partition = as_partition(partition, n)
    params = params or SpectralParams.default(partition)
    family = manakov_family(params) + noether_family(partition)
    return _so_completeness("theorem1", family, n, partition, resolve_seeds(seeds), jobs,
                            "ddim(L+S) + dind(L+S) = n(n-1)/2 + floor(n/2)")


def verify_theorem2(n: int, partition: PartitionLike, seeds: Optional[Sequence[int]] = None,
                    params: Optional[SpectralParams] = None, jobs: int = 1) -> CompletenessVerdict:
    """J + S is complete on so(n) under the Lie-Poisson bracket"""
    partition = as_partition(partition, n)
    params = params or SpectralParams.default(partition)
    family = bolsinov_family(params) + noether_family(partition)
    return _so_completeness("theorem2", family, n, partition, resolve_seeds(seeds), jobs,
                            "ddim(J+S) + dind(J+S) = n(n-1)/2 + floor(n/2)")


def saturation_family(params: SpectralParams, carrier: Carrier,
                      lambdas: Sequence[float] = SATURATION_LAMBDAS) -> IntegralFamily:
    """L on a carrier extended by tr(M + lam A)^k at extra lam, k up to n + 1"""
    extra = tuple(ShiftedTrace(tuple(params.a), k, lam)
                  for lam in lambdas for k in range(2, params.n + 2))
    return manakov_family(params, carrier) + IntegralFamily(carrier, extra)


def verify_theorem3(n: int, partition: PartitionLike, seeds: Optional[Sequence[int]] = None,
                    params: Optional[SpectralParams] = None, jobs: int = 1) -> CompletenessVerdict:
    """L_v is a complete commutative set of SO(n)_A-invariant functions on v

    At every point: ddim L_v = dim v - dim O(M)/2, reduced involutivity,
    F_M^Lambda = F_M inside j_M (two constructions), saturation of the
    generating set, and invariance of ddim/dind under the normal-form conjugation.
    """
    partition = as_partition(partition, n)
    params = params or SpectralParams.default(partition)
    seeds = resolve_seeds(seeds)
    carrier = Carrier('v', partition)
    family = manakov_family(params, carrier)
    extended = saturation_family(params, carrier)
    kind = BracketKind.reduced(partition)
    tols = config.tolerances
    small = reduced_partition(partition)

    def measure(point_seed: int) -> Dict[str, Any]:
        M = sample_generic(point_seed, 'v', n, partition)
        orbit = orbit_dimension(M)
        target = partition.v_dim() - orbit // 2
        report = ddim_dind(family, M, kind, seed=point_seed)
        involution = involution_matrix(family, M, kind).max_normalized
        self_dist, agreement = self_orthogonality(family, M, kind)
        dim_j, corank = bracket_corank(M, kind, family)
        saturated = ddim_dind(extended, M, kind).ddim

        ranks = {'ddim': report.ddim, 'dind': report.dind, 'orbit_dim': orbit,
                 'j_dim': dim_j, 'j_corank': corank, 'saturated_ddim': saturated}
        residuals = {'involution': involution, 'self_orthogonality': self_dist,
                     'complement_agreement': agreement}
        passed = (report.ddim == target and involution <= tols.involution
                  and self_dist <= tols.subspace and agreement <= tols.subspace
                  and saturated == report.ddim)

        nf = normal_form_reduce(M, partition)
        if nf.applicable:
            conjugate = ddim_dind(family, nf.M_prime, kind)
            ranks['conjugate_ddim'] = conjugate.ddim
            ranks['conjugate_dind'] = conjugate.dind
            passed = passed and (conjugate.ddim, conjugate.dind) == (report.ddim, report.dind)

        return {'ranks': ranks, 'residuals': residuals, 'lhs': report.ddim, 'rhs': target,
                'passed': passed}

    records = evaluate_points(seeds, measure, jobs)
    return finish_verdict(CompletenessVerdict.aggregate(
        "theorem3", n, partition.parts, seeds, records,
        identity="ddim(L_v) = dim v - dim O(M)/2"
    ))


def verify_theorem4(n: int, partition: PartitionLike, l_split: int,
                    seeds: Optional[Sequence[int]] = None,
                    params: Optional[SpectralParams] = None, jobs: int = 1) -> CompletenessVerdict:
    """L_p + K is complete in R[p]^H, and L_p + K0 is complete commutative

    H is generated by the first l_split blocks and p = k + v. Completeness is
    measured over j_M^H: ddim + dind = dim j_M + corank of the reduced tensor;
    the commutative part needs involutivity and ddim = (dim j_M + corank)/2.
    """
    partition = as_partition(partition, n)
    if not 1 <= l_split <= partition.r:
        raise ParameterError(f"l_split must lie in 1..{partition.r}, got {l_split}")
    if l_split == partition.r:
        verdict = verify_theorem3(n, partition, seeds, params, jobs)
        return verdict.model_copy(update={'theorem': "theorem4", 'l_split': l_split})

    params = params or SpectralParams.default(partition)
    seeds = resolve_seeds(seeds)
    carrier = Carrier('p', partition, l_split)
    l_p = manakov_family(params, carrier)
    family = l_p + noether_family(partition, carrier, first_block=l_split)
    commutative = l_p + factor_manakov_family(partition, carrier, l_split)
    kind = BracketKind.reduced(partition, l_split)
    tols = config.tolerances

    def measure(point_seed: int) -> Dict[str, Any]:
        M = sample_generic(point_seed, 'p', n, partition, l_split)
        dim_j, corank = bracket_corank(M, kind, family)
        target = dim_j + corank
        report = ddim_dind(family, M, kind, seed=point_seed)
        lhs = report.ddim + report.dind

        second = ddim_dind(commutative, M, kind)
        involution = involution_matrix(commutative, M, kind).max_normalized
        commutative_ok = 2 * second.ddim == target and involution <= tols.involution

        return {
            'ranks': {'ddim': report.ddim, 'dind': report.dind, 'j_dim': dim_j, 'j_corank': corank,
                      'k0_ddim': second.ddim, 'k0_dind': second.dind},
            'residuals': {'k0_involution': involution},
            'lhs': lhs, 'rhs': target,
            'passed': lhs == target and commutative_ok,
        }

    records = evaluate_points(seeds, measure, jobs)
    return finish_verdict(CompletenessVerdict.aggregate(
        "theorem4", n, partition.parts, seeds, records,
        identity="ddim(L_p+K) + dind(L_p+K) = dim j_M + corank", l_split=l_split
    ))


def antidiagonal_normal_form(n: int, m: Optional[Sequence[float]] = None) -> np.ndarray:
    """sum_j m_j E_j ^ E_{n+1-j}, j = 1..floor(n/2); default m_j = j"""
    count = n // 2
    m = tuple(range(1, count + 1)) if m is None else tuple(m)
    if len(m) != count:
        raise ParameterError(f"need {count} coefficients for n={n}, got {len(m)}")
    M = np.zeros((n, n))
    for j, mj in enumerate(m):
        M += mj * wedge(n, j, n - 1 - j)
    return M


def _sym_basis(n: int) -> np.ndarray:
    iu = np.triu_indices(n)
    S = np.zeros((len(iu[0]), n, n))
    for k, (i, j) in enumerate(zip(*iu)):
        S[k, i, j] = S[k, j, i] = 1.0
    return S


def lemma1_nullity(M, A) -> int:
    """Nullity of [M, xi2] + [A, xi1] = 0, pr_{so(n)_M}[A, xi2] = 0 over so(n)_M x Sym(n)

    Args:
        M: Regular element of so(n)
        A: Diagonal matrix or its diagonal

    Returns:
        Dimension of the solution space

    Raises:
        NonGenericPointError: if the centralizer of M exceeds floor(n/2) or ranks are unstable
    """
    M = skew_matrix(M)
    n = M.shape[0]
    Amat = np.diag(diag_vector(A))
    Z = centralizer_basis(M)
    if Z.shape[0] > n // 2:
        raise NonGenericPointError(f"centralizer of dimension {Z.shape[0]} > {n // 2}")

    iu = np.triu_indices(n)
    S = _sym_basis(n)
    Zm = [from_coords(row, n) for row in Z]

    columns = []
    for Zi in Zm:
        top = commutator(Amat, Zi)[iu]
        columns.append(np.concatenate([top, np.zeros(len(Zm))]))
    for Sj in S:
        top = commutator(M, Sj)[iu]
        bottom = Z @ to_coords(commutator(Amat, Sj))
        columns.append(np.concatenate([top, bottom]))

    system = np.column_stack(columns)
    reference = float(np.linalg.norm(M) + np.linalg.norm(Amat))
    decision = numerical_rank(system, reference=reference)
    if not decision.stable:
        raise NonGenericPointError("pencil-kernel system rank is unstable")
    return system.shape[1] - decision.rank


def verify_lemma1(n: int, seeds: Optional[Sequence[int]] = None,
                  params: Optional[SpectralParams] = None, jobs: int = 1) -> CompletenessVerdict:
    """Nullity of the pencil-kernel system equals n at generic M"""
    params = params or SpectralParams.default(BlockPartition.regular(n))
    seeds = resolve_seeds(seeds)
    A = params.a

    def measure(point_seed: int) -> Dict[str, Any]:
        M = sample_generic(point_seed, 'so', n)
        nullity = lemma1_nullity(M, A)
        return {'ranks': {'nullity': nullity}, 'lhs': nullity, 'rhs': n, 'passed': nullity == n}

    records = evaluate_points(seeds, measure, jobs)
    return finish_verdict(CompletenessVerdict.aggregate(
        "lemma1", n, params.partition.parts, seeds, records,
        identity="nullity = n", target=n
    ))


def verify_reduction(n: int, partition: PartitionLike, seeds: Optional[Sequence[int]] = None,
                     jobs: int = 1) -> CompletenessVerdict:
    """Normal-form reduction zeroes the designated columns and j_{M'} = j'_{M'}

    The equality is checked at the normal-form image of a sampled point and at an
    independent generic point of the reduced transversal space.
    """
    partition = as_partition(partition, n)
    seeds = resolve_seeds(seeds)
    nf0 = normal_form_reduce(np.zeros((n, n)), partition)
    if not nf0.applicable:
        return finish_verdict(CompletenessVerdict.not_applicable(
            "reduction", n, partition.parts, seeds,
            note=f"k_r = {partition.parts[-1]} <= floor((n+1)/2) = {(n + 1) // 2}"
        ))
    tols = config.tolerances
    small = reduced_partition(partition)

    def measure(point_seed: int) -> Dict[str, Any]:
        M = sample_generic(point_seed, 'v', n, partition)
        nf = normal_form_reduce(M, partition)
        scale = max(1.0, float(np.linalg.norm(M)))
        zeroed = float(np.abs(nf.zeroed_columns()).max(initial=0.0)) / scale
        orth, isometry = conjugation_error(nf)
        det = float(np.linalg.det(nf.K))
        check = verify_reduction_equality(nf.reduced_M, n, partition)
        generic = verify_reduction_equality(
            sample_generic(point_seed, 'v', small.n, small), n, partition)
        passed = (zeroed <= 1e-12 and orth <= 1e-13 and abs(det - 1.0) <= 1e-12
                  and isometry <= tols.identity and check.passed and generic.passed)
        return {
            'ranks': {'j_dim': check.full_dim, 'reduced_j_dim': check.reduced_dim, 'l': nf.l,
                      'generic_j_dim': generic.full_dim},
            'residuals': {'zeroed_columns': zeroed, 'orthogonality': orth,
                          'isometry': isometry, 'j_equality': check.residual,
                          'j_equality_generic': generic.residual},
            'passed': passed,
        }

    records = evaluate_points(seeds, measure, jobs)
    return finish_verdict(CompletenessVerdict.aggregate(
        "reduction", n, partition.parts, seeds, records,
        identity="j_{M'} = j'_{M'} after normal-form reduction"
    ))
