"""
Normal-Form Reduction
Conjugation of M in v into the smaller space v' when the last block is large,
and the equality of j-spaces computed in the full and the reduced data
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import linalg as sla

from ..algebra.liealg import BlockPartition, from_coords, skew_matrix, to_coords
from ..algebra.orbits import j_space
from ..algebra.rank import subspace_distance
from ..core.config import config
from ..core.errors import ShapeError
from ..core.logger import logger


def reduction_size(partition: BlockPartition) -> int:
    """l = k_r - floor((n+1)/2); positive when the reduction applies"""
    if partition.r < 2:
        return 0
    return partition.parts[-1] - (partition.n + 1) // 2


def reduced_partition(partition: BlockPartition) -> Optional[BlockPartition]:
    """Partition of n' = n - 2l with last block k_r - 2l, or None when l <= 0"""
    l = reduction_size(partition)
    if l <= 0:
        return None
    return BlockPartition(partition.parts[:-1] + (partition.parts[-1] - 2 * l,))


@dataclass(frozen=True, eq=False)
class NormalForm:
    """Result of normal_form_reduce"""
    M: np.ndarray
    M_prime: np.ndarray
    K: np.ndarray
    l: int
    partition: BlockPartition
    reduced: Optional[BlockPartition]

    @property
    def applicable(self) -> bool:
        return self.l > 0

    @property
    def reduced_M(self) -> np.ndarray:
        """M' as an element of so(n'), the leading n' x n' block"""
        if not self.applicable:
            return self.M_prime
        m = self.reduced.n
        return self.M_prime[:m, :m].copy()

    def zeroed_columns(self) -> np.ndarray:
        """The last 2l columns of the transformed M_12 block"""
        n, k = self.partition.n, self.partition.parts[-1]
        if not self.applicable:
            return np.zeros((n - k, 0))
        return self.M_prime[:n - k, n - 2 * self.l:]


def normal_form_reduce(M, partition: BlockPartition) -> NormalForm:
    """Conjugate M in v by K = diag(I, U), U in SO(k_r), into v'

    U is the transposed orthogonal factor of a full QR factorization of M_12^T,
    whose trailing columns span the null space of M_12 (rank-deficient M_12
    just enlarges that null space).

    Args:
        M: Element of v for the partition
        partition: Block partition of n

    Returns:
        NormalForm; with l <= 0 the identity transformation
    """
    M = skew_matrix(M)
    n = partition.n
    if M.shape[0] != n:
        raise ShapeError(f"matrix of size {M.shape[0]} does not match partition {partition}")

    l = reduction_size(partition)
    if l <= 0:
        return NormalForm(M, M.copy(), np.eye(n), max(l, 0), partition, None)

    k = partition.parts[-1]
    M12 = M[:n - k, n - k:]
    Q, _ = sla.qr(M12.T, mode='full')
    U = Q.T.copy()
    if np.linalg.det(U) < 0:
        U[-1] *= -1.0

    K = np.eye(n)
    K[n - k:, n - k:] = U
    M_prime = K @ M @ K.T
    M_prime = (M_prime - M_prime.T) / 2.0

    nf = NormalForm(M, M_prime, K, l, partition, reduced_partition(partition))
    logger.debug(f"normal form on {partition}: l={l}, residual "
                 f"{float(np.abs(nf.zeroed_columns()).max(initial=0.0)):.2e}")
    return nf


def embed_rows(rows: np.ndarray, n_small: int, n: int) -> np.ndarray:
    """so(n') wedge-coordinate rows mapped into so(n) through the leading block"""
    out = np.zeros((rows.shape[0], n * (n - 1) // 2))
    for idx, row in enumerate(rows):
        X = np.zeros((n, n))
        X[:n_small, :n_small] = from_coords(row, n_small)
        out[idx] = to_coords(X)
    return out


@dataclass(frozen=True)
class ReductionCheck:
    """Comparison of j_{M'} in the full data with j'_{M'} in the reduced data"""
    applicable: bool
    residual: float = 0.0
    full_dim: int = 0
    reduced_dim: int = 0
    tolerance: float = 0.0

    @property
    def passed(self) -> bool:
        return self.applicable and self.full_dim == self.reduced_dim and self.residual <= self.tolerance

    def __bool__(self) -> bool:
        return self.passed


def verify_reduction_equality(M_reduced, n: int, partition: BlockPartition,
                              tol: Optional[float] = None) -> ReductionCheck:
    """Check j_{M'} (inside so(n)) against j'_{M'} (inside so(n'), embedded)

    Args:
        M_reduced: Element of v' as an n' x n' skew matrix
        n: Full dimension
        partition: Full partition of n
        tol: Largest principal-angle sine accepted (default: subspace tolerance)

    Returns:
        ReductionCheck (not applicable when k_r <= floor((n+1)/2))
    """
    tol = config.tolerances.subspace if tol is None else tol
    if partition.n != n:
        raise ShapeError(f"partition {partition} does not match n={n}")
    small = reduced_partition(partition)
    if small is None:
        return ReductionCheck(applicable=False, tolerance=tol)

    M_reduced = skew_matrix(M_reduced)
    if M_reduced.shape[0] != small.n:
        raise ShapeError(f"reduced point must have size {small.n}, got {M_reduced.shape[0]}")

    M_full = np.zeros((n, n))
    M_full[:small.n, :small.n] = M_reduced

    full = j_space(M_full, partition)
    reduced = embed_rows(j_space(M_reduced, small), small.n, n)
    residual = subspace_distance(full.T, reduced.T)
    check = ReductionCheck(True, residual, full.shape[0], reduced.shape[0], tol)
    logger.debug(f"reduction {partition} -> {small}: dims {check.full_dim}/{check.reduced_dim}, "
                 f"residual {residual:.2e}")
    return check


def conjugation_error(nf: NormalForm) -> Tuple[float, float]:
    """(||K K^T - I||, |<M', M'> - <M, M>| relative) for a normal form"""
    n = nf.K.shape[0]
    orth = float(np.linalg.norm(nf.K @ nf.K.T - np.eye(n)))
    before, after = float(np.sum(nf.M * nf.M)), float(np.sum(nf.M_prime * nf.M_prime))
    return orth, abs(after - before) / max(1.0, before)
