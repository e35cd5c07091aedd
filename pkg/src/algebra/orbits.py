"""
Adjoint Orbits
ad-matrices in the wedge basis, orbit dimensions, centralizers and the reduced space j_M
"""

from typing import Optional

import numpy as np

from .liealg import (
    BlockPartition, Carrier, WedgeBasis, basis_matrices, skew_matrix, upper_indices
)
from .rank import numerical_rank, null_space, RankDecision
from ..core.errors import NonGenericPointError


def ad_matrix(x) -> np.ndarray:
    """Matrix of Y -> [x, Y] on so(n) in wedge coordinates (column b = image of E_b)"""
    x = skew_matrix(x)
    n = x.shape[0]
    E = basis_matrices(n, WedgeBasis(BlockPartition.regular(n)).pairs)
    images = np.einsum('ij,bjk->bik', x, E) - np.einsum('bij,jk->bik', E, x)
    iu = upper_indices(n)
    return images[:, iu[0], iu[1]].T


def orbit_rank(x) -> RankDecision:
    x = skew_matrix(x)
    return numerical_rank(ad_matrix(x), reference=float(np.linalg.norm(x)))


def orbit_dimension(x) -> int:
    """Dimension of the adjoint orbit of x in so(n)

    Raises:
        NonGenericPointError: if the rank decision is unstable
    """
    decision = orbit_rank(x)
    if not decision.stable:
        raise NonGenericPointError("orbit dimension rank decision is unstable")
    return decision.rank


def centralizer_basis(x) -> np.ndarray:
    """Orthonormal basis of so(n)_x, as rows in wedge coordinates"""
    x = skew_matrix(x)
    basis, decision = null_space(ad_matrix(x), reference=float(np.linalg.norm(x)))
    if not decision.stable:
        raise NonGenericPointError("centralizer rank decision is unstable")
    return basis.T


def j_space(M, partition: BlockPartition, l_split: Optional[int] = None) -> np.ndarray:
    """Orthonormal basis of j_M = {eta in p : [M, eta] orthogonal to h}

    With l_split omitted (or equal to r), h = so(n)_A and p = v.

    Args:
        M: Point of the carrier p
        partition: Block partition
        l_split: Number of leading blocks forming h

    Returns:
        Rows are basis vectors in full so(n) wedge coordinates
    """
    M = skew_matrix(M)
    r = partition.r
    if l_split is None or l_split == r:
        domain = Carrier('v', partition)
        l_split = r
    else:
        domain = Carrier('p', partition, l_split)

    h_indices = [k for k, (p, q) in enumerate(WedgeBasis(partition).block_pairs)
                 if p == q and p < l_split]
    if domain.dim == 0:
        return np.zeros((0, WedgeBasis(partition).dim))
    if not h_indices:
        return domain.embedding()

    ad = ad_matrix(M)
    restricted = ad[np.ix_(h_indices, domain.member_indices)]
    basis, decision = null_space(restricted, reference=float(np.linalg.norm(M)))
    if not decision.stable:
        raise NonGenericPointError("j-space rank decision is unstable")
    return basis.T @ domain.embedding()
