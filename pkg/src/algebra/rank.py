"""
Numerical Rank Tools
SVD rank decisions with stability bands, null spaces and subspace comparisons
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg as sla

from ..core.config import config


@dataclass(frozen=True)
class RankDecision:
    """Outcome of one SVD rank test"""
    rank: int
    singular_values: np.ndarray
    tolerance: float
    stable: bool


def numerical_rank(matrix, reference: float = 0.0,
                   tol_factor: Optional[float] = None,
                   band: Optional[float] = None) -> RankDecision:
    """Rank of a matrix under tau = max_dim * eps * scale * tol_factor

    Args:
        matrix: 2-D array
        reference: Lower bound for the scale; scale = max(sigma_max, reference)
        tol_factor: Multiplier (default from config tolerances)
        band: A decision is stable when no singular value lies in (tau/band, tau*band]

    Returns:
        RankDecision
    """
    tol_factor = config.tolerances.rank_tol_factor if tol_factor is None else tol_factor
    band = config.tolerances.rank_stability_band if band is None else band
    A = np.atleast_2d(np.asarray(matrix, dtype=float))
    if A.size == 0:
        return RankDecision(0, np.zeros(0), 0.0, True)

    s = np.linalg.svd(A, compute_uv=False)
    scale = max(float(s[0]), float(reference))
    tau = max(A.shape) * np.finfo(float).eps * scale * tol_factor
    rank = int(np.sum(s > tau))
    stable = int(np.sum(s > tau * band)) == int(np.sum(s > tau / band))
    return RankDecision(rank, s, tau, stable)


def null_space(matrix, cols: Optional[int] = None, reference: float = 0.0,
               tol_factor: Optional[float] = None):
    """Orthonormal basis (as columns) of the null space

    Args:
        matrix: 2-D array with `cols` columns (an empty matrix has full null space)
        cols: Number of columns when the matrix has no rows
        reference: Scale floor passed to numerical_rank
        tol_factor: Rank tolerance factor

    Returns:
        (basis, decision): basis has shape (cols, nullity)
    """
    A = np.asarray(matrix, dtype=float)
    if A.ndim != 2 or A.size == 0:
        A = A.reshape(0, cols if cols is not None else (A.shape[-1] if A.ndim == 2 else 0))
    ncols = A.shape[1]
    if A.shape[0] == 0 or ncols == 0:
        return np.eye(ncols), RankDecision(0, np.zeros(0), 0.0, True)
    decision = numerical_rank(A, reference=reference, tol_factor=tol_factor)
    _, _, vt = np.linalg.svd(A, full_matrices=True)
    return vt[decision.rank:].T.copy(), decision


def orth_rows(rows, reference: float = 0.0, tol_factor: Optional[float] = None):
    """Orthonormal basis (as rows) of the row span

    Returns:
        (basis, decision): basis has shape (rank, cols)
    """
    A = np.asarray(rows, dtype=float)
    if A.size == 0:
        return np.zeros((0, A.shape[1] if A.ndim == 2 else 0)), RankDecision(0, np.zeros(0), 0.0, True)
    decision = numerical_rank(A, reference=reference, tol_factor=tol_factor)
    _, _, vt = np.linalg.svd(A, full_matrices=False)
    return vt[:decision.rank].copy(), decision


def containment_residual(U: np.ndarray, V: np.ndarray) -> float:
    """Largest sine between span(U) and its projection into span(V)

    Both arguments hold orthonormal basis vectors as columns.
    """
    if U.shape[1] == 0:
        return 0.0
    if V.shape[1] == 0:
        return 1.0
    R = U - V @ (V.T @ U)
    return float(np.linalg.norm(R, 2))


def subspace_distance(U: np.ndarray, V: np.ndarray) -> float:
    """Largest principal-angle sine between two subspaces (1.0 if dimensions differ)"""
    if U.shape[1] != V.shape[1]:
        return 1.0
    if U.shape[1] == 0:
        return 0.0
    return float(np.sin(np.max(sla.subspace_angles(U, V))))
