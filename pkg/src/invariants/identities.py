"""
Algebraic Identities
Cross-commutation of the L and J families, restriction of pencil Casimirs and the determinant identity
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..algebra.liealg import SpectralParams, skew_matrix, square_matrix
from ..core.config import config
from ..core.errors import PoleError
from ..core.logger import logger
from .brackets import BracketKind, involution_matrix
from .families import diag_vector, bolsinov_family, casimir_gl_eval, manakov_family


@dataclass(frozen=True)
class CheckResult:
    """A measured residual compared with its tolerance"""
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)


def cross_commutation_check(M, params: SpectralParams, tol: Optional[float] = None,
                            j_params: Optional[SpectralParams] = None) -> CheckResult:
    """Largest normalized Lie-Poisson bracket between L and J members

    Args:
        M: Point of so(n)
        params: Spectra defining L (and J unless j_params is given)
        tol: Pass threshold (default: involution tolerance)
        j_params: Spectra for the J family, for negative controls

    Returns:
        CheckResult
    """
    tol = config.tolerances.involution if tol is None else tol
    M = skew_matrix(M)
    j_params = params if j_params is None else j_params
    L = manakov_family(params)
    J = bolsinov_family(j_params)
    result = involution_matrix(L, M, BracketKind.lie_poisson(), rows=J)
    value = result.max_normalized
    logger.debug(f"cross-commutation n={params.n}: max normalized bracket {value:.3e}")
    return CheckResult(value, tol)


def restriction_check(M, A, lam: float, k: int) -> float:
    """|f_{lam,k}(M) - lam^k tr(M + lam A)^k| / max(1, |lam^k tr(M + lam A)^k|)"""
    M = skew_matrix(M)
    a = diag_vector(A)
    target = lam ** k * float(np.trace(np.linalg.matrix_power(M + lam * np.diag(a), k)))
    return abs(casimir_gl_eval(M, a, lam, k) - target) / max(1.0, abs(target))


def det_identity_check(M, A, alpha: float, beta: float) -> float:
    """Scale-normalized residual of det(M (A + alpha I)^-1 + beta I) = det(M + beta A + alpha beta I) / det(alpha I + A)

    Raises:
        PoleError: if A + alpha I is singular
    """
    M = square_matrix(M)
    a = diag_vector(A)
    n = M.shape[0]
    shifted = a + alpha
    if np.min(np.abs(shifted)) <= 1e-12 * max(1.0, abs(alpha)):
        raise PoleError(f"A + {alpha:g} I is singular")
    lhs = np.linalg.det(M @ np.diag(1.0 / shifted) + beta * np.eye(n))
    rhs = np.linalg.det(M + beta * np.diag(a) + alpha * beta * np.eye(n)) / np.prod(shifted)
    return float(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
