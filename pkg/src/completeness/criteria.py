"""
Completeness Criteria
Differential dimension and index of a family, coisotropy of its gradient span
and bracket-orthogonal complements, with rank-boundary resampling
"""

from typing import Callable, Optional, Tuple, TypeVar

import numpy as np
from scipy import linalg as sla

from ..algebra.liealg import derived_seed
from ..algebra.rank import (
    containment_residual, null_space, numerical_rank, orth_rows, subspace_distance
)
from ..core.config import config
from ..core.errors import IndeterminateRankError, NonGenericPointError
from ..core.logger import logger
from ..invariants.brackets import BracketKind, BracketSpace, bracket_space
from ..invariants.families import IntegralFamily
from .report import FamilySpanReport

T = TypeVar("T")


def gradient_matrix(family: IntegralFamily, X, space: BracketSpace) -> np.ndarray:
    """Stacked gradients in working-space coordinates, each row divided by its member scale"""
    rows = [space.coords(G) / member.scale(X)
            for member, G in zip(family, family.gradients(X))]
    return np.asarray(rows, dtype=float).reshape(len(family), space.dim)


def gradient_span(family: IntegralFamily, X, kind: BracketKind):
    """Orthonormal rows spanning F_X together with the working space

    Returns:
        (basis, space, decision)
    """
    family.check_point(X)
    space = bracket_space(X, kind, family.carrier)
    basis, decision = orth_rows(gradient_matrix(family, X, space))
    return basis, space, decision


def ddim_dind(family: IntegralFamily, X, kind: BracketKind,
              seed: Optional[int] = None) -> FamilySpanReport:
    """Differential dimension and differential index of a family at X

    Args:
        family: Integral family on X's carrier
        X: Point of the carrier
        kind: Bracket used for the index
        seed: Point seed recorded in the report

    Returns:
        FamilySpanReport

    Raises:
        NonGenericPointError: if either rank decision is unstable
    """
    if len(family) == 0:
        return FamilySpanReport(seed=seed, members=0, gradient_singular_values=[], ddim=0,
                                bracket_singular_values=[], dind=0)

    basis, space, gdec = gradient_span(family, X, kind)
    gram = basis @ space.tensor @ basis.T
    bdec = numerical_rank(gram, reference=space.reference)
    if not (gdec.stable and bdec.stable):
        raise NonGenericPointError(
            f"rank decision unstable for {len(family)} members "
            f"(gradient stable={gdec.stable}, bracket stable={bdec.stable})"
        )

    ddim = gdec.rank
    dind = ddim - bdec.rank
    logger.debug(f"ddim={ddim} dind={dind} for {len(family)} members on {family.carrier}")
    return FamilySpanReport(
        seed=seed, members=len(family),
        gradient_singular_values=[float(s) for s in gdec.singular_values],
        ddim=ddim,
        bracket_singular_values=[float(s) for s in bdec.singular_values],
        dind=dind,
    )


def bracket_corank(X, kind: BracketKind, family: IntegralFamily) -> Tuple[int, int]:
    """(dimension, corank) of the working space of the family's carrier under `kind`"""
    space = bracket_space(X, kind, family.carrier)
    decision = numerical_rank(space.tensor, reference=space.reference)
    if not decision.stable:
        raise NonGenericPointError("bracket corank decision is unstable")
    return space.dim, space.dim - decision.rank


def bracket_complement(basis: np.ndarray, tensor: np.ndarray, reference: float,
                       method: str = "svd") -> np.ndarray:
    """Columns spanning {xi : Lambda(F, xi) = 0} for F spanned by the rows of `basis`

    "svd" takes the null space of basis @ tensor; "qr" takes the orthogonal
    complement of the image of tensor^T basis^T from a pivoted QR factorization.
    """
    d = tensor.shape[0]
    if basis.shape[0] == 0:
        return np.eye(d)

    if method == "svd":
        complement, decision = null_space(basis @ tensor, cols=d, reference=reference)
    elif method == "qr":
        image = tensor.T @ basis.T
        decision = numerical_rank(image, reference=reference)
        Q, _, _ = sla.qr(image, mode='full', pivoting=True)
        complement = Q[:, decision.rank:]
    else:
        raise ValueError(f"unknown complement method '{method}'")

    if not decision.stable:
        raise NonGenericPointError("bracket complement rank decision is unstable")
    return complement


def coisotropy_residual(family: IntegralFamily, X, kind: BracketKind) -> float:
    """Largest sine between F_X^Lambda and its projection into F_X + ker Lambda_X"""
    basis, space, decision = gradient_span(family, X, kind)
    if not decision.stable:
        raise NonGenericPointError("gradient span rank decision is unstable")

    complement = bracket_complement(basis, space.tensor, space.reference)
    kernel, kdec = null_space(space.tensor, cols=space.dim, reference=space.reference)
    if not kdec.stable:
        raise NonGenericPointError("bracket kernel rank decision is unstable")

    enlarged, _ = orth_rows(np.vstack([basis, kernel.T]))
    residual = containment_residual(complement, enlarged.T)
    logger.debug(f"coisotropy residual {residual:.3e} ({len(family)} members)")
    return residual


def coisotropy_check(family: IntegralFamily, X, kind: BracketKind,
                     tol: Optional[float] = None) -> bool:
    """Whether F_X^Lambda lies in F_X + ker Lambda_X within the subspace tolerance"""
    tol = config.tolerances.subspace if tol is None else tol
    return coisotropy_residual(family, X, kind) <= tol


def self_orthogonality(family: IntegralFamily, X, kind: BracketKind) -> Tuple[float, float]:
    """Compare F_X^Lambda with F_X inside the working space

    Returns:
        (distance between F_X^Lambda and F_X,
         distance between the SVD and QR constructions of F_X^Lambda)
    """
    basis, space, decision = gradient_span(family, X, kind)
    if not decision.stable:
        raise NonGenericPointError("gradient span rank decision is unstable")
    by_svd = bracket_complement(basis, space.tensor, space.reference, "svd")
    by_qr = bracket_complement(basis, space.tensor, space.reference, "qr")
    return subspace_distance(by_svd, basis.T), subspace_distance(by_svd, by_qr)


def with_resampling(seed: int, measure: Callable[[int], T],
                    attempts: Optional[int] = None) -> Tuple[T, int, int]:
    """Run `measure` on derived seeds until the point is generic

    Args:
        seed: Base seed
        measure: Callable taking a point seed; raises NonGenericPointError on boundary points
        attempts: Number of redraws after the first (default from config)

    Returns:
        (result, point_seed, attempt)

    Raises:
        IndeterminateRankError: if every draw is non-generic
    """
    attempts = config.tolerances.resample_attempts if attempts is None else attempts
    last: Optional[Exception] = None
    for attempt in range(attempts + 1):
        point_seed = derived_seed(seed, attempt)
        try:
            return measure(point_seed), point_seed, attempt
        except NonGenericPointError as e:
            last = e
            logger.warning(f"seed {seed} attempt {attempt}: non-generic point ({e}), resampling")
    raise IndeterminateRankError(f"seed {seed}: rank undecided after {attempts} resamples ({last})")
