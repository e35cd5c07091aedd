"""
Poisson Brackets
Lie-Poisson, frozen-argument, gl(n) pencil and reduced (j_M) brackets,
their structure matrices and involution matrices of integral families
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from ..algebra.liealg import (
    BlockPartition, Carrier, WedgeBasis, basis_matrices, scalar_product, commutator,
    skew, sym, square_matrix, to_coords, from_coords
)
from ..algebra.orbits import j_space
from ..core.errors import CarrierMismatchError, ParameterError
from .families import IntegralFamily, IntegralMember

NORMALIZATION_GUARD = 1e-300


class BracketType(str, Enum):
    """Bracket families"""
    LIE_POISSON = "lie_poisson"
    FROZEN_A = "frozen_a"
    PENCIL_GL = "pencil_gl"
    REDUCED = "reduced"


@dataclass(frozen=True, eq=False)
class BracketKind:
    """A bracket together with the data it depends on"""
    type: BracketType
    A: Optional[np.ndarray] = None
    lambdas: Tuple[float, float] = (1.0, 0.0)
    partition: Optional[BlockPartition] = None
    l_split: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'type', BracketType(self.type))
        if self.type in (BracketType.FROZEN_A, BracketType.PENCIL_GL):
            if self.A is None:
                raise ParameterError(f"{self.type.value} bracket needs the matrix A")
            object.__setattr__(self, 'A', square_matrix(self.A))
        if self.type == BracketType.PENCIL_GL and tuple(self.lambdas) == (0.0, 0.0):
            raise ParameterError("pencil coefficients (lambda1, lambda2) must not both vanish")
        if self.type == BracketType.REDUCED and self.partition is None:
            raise ParameterError("reduced bracket needs a partition")

    @classmethod
    def lie_poisson(cls) -> "BracketKind":
        return cls(BracketType.LIE_POISSON)

    @classmethod
    def frozen(cls, A) -> "BracketKind":
        return cls(BracketType.FROZEN_A, A=A)

    @classmethod
    def pencil(cls, A, lambda1: float, lambda2: float) -> "BracketKind":
        return cls(BracketType.PENCIL_GL, A=A, lambdas=(float(lambda1), float(lambda2)))

    @classmethod
    def reduced(cls, partition: BlockPartition, l_split: Optional[int] = None) -> "BracketKind":
        return cls(BracketType.REDUCED, partition=partition, l_split=l_split)

    @property
    def on_gl(self) -> bool:
        return self.type == BracketType.PENCIL_GL


def lie_poisson_form(M, xi1, xi2) -> float:
    """-<M, [xi1, xi2]>"""
    return -scalar_product(M, commutator(xi1, xi2))


def frozen_form(M, A, xi1, xi2) -> float:
    """-<M, xi1 A xi2 - xi2 A xi1>"""
    return -scalar_product(M, xi1 @ A @ xi2 - xi2 @ A @ xi1)


def pencil_form(X, A, lambda1: float, lambda2: float, g1, g2) -> float:
    """lambda1 Lambda1 + lambda2 Lambda2 on gl(n)

    Lambda1 = -<X, [xi1, xi2] + [xi1, eta2] + [eta1, xi2]>, Lambda2 = -<X + A, [g1, g2]>
    with xi = skew(g), eta = sym(g).
    """
    X = square_matrix(X)
    full = commutator(g1, g2)
    eta = commutator(sym(g1), sym(g2))
    lam1 = -scalar_product(X, full - eta)
    lam2 = -scalar_product(X + A, full)
    return lambda1 * lam1 + lambda2 * lam2


def _form_matrix(Y: np.ndarray, P: np.ndarray, Q: np.ndarray, mid: Optional[np.ndarray] = None) -> np.ndarray:
    """T_ab = -<Y, P_a mid Q_b - Q_b mid P_a> for stacks P, Q"""
    if mid is None:
        T = np.einsum('ij,ajk,bki->ab', Y, P, Q, optimize=True)
        U = np.einsum('ij,bjk,aki->ab', Y, Q, P, optimize=True)
    else:
        T = np.einsum('ij,ajk,kl,bli->ab', Y, P, mid, Q, optimize=True)
        U = np.einsum('ij,bjk,kl,ali->ab', Y, Q, mid, P, optimize=True)
    return 0.5 * (T - U)


def structure_matrix(X, kind: BracketKind) -> np.ndarray:
    """Bracket tensor on the full coordinate space

    so(n) kinds use orthonormal wedge coordinates; the pencil uses entries of gl(n)
    (row-major), in which the bracket of G1, G2 is vec(G1)^T T vec(G2).
    """
    X = square_matrix(X)
    n = X.shape[0]
    if kind.on_gl:
        B = np.zeros((n * n, n, n))
        B[np.arange(n * n), np.repeat(np.arange(n), n), np.tile(np.arange(n), n)] = 1.0
        Bs = (B + np.transpose(B, (0, 2, 1))) / 2.0
        l1, l2 = kind.lambdas
        return (_form_matrix((l1 + l2) * X + l2 * kind.A, B, B)
                - l1 * _form_matrix(X, Bs, Bs))

    E = basis_matrices(n, WedgeBasis(BlockPartition.regular(n)).pairs)
    if kind.type == BracketType.FROZEN_A:
        return _form_matrix(X, E, E, kind.A)
    return _form_matrix(X, E, E)


@dataclass(frozen=True, eq=False)
class BracketSpace:
    """Coordinates and bracket tensor in which a family's gradients are compared

    basis rows are orthonormal vectors of the working space in full coordinates
    (identity for unreduced kinds); tensor is the bracket in basis coordinates.
    """
    basis: np.ndarray
    tensor: np.ndarray
    full_tensor: np.ndarray
    project: Callable[[np.ndarray], np.ndarray]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coords(self, G) -> np.ndarray:
        return self.basis @ self.project(G)

    @property
    def reference(self) -> float:
        """Scale of the full bracket tensor, used as an absolute rank reference"""
        if self.full_tensor.size == 0:
            return 0.0
        return float(np.linalg.norm(self.full_tensor, 2))


def bracket_space(X, kind: BracketKind, carrier: Carrier) -> BracketSpace:
    """Working space for bracket computations on a carrier

    Raises:
        CarrierMismatchError: if the bracket and carrier disagree on gl(n) vs so(n)
    """
    X = square_matrix(X)
    n = X.shape[0]
    if kind.on_gl != (carrier.kind == 'gl'):
        raise CarrierMismatchError(f"{kind.type.value} bracket cannot act on carrier {carrier}")

    T = structure_matrix(X, kind)
    if kind.on_gl:
        return BracketSpace(np.eye(n * n), T, T, lambda G: square_matrix(G).reshape(-1))

    if kind.type == BracketType.REDUCED:
        basis = j_space(X, kind.partition, kind.l_split)
    else:
        basis = carrier.embedding()
    return BracketSpace(basis, basis @ T @ basis.T, T,
                        lambda G: to_coords(carrier.project(G)))


def bracket(f: IntegralMember, g: IntegralMember, X, kind: BracketKind,
            carrier: Optional[Carrier] = None) -> float:
    """Bracket of two members at X

    Args:
        f: First member
        g: Second member
        X: Point (skew for so(n) kinds, any square matrix for the pencil)
        kind: Bracket kind
        carrier: Carrier the members are restricted to (so(n) or gl(n) by default)

    Returns:
        Real value
    """
    X = square_matrix(X)
    for m in (f, g):
        if (m.space == 'gl') != kind.on_gl:
            raise CarrierMismatchError(f"member {m.tag} ({m.space}) used with {kind.type.value} bracket")

    gf, gg = f.gradient(X), g.gradient(X)
    if carrier is not None:
        gf, gg = carrier.project(gf), carrier.project(gg)

    if kind.type == BracketType.LIE_POISSON:
        return lie_poisson_form(X, gf, gg)
    if kind.type == BracketType.FROZEN_A:
        return frozen_form(X, kind.A, gf, gg)
    if kind.type == BracketType.PENCIL_GL:
        return pencil_form(X, kind.A, kind.lambdas[0], kind.lambdas[1], gf, gg)

    Q = j_space(X, kind.partition, kind.l_split)
    n = X.shape[0]
    rf = from_coords(Q.T @ (Q @ to_coords(gf)), n)
    rg = from_coords(Q.T @ (Q @ to_coords(gg)), n)
    return lie_poisson_form(X, rf, rg)


@dataclass(frozen=True)
class InvolutionResult:
    """Pairwise brackets with their scale-free counterparts"""
    matrix: np.ndarray
    normalized: np.ndarray

    @property
    def max_normalized(self) -> float:
        return float(np.max(np.abs(self.normalized), initial=0.0))


def involution_matrix(family: IntegralFamily, X, kind: BracketKind,
                      rows: Optional[IntegralFamily] = None) -> InvolutionResult:
    """Matrix of brackets {f_i, f_j}, normalized by ||grad f_i|| ||grad f_j|| ||X||

    Args:
        family: Column family (and row family unless `rows` is given)
        X: Point of the carrier
        kind: Bracket kind
        rows: Optional second family on the same carrier for cross blocks

    Returns:
        InvolutionResult
    """
    rows = family if rows is None else rows
    if rows.carrier != family.carrier:
        raise CarrierMismatchError(f"families on {rows.carrier} and {family.carrier}")
    family.check_point(X)
    space = bracket_space(X, kind, family.carrier)

    R = np.asarray([space.coords(G) for G in rows.gradients(X)]).reshape(len(rows), space.dim)
    C = np.asarray([space.coords(G) for G in family.gradients(X)]).reshape(len(family), space.dim)
    matrix = R @ space.tensor @ C.T
    scale = np.outer(np.linalg.norm(R, axis=1), np.linalg.norm(C, axis=1)) * np.linalg.norm(X)
    return InvolutionResult(matrix, np.abs(matrix) / (scale + NORMALIZATION_GUARD))


def linear_gradient(form: Callable[[np.ndarray], float], n: int, on_gl: bool) -> np.ndarray:
    """Gradient of an affine function given as a callable on matrices"""
    base = form(np.zeros((n, n)))
    if on_gl:
        G = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                E = np.zeros((n, n))
                E[i, j] = 1.0
                G[j, i] += -2.0 * (form(E) - base)
        return G
    E = basis_matrices(n, WedgeBasis(BlockPartition.regular(n)).pairs)
    return sum(((form(Eb) - base) * Eb for Eb in E), np.zeros((n, n)))


def jacobiator(X, kind: BracketKind, a, b, c) -> float:
    """Normalized Jacobi sum for the linear functions with gradients a, b, c

    For linear f_a, the bracket {f_a, f_b} is affine in X; its gradient is
    recovered from the bracket form and bracketed again with f_c.
    """
    X = square_matrix(X)
    n = X.shape[0]
    if kind.type == BracketType.LIE_POISSON:
        form = lambda Y, u, v: lie_poisson_form(Y, u, v)
    elif kind.type == BracketType.FROZEN_A:
        form = lambda Y, u, v: frozen_form(Y, kind.A, u, v)
    elif kind.type == BracketType.PENCIL_GL:
        l1, l2 = kind.lambdas
        form = lambda Y, u, v: pencil_form(Y, kind.A, l1, l2, u, v)
    else:
        raise ParameterError("Jacobi check is defined for unreduced brackets only")

    def grad_of(u, v):
        return linear_gradient(lambda Y: form(Y, u, v), n, kind.on_gl)

    total = (form(X, grad_of(a, b), c) + form(X, grad_of(b, c), a) + form(X, grad_of(c, a), b))
    shift = np.linalg.norm(kind.A) if kind.A is not None else 0.0
    scale = np.linalg.norm(a) * np.linalg.norm(b) * np.linalg.norm(c) * (np.linalg.norm(X) + shift + 1.0)
    return abs(total) / (scale + NORMALIZATION_GUARD)
