"""
Sectional Operators and Invariant Metrics
Inertia operators of Manakov type (regular, singular, symmetric rigid body) and metric tables
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, Optional, Tuple, Union

import numpy as np

from ..algebra.liealg import (
    BlockPartition, SpectralParams, WedgeBasis, Carrier, project, skew_matrix,
    scalar_product, commutator
)
from ..core.errors import (
    SingularDenominatorError, MetricPositivityError, ParameterError, ShapeError
)
from ..core.logger import logger

POSITIVITY_THRESHOLD = 1e-10


class OperatorKind(str, Enum):
    """Sectional operator families"""
    REGULAR = "regular"
    SINGULAR = "singular"
    RIGID_BODY = "rigid_body"


class MetricKind(str, Enum):
    """Invariant metric families on homogeneous spaces"""
    NORMAL = "normal"
    SUBMERSION = "submersion"
    STIEFEL = "stiefel"


def _pair_coefficients(numer: np.ndarray, denom: np.ndarray, pairs) -> Dict[Tuple[int, int], float]:
    out = {}
    for i, j in pairs:
        d = denom[i] - denom[j]
        if d == 0.0:
            raise SingularDenominatorError("coefficient denominator vanishes", (i + 1, j + 1))
        out[(i, j)] = (numer[i] - numer[j]) / d
    return out


def _check_spd(matrix: np.ndarray, name: str) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {matrix.shape}")
    if matrix.size and not np.allclose(matrix, matrix.T, rtol=0.0,
                                       atol=1e-12 * max(1.0, np.abs(matrix).max())):
        raise MetricPositivityError(f"{name} must be symmetric")
    matrix = (matrix + matrix.T) / 2.0
    if matrix.size and np.linalg.eigvalsh(matrix)[0] <= POSITIVITY_THRESHOLD:
        raise MetricPositivityError(f"{name} must be positive definite")
    return matrix


@dataclass(frozen=True, eq=False)
class SectionalOperator:
    """The inertia operator Omega = A(M)

    Args:
        kind: Operator family
        params: Block spectra; for RIGID_BODY only the betas are used (alphas = betas^2)
        interior_op: SPD matrix of the isotropy operator in the isotropy wedge basis (SINGULAR)
    """
    kind: OperatorKind
    params: SpectralParams
    interior_op: Optional[np.ndarray] = None

    def __post_init__(self):
        kind = OperatorKind(self.kind)
        object.__setattr__(self, 'kind', kind)
        params = self.params

        if kind == OperatorKind.RIGID_BODY:
            if min(params.betas) <= 0.0:
                raise MetricPositivityError(
                    f"rigid body needs all betas positive, got {params.betas}"
                )
            params = SpectralParams(params.partition,
                                    tuple(b * b for b in params.betas), params.betas)
            object.__setattr__(self, 'params', params)

        if kind == OperatorKind.REGULAR:
            a = params.a
            for i in range(params.n):
                for j in range(i + 1, params.n):
                    if a[i] == a[j]:
                        raise SingularDenominatorError(
                            "regular operator needs distinct diagonal entries of A", (i + 1, j + 1)
                        )

        if kind == OperatorKind.SINGULAR:
            iso_dim = params.partition.iso_dim()
            interior = np.eye(iso_dim) if self.interior_op is None else self.interior_op
            interior = _check_spd(interior, "interior operator")
            if interior.shape != (iso_dim, iso_dim):
                raise ShapeError(
                    f"interior operator must be {iso_dim}x{iso_dim} for partition "
                    f"{params.partition}, got {interior.shape}"
                )
            object.__setattr__(self, 'interior_op', interior)
        elif self.interior_op is not None:
            raise ParameterError(f"interior_op only applies to singular operators, not {kind.value}")

        eigs = np.linalg.eigvalsh(self.wedge_matrix())
        if eigs.size and eigs[0] <= POSITIVITY_THRESHOLD:
            raise MetricPositivityError(
                f"{kind.value} operator is not positive definite (min eigenvalue {eigs[0]:.3e})"
            )

    @classmethod
    def rigid_body(cls, partition: BlockPartition, betas) -> "SectionalOperator":
        """Symmetric rigid body with mass tensor eigenvalues betas"""
        betas = tuple(float(b) for b in betas)
        return cls(OperatorKind.RIGID_BODY, SpectralParams(partition, tuple(b * b for b in betas), betas))

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def partition(self) -> BlockPartition:
        return self.params.partition

    @cached_property
    def coefficients(self) -> np.ndarray:
        """n x n table C with Omega_ij = C_ij M_ij on the entries the table governs"""
        a, b = self.params.a, self.params.b
        n = self.n
        C = np.zeros((n, n))
        mask = self.partition.same_block_mask()
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                if self.kind == OperatorKind.RIGID_BODY:
                    C[i, j] = 1.0 / (b[i] + b[j])
                elif not mask[i, j]:
                    C[i, j] = (b[i] - b[j]) / (a[i] - a[j])
        return C

    def wedge_matrix(self) -> np.ndarray:
        """Matrix of the operator in the wedge basis"""
        basis = WedgeBasis(self.partition)
        diag = np.asarray([self.coefficients[i, j] for i, j in basis.pairs])
        W = np.diag(diag)
        if self.kind == OperatorKind.SINGULAR:
            iso = basis.indices('iso')
            W[np.ix_(iso, iso)] = self.interior_op
        return W

    def apply(self, M) -> np.ndarray:
        """Omega = A(M)"""
        M = skew_matrix(M)
        if M.shape[0] != self.n:
            raise ShapeError(f"state of size {M.shape[0]} does not match operator size {self.n}")
        if self.kind != OperatorKind.SINGULAR:
            return self.coefficients * M
        M_iso, M_v = project(M, self.partition)
        return self.coefficients * M_v + self.apply_interior(M_iso)

    def apply_interior(self, M_iso) -> np.ndarray:
        """Interior operator on so(n)_A"""
        iso = Carrier('iso', self.partition)
        if iso.dim == 0:
            return np.zeros((self.n, self.n))
        return iso.from_coords(self.interior_op @ iso.coords(M_iso))

    def transversal(self, M_v) -> np.ndarray:
        """ad_A^-1 ad_B on v (for the rigid body 1/(b_i + b_j) agrees with it)"""
        _, M_v = project(M_v, self.partition)
        return self.coefficients * M_v

    def hamiltonian(self, M) -> float:
        return 0.5 * scalar_product(M, self.apply(M))


def manakov_omega(M, params: SpectralParams) -> np.ndarray:
    """Regular Manakov operator Omega_ij = (b_i - b_j)/(a_i - a_j) M_ij

    Raises:
        SingularDenominatorError: if two diagonal entries of A coincide
    """
    M = skew_matrix(M)
    a, b = params.a, params.b
    n = M.shape[0]
    coeff = _pair_coefficients(b, a, [(i, j) for i in range(n) for j in range(i + 1, n)])
    C = np.zeros((n, n))
    for (i, j), c in coeff.items():
        C[i, j] = C[j, i] = c
    return C * M


def singular_omega(M, op: SectionalOperator) -> np.ndarray:
    """Omega = ad_A^-1 ad_B (M_v) + interior(M_iso)"""
    if op.kind != OperatorKind.SINGULAR:
        raise ParameterError(f"singular_omega needs a singular operator, got {op.kind.value}")
    return op.apply(M)


def rigid_body_omega(M, params: SpectralParams) -> np.ndarray:
    """Symmetric rigid body Omega_ij = M_ij / (b_i + b_j)"""
    M = skew_matrix(M)
    b = params.b
    S = b[:, None] + b[None, :]
    off = ~np.eye(len(b), dtype=bool)
    if np.any(S[off] == 0.0):
        i, j = np.argwhere((S == 0.0) & off)[0]
        raise SingularDenominatorError("b_i + b_j vanishes", (int(i) + 1, int(j) + 1))
    return np.where(off, M / np.where(off, S, 1.0), 0.0)


def build_omega(M, op: SectionalOperator) -> np.ndarray:
    """Dispatch to the operator family"""
    if op.kind == OperatorKind.REGULAR:
        return manakov_omega(M, op.params)
    if op.kind == OperatorKind.RIGID_BODY:
        return rigid_body_omega(M, op.params)
    return singular_omega(M, op)


def check_manakov_condition(M, Omega, params: SpectralParams) -> float:
    """Frobenius norm of [M, B] - [Omega, A]"""
    A, B = params.expand()
    return float(np.linalg.norm(commutator(M, B) - commutator(Omega, A)))


@dataclass(frozen=True, eq=False)
class MetricSpec:
    """Invariant metric on SO(n)/SO(n)_A (or on SO(n)/SO(k) for Stiefel)

    Args:
        kind: Metric family
        partition: Block partition; Stiefel uses (k, n-k)
        params: Spectra for SUBMERSION
        interior: SPD matrix of the operator on so(n-k) (Stiefel), identity scaled by chi if omitted
        kappa: Scale on v (Stiefel)
        chi: Scale of the default interior operator (Stiefel)
    """
    kind: MetricKind
    partition: BlockPartition
    params: Optional[SpectralParams] = None
    interior: Optional[np.ndarray] = None
    kappa: float = 1.0
    chi: float = 1.0

    def __post_init__(self):
        kind = MetricKind(self.kind)
        object.__setattr__(self, 'kind', kind)
        if kind == MetricKind.SUBMERSION:
            if self.params is None:
                raise ParameterError("submersion metric needs spectral params")
            self.coefficients()
        if kind == MetricKind.STIEFEL:
            if self.partition.r != 2:
                raise ParameterError(f"Stiefel metric needs a partition (k, n-k), got {self.partition}")
            if self.kappa <= 0.0 or self.chi <= 0.0:
                raise MetricPositivityError(f"kappa and chi must be positive, got {self.kappa}, {self.chi}")
            k_dim = self.partition.parts[1] * (self.partition.parts[1] - 1) // 2
            interior = self.chi * np.eye(k_dim) if self.interior is None else self.interior
            interior = _check_spd(interior, "Stiefel interior operator")
            if interior.shape != (k_dim, k_dim):
                raise ShapeError(f"Stiefel interior operator must be {k_dim}x{k_dim}, got {interior.shape}")
            object.__setattr__(self, 'interior', interior)

    @property
    def n(self) -> int:
        return self.partition.n

    def coefficients(self) -> Dict[Tuple[int, int], float]:
        """Metric coefficient on every block pair v_{p,q}, p < q"""
        r = self.partition.r
        block_pairs = [(p, q) for p in range(r) for q in range(p + 1, r)]
        if self.kind == MetricKind.NORMAL:
            return {pq: 1.0 for pq in block_pairs}
        if self.kind == MetricKind.STIEFEL:
            return {pq: float(self.kappa) for pq in block_pairs}
        alphas = np.asarray(self.params.alphas)
        betas = np.asarray(self.params.betas)
        table = _pair_coefficients(alphas, betas, block_pairs)
        for (p, q), c in table.items():
            if c <= 0.0:
                raise MetricPositivityError(
                    f"metric coefficient on v_{p + 1},{q + 1} is {c:.6g}, must be positive"
                )
        return table

    def to_operator(self) -> SectionalOperator:
        """Cometric of the metric as a singular sectional operator"""
        partition = self.partition
        if self.kind == MetricKind.NORMAL:
            alphas = SpectralParams.default(partition).alphas
            return SectionalOperator(OperatorKind.SINGULAR, SpectralParams(partition, alphas, alphas))
        if self.kind == MetricKind.SUBMERSION:
            return SectionalOperator(OperatorKind.SINGULAR, self.params)

        alphas = (1.0, 2.0)
        betas = (1.0 / self.kappa, 2.0 / self.kappa)
        k_first = partition.parts[0] * (partition.parts[0] - 1) // 2
        k_dim = self.interior.shape[0]
        interior = np.eye(k_first + k_dim)
        if k_dim:
            interior[k_first:, k_first:] = np.linalg.inv(self.interior)
        return SectionalOperator(OperatorKind.SINGULAR, SpectralParams(partition, alphas, betas), interior)


@dataclass(frozen=True)
class MetricTable:
    """Coefficients of an invariant metric"""
    kind: MetricKind
    transversal: Dict[Tuple[int, int], float]
    isotropy: Optional[np.ndarray] = None


def metric_coefficients(spec: MetricSpec) -> MetricTable:
    """Block-pair coefficient table, with the interior form for Stiefel metrics"""
    table = spec.coefficients()
    isotropy = spec.interior if spec.kind == MetricKind.STIEFEL else None
    logger.debug(f"{spec.kind.value} metric coefficients: {table}")
    return MetricTable(spec.kind, table, isotropy)


def hamiltonian_of(op_or_metric: Union[SectionalOperator, MetricSpec], M) -> float:
    """H = 1/2 <M, A(M)>"""
    op = op_or_metric.to_operator() if isinstance(op_or_metric, MetricSpec) else op_or_metric
    return op.hamiltonian(M)


def noether_applicable(op: SectionalOperator) -> bool:
    """Whether the isotropy block of M is conserved by the flow of op

    True for the rigid body and for singular operators whose interior part
    is a scalar multiple of the identity on every block.
    """
    partition = op.partition
    if partition.iso_dim() == 0:
        return False
    if op.kind == OperatorKind.RIGID_BODY:
        return True
    if op.kind != OperatorKind.SINGULAR:
        return False

    basis = WedgeBasis(partition)
    blocks = np.asarray([basis.block_pairs[k][0] for k in basis.indices('iso')])
    interior = op.interior_op
    for p in set(blocks.tolist()):
        inside = blocks == p
        sub = interior[np.ix_(inside, inside)]
        if not np.allclose(sub, sub[0, 0] * np.eye(sub.shape[0]), rtol=0.0, atol=1e-14):
            return False
        if np.any(interior[np.ix_(inside, ~inside)] != 0.0):
            return False
    return True
