"""
Matrix Lie Algebra Substrate
so(n) and gl(n) elements, the trace pairing, block decompositions, bases and generic sampling
"""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import ShapeError, ParameterError

MIN_DIMENSION = 2
MAX_DIMENSION = 16

# Spaces understood by Carrier and sample_generic
SPACES = ('so', 'v', 'iso', 'p', 'sym', 'gl')


def skew(X: np.ndarray) -> np.ndarray:
    """Skew-symmetric part (X - X^T)/2, exactly antisymmetric"""
    X = np.asarray(X, dtype=float)
    return (X - X.T) / 2.0


def sym(X: np.ndarray) -> np.ndarray:
    """Symmetric part (X + X^T)/2"""
    X = np.asarray(X, dtype=float)
    return (X + X.T) / 2.0


def square_matrix(X, name: str = "matrix") -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {X.shape}")
    return X


def skew_matrix(entries) -> np.ndarray:
    """Build an so(n) element from raw entries

    Args:
        entries: n x n array-like; antisymmetrized on build

    Returns:
        Skew-symmetric float array
    """
    X = square_matrix(entries, "SkewMatrix")
    n = X.shape[0]
    if not MIN_DIMENSION <= n <= MAX_DIMENSION:
        raise ShapeError(f"dimension {n} outside supported range {MIN_DIMENSION}..{MAX_DIMENSION}")
    return skew(X)


def _same_shape(X: np.ndarray, Y: np.ndarray):
    if X.shape != Y.shape:
        raise ShapeError(f"dimension mismatch: {X.shape} vs {Y.shape}")


def scalar_product(X, Y) -> float:
    """Killing-proportional pairing <X, Y> = -1/2 tr(XY)

    Args:
        X: Square matrix
        Y: Square matrix of the same size

    Returns:
        Real scalar
    """
    X = square_matrix(X)
    Y = square_matrix(Y)
    _same_shape(X, Y)
    return float(-0.5 * np.einsum('ij,ji->', X, Y))


def commutator(X, Y) -> np.ndarray:
    """Matrix commutator XY - YX"""
    X = square_matrix(X)
    Y = square_matrix(Y)
    _same_shape(X, Y)
    return X @ Y - Y @ X


def wedge(n: int, i: int, j: int) -> np.ndarray:
    """E_i ^ E_j = e_i e_j^T - e_j e_i^T (zero-based indices)"""
    E = np.zeros((n, n))
    E[i, j] = 1.0
    E[j, i] = -1.0
    return E


@dataclass(frozen=True)
class BlockPartition:
    """Ordered block sizes k_1..k_r with sum n"""
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(k) for k in self.parts)
        object.__setattr__(self, 'parts', parts)
        if not parts:
            raise ParameterError("partition must have at least one block")
        if any(k < 1 for k in parts):
            raise ParameterError(f"partition blocks must be positive, got {parts}")
        if sum(parts) > MAX_DIMENSION:
            raise ParameterError(f"partition {parts} exceeds dimension {MAX_DIMENSION}")

    @classmethod
    def regular(cls, n: int) -> "BlockPartition":
        """Partition (1,...,1)"""
        return cls((1,) * n)

    @classmethod
    def padded(cls, parts: Sequence[int], n: int) -> "BlockPartition":
        """Pad a partial partition with size-1 blocks up to n"""
        total = sum(parts)
        if total > n:
            raise ParameterError(f"blocks {tuple(parts)} exceed n={n}")
        return cls(tuple(parts) + (1,) * (n - total))

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def r(self) -> int:
        return len(self.parts)

    @cached_property
    def offsets(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in np.concatenate(([0], np.cumsum(self.parts))))

    @cached_property
    def block_of(self) -> Tuple[int, ...]:
        """Block index of every row/column"""
        return tuple(p for p, k in enumerate(self.parts) for _ in range(k))

    def block_slice(self, p: int) -> slice:
        return slice(self.offsets[p], self.offsets[p + 1])

    def same_block_mask(self) -> np.ndarray:
        idx = np.asarray(self.block_of)
        return idx[:, None] == idx[None, :]

    def iso_dim(self) -> int:
        return sum(k * (k - 1) // 2 for k in self.parts)

    def v_dim(self) -> int:
        return (self.n * self.n - sum(k * k for k in self.parts)) // 2

    def __str__(self) -> str:
        return "(" + ",".join(str(k) for k in self.parts) + ")"


def partitions_of(n: int) -> List[BlockPartition]:
    """All partitions of n with ascending parts (largest block last)"""
    result: List[Tuple[int, ...]] = []

    def extend(prefix: Tuple[int, ...], remaining: int, smallest: int):
        if remaining == 0:
            result.append(prefix)
            return
        for k in range(smallest, remaining + 1):
            extend(prefix + (k,), remaining - k, k)

    extend((), n, 1)
    result.sort(key=lambda parts: (-len(parts), parts))
    return [BlockPartition(parts) for parts in result]


@dataclass(frozen=True)
class SpectralParams:
    """Block spectra alpha, beta defining A = diag(a), B = diag(b)"""
    partition: BlockPartition
    alphas: Tuple[float, ...]
    betas: Tuple[float, ...]

    def __post_init__(self):
        alphas = tuple(float(x) for x in self.alphas)
        betas = tuple(float(x) for x in self.betas)
        object.__setattr__(self, 'alphas', alphas)
        object.__setattr__(self, 'betas', betas)
        r = self.partition.r
        if len(alphas) != r or len(betas) != r:
            raise ParameterError(
                f"SpectralParams needs {r} alphas and betas for partition {self.partition}, "
                f"got {len(alphas)} and {len(betas)}"
            )
        if len(set(alphas)) != r:
            raise ParameterError(f"SpectralParams alphas must be pairwise distinct, got {alphas}")
        if len(set(betas)) != r:
            raise ParameterError(f"SpectralParams betas must be pairwise distinct, got {betas}")

    @classmethod
    def default(cls, partition: BlockPartition) -> "SpectralParams":
        """Moderate distinct spectra alpha_p = (p+1)/r, beta_p = alpha_p^2"""
        r = partition.r
        alphas = tuple((p + 1) / r for p in range(r))
        return cls(partition, alphas, tuple(a * a for a in alphas))

    @property
    def n(self) -> int:
        return self.partition.n

    @cached_property
    def a(self) -> np.ndarray:
        return np.asarray([self.alphas[p] for p in self.partition.block_of])

    @cached_property
    def b(self) -> np.ndarray:
        return np.asarray([self.betas[p] for p in self.partition.block_of])

    def expand(self) -> Tuple[np.ndarray, np.ndarray]:
        """Diagonal matrices (A, B)"""
        return np.diag(self.a), np.diag(self.b)


def project(M, partition: BlockPartition) -> Tuple[np.ndarray, np.ndarray]:
    """Split M into its so(n)_A and v parts

    Args:
        M: Skew matrix
        partition: Block partition of matching dimension

    Returns:
        (M_iso, M_v) with M_iso + M_v = M
    """
    M = square_matrix(M)
    if M.shape[0] != partition.n:
        raise ShapeError(f"matrix of size {M.shape[0]} does not match partition {partition}")
    mask = partition.same_block_mask()
    M_iso = np.where(mask, M, 0.0)
    M_v = np.where(mask, 0.0, M)
    return M_iso, M_v


@dataclass(frozen=True)
class WedgeBasis:
    """Orthonormal basis E_i ^ E_j of so(n), tagged by block membership"""
    partition: BlockPartition

    @cached_property
    def pairs(self) -> Tuple[Tuple[int, int], ...]:
        n = self.partition.n
        return tuple((i, j) for i in range(n) for j in range(i + 1, n))

    @cached_property
    def block_pairs(self) -> Tuple[Tuple[int, int], ...]:
        """Block pair (p, q) of every wedge; p == q means isotropy"""
        blocks = self.partition.block_of
        return tuple((blocks[i], blocks[j]) for i, j in self.pairs)

    @cached_property
    def tags(self) -> Tuple[str, ...]:
        return tuple('iso' if p == q else 'v' for p, q in self.block_pairs)

    @property
    def dim(self) -> int:
        return len(self.pairs)

    def indices(self, tag: str) -> np.ndarray:
        return np.asarray([k for k, t in enumerate(self.tags) if t == tag], dtype=int)

    def matrices(self) -> np.ndarray:
        """Stack of basis matrices, shape (N, n, n)"""
        return basis_matrices(self.partition.n, self.pairs)


def basis_matrices(n: int, pairs: Sequence[Tuple[int, int]]) -> np.ndarray:
    E = np.zeros((len(pairs), n, n))
    for k, (i, j) in enumerate(pairs):
        E[k, i, j] = 1.0
        E[k, j, i] = -1.0
    return E


def upper_indices(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, k=1)


def to_coords(M) -> np.ndarray:
    """Wedge coordinates M_ij, i<j, in lexicographic order"""
    M = square_matrix(M)
    return M[upper_indices(M.shape[0])].copy()


def from_coords(coords, n: int) -> np.ndarray:
    """Inverse of to_coords"""
    M = np.zeros((n, n))
    iu = upper_indices(n)
    M[iu] = coords
    return M - M.T


@dataclass(frozen=True)
class Carrier:
    """Subspace of so(n) (or gl(n)) on which an integral family is defined

    kind is one of 'so', 'v', 'iso', 'p' or 'gl'. For 'p' the first l_split blocks
    form the subgroup H and the carrier is the orthogonal complement of its algebra.
    """
    kind: str
    partition: BlockPartition
    l_split: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ('so', 'v', 'iso', 'p', 'gl'):
            raise ParameterError(f"unknown carrier kind '{self.kind}'")
        if self.kind == 'p':
            if self.l_split is None or not 1 <= self.l_split <= self.partition.r:
                raise ParameterError(
                    f"l_split must lie in 1..{self.partition.r}, got {self.l_split}"
                )

    @classmethod
    def so(cls, n: int) -> "Carrier":
        return cls('so', BlockPartition.regular(n))

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def is_skew(self) -> bool:
        return self.kind != 'gl'

    @cached_property
    def member_indices(self) -> np.ndarray:
        """Positions of carrier wedges inside the full so(n) wedge list"""
        basis = WedgeBasis(self.partition)
        if self.kind == 'so':
            keep = [True] * basis.dim
        elif self.kind == 'v':
            keep = [t == 'v' for t in basis.tags]
        elif self.kind == 'iso':
            keep = [t == 'iso' for t in basis.tags]
        elif self.kind == 'p':
            keep = [not (p == q and p < self.l_split) for p, q in basis.block_pairs]
        else:
            raise ParameterError("gl(n) carrier has no wedge coordinates")
        return np.flatnonzero(keep)

    @cached_property
    def pairs(self) -> Tuple[Tuple[int, int], ...]:
        full = WedgeBasis(self.partition).pairs
        return tuple(full[k] for k in self.member_indices)

    @property
    def dim(self) -> int:
        if self.kind == 'gl':
            return self.n * self.n
        return len(self.member_indices)

    def embedding(self) -> np.ndarray:
        """Rows are carrier basis vectors in full so(n) wedge coordinates"""
        N = self.n * (self.n - 1) // 2
        P = np.zeros((self.dim, N))
        P[np.arange(self.dim), self.member_indices] = 1.0
        return P

    def mask(self) -> np.ndarray:
        """Boolean n x n mask of entries belonging to the carrier"""
        if self.kind == 'gl':
            return np.ones((self.n, self.n), dtype=bool)
        if self.kind == 'so':
            return ~np.eye(self.n, dtype=bool)
        blocks = np.asarray(self.partition.block_of)
        same = blocks[:, None] == blocks[None, :]
        if self.kind == 'v':
            return ~same
        if self.kind == 'iso':
            return same & ~np.eye(self.n, dtype=bool)
        in_h = same & (blocks[:, None] < self.l_split)
        return ~in_h & ~np.eye(self.n, dtype=bool)

    def project(self, X) -> np.ndarray:
        """Orthogonal projection onto the carrier"""
        X = square_matrix(X)
        if self.kind == 'gl':
            return X.copy()
        return np.where(self.mask(), skew(X), 0.0)

    def coords(self, X) -> np.ndarray:
        """Orthonormal coordinates of (the projection of) X"""
        X = square_matrix(X)
        if self.kind == 'gl':
            return X.reshape(-1).copy()
        return to_coords(X)[self.member_indices]

    def from_coords(self, c) -> np.ndarray:
        if self.kind == 'gl':
            return np.asarray(c, dtype=float).reshape(self.n, self.n)
        full = np.zeros(self.n * (self.n - 1) // 2)
        full[self.member_indices] = c
        return from_coords(full, self.n)

    def contains(self, X, tol: float = 0.0) -> bool:
        X = square_matrix(X)
        return bool(np.max(np.abs(X - self.project(X)), initial=0.0) <= tol)

    def __str__(self) -> str:
        if self.kind == 'p':
            return f"p{self.partition}/{self.l_split}"
        return f"{self.kind}{self.partition}"


def derived_seed(seed: int, attempt: int) -> int:
    """Deterministic seed for the attempt-th redraw of a point"""
    if attempt == 0:
        return int(seed)
    return int(np.random.SeedSequence([int(seed), int(attempt)]).generate_state(1)[0])


def sample_generic(seed: int, space: str, n: int,
                   partition: Optional[BlockPartition] = None,
                   l_split: Optional[int] = None) -> np.ndarray:
    """Draw a generic point of a matrix subspace

    Args:
        seed: Integer seed; identical seeds give identical points
        space: One of 'so', 'v', 'iso', 'p', 'sym', 'gl'
        n: Matrix size
        partition: Required for 'v', 'iso' and 'p'
        l_split: Required for 'p'

    Returns:
        n x n float array in the requested subspace
    """
    if space not in SPACES:
        raise ParameterError(f"unknown space '{space}', expected one of {SPACES}")
    rng = np.random.default_rng(int(seed))

    if space == 'sym':
        S = np.zeros((n, n))
        iu = np.triu_indices(n)
        S[iu] = rng.uniform(-1.0, 1.0, size=len(iu[0]))
        return S + np.triu(S, k=1).T
    if space == 'gl':
        return rng.uniform(-1.0, 1.0, size=(n, n))

    raw = rng.uniform(-1.0, 1.0, size=n * (n - 1) // 2)
    M = from_coords(raw, n)
    if space == 'so':
        return M
    if partition is None:
        raise ParameterError(f"space '{space}' needs a partition")
    if partition.n != n:
        raise ShapeError(f"partition {partition} does not match n={n}")
    return Carrier(space, partition, l_split).project(M)
