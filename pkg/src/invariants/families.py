"""
Integral Families
Manakov coefficients, Bolsinov traces, Noether linear forms and gl(n) pencil Casimirs
with values and analytic gradients under <X, Y> = -1/2 tr(XY)
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.liealg import (
    BlockPartition, Carrier, SpectralParams, WedgeBasis, skew, sym, wedge, square_matrix
)
from ..core.config import config
from ..core.errors import CarrierMismatchError, PoleError, ParameterError, ShapeError
from ..dynamics.sectional import SectionalOperator

POLE_GUARD = 1e-12


def diag_vector(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim == 2:
        if A.shape[0] != A.shape[1]:
            raise ShapeError(f"A must be square, got {A.shape}")
        return np.diag(A).copy()
    return A.copy()


def power_coefficients(M: np.ndarray, A: np.ndarray, k: int) -> List[np.ndarray]:
    """Matrices Q_s with (M + lam A)^k = sum_s lam^s Q_s

    Built by Q_{j+1,s} = Q_{j,s} M + Q_{j,s-1} A.
    """
    n = M.shape[0]
    Q = [np.eye(n)]
    for j in range(k):
        nxt = []
        for s in range(j + 2):
            term = np.zeros((n, n))
            if s <= j:
                term = term + Q[s] @ M
            if s >= 1:
                term = term + Q[s - 1] @ A
            nxt.append(term)
        Q = nxt
    return Q


class IntegralMember(ABC):
    """A polynomial function with value and gradient"""

    #: 'skew' members live on so(n) carriers, 'gl' members on gl(n)
    space: str = 'skew'

    @property
    @abstractmethod
    def tag(self) -> str:
        pass

    @abstractmethod
    def evaluate(self, X) -> float:
        pass

    @abstractmethod
    def gradient(self, X) -> np.ndarray:
        pass

    def scale(self, X) -> float:
        """Degree-homogeneous size used to normalize gradient rows"""
        return 1.0

    def __repr__(self) -> str:
        return self.tag


@dataclass(frozen=True, eq=False, repr=False)
class ManakovCoefficient(IntegralMember):
    """p_{k,s}: coefficient of lam^s in tr(M + lam A)^k

    With `block` set, the polynomial is evaluated on the diagonal block M[start:stop, start:stop].
    """
    a: Tuple[float, ...]
    k: int
    s: int
    block: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        object.__setattr__(self, 'a', tuple(float(x) for x in self.a))
        if not 0 <= self.s <= self.k:
            raise ParameterError(f"need 0 <= s <= k, got k={self.k}, s={self.s}")

    @property
    def tag(self) -> str:
        if self.block is None:
            return f"L({self.k},{self.s})"
        return f"K0[{self.block[0] + 1}:{self.block[1]}]({self.k},{self.s})"

    def _restrict(self, M) -> np.ndarray:
        M = square_matrix(M)
        if self.block is None:
            return M
        return M[self.block[0]:self.block[1], self.block[0]:self.block[1]]

    def _embed(self, G: np.ndarray, n: int) -> np.ndarray:
        if self.block is None:
            return G
        out = np.zeros((n, n))
        out[self.block[0]:self.block[1], self.block[0]:self.block[1]] = G
        return out

    def evaluate(self, X) -> float:
        M = self._restrict(X)
        Q = power_coefficients(M, np.diag(self.a), self.k)
        return float(np.trace(Q[self.s]))

    def gradient(self, X) -> np.ndarray:
        M = self._restrict(X)
        if self.s == self.k:
            return self._embed(np.zeros_like(M), square_matrix(X).shape[0])
        Q = power_coefficients(M, np.diag(self.a), self.k - 1)
        return self._embed(-2.0 * self.k * skew(Q[self.s]), square_matrix(X).shape[0])

    def scale(self, X) -> float:
        M = self._restrict(X)
        base = np.linalg.norm(M) + np.linalg.norm(self.a)
        return 2.0 * self.k * max(base, 1e-300) ** (self.k - 1)


@dataclass(frozen=True, eq=False, repr=False)
class ShiftedTrace(IntegralMember):
    """tr(M + lam A)^k at a fixed lam"""
    a: Tuple[float, ...]
    k: int
    lam: float

    @property
    def tag(self) -> str:
        return f"T({self.k},{self.lam:g})"

    def evaluate(self, X) -> float:
        L = square_matrix(X) + self.lam * np.diag(self.a)
        return float(np.trace(np.linalg.matrix_power(L, self.k)))

    def gradient(self, X) -> np.ndarray:
        L = square_matrix(X) + self.lam * np.diag(self.a)
        return -2.0 * self.k * skew(np.linalg.matrix_power(L, self.k - 1))

    def scale(self, X) -> float:
        base = np.linalg.norm(X) + abs(self.lam) * np.linalg.norm(self.a)
        return 2.0 * self.k * max(base, 1e-300) ** (self.k - 1)


def _resolvent(a: Sequence[float], lam: float) -> np.ndarray:
    shifted = lam + np.asarray(a, dtype=float)
    if np.min(np.abs(shifted)) <= POLE_GUARD * max(1.0, abs(lam)):
        raise PoleError(f"lambda={lam:g} hits a pole of (lambda I + A)^-1")
    return np.diag(1.0 / shifted)


@dataclass(frozen=True, eq=False, repr=False)
class BolsinovTrace(IntegralMember):
    """tr(M (lam I + A)^-1)^(2k)"""
    a: Tuple[float, ...]
    k: int
    lam: float

    def __post_init__(self):
        object.__setattr__(self, 'a', tuple(float(x) for x in self.a))
        _resolvent(self.a, self.lam)

    @property
    def tag(self) -> str:
        return f"J({self.k},{self.lam:.6g})"

    def evaluate(self, X) -> float:
        W = square_matrix(X) @ _resolvent(self.a, self.lam)
        return float(np.trace(np.linalg.matrix_power(W, 2 * self.k)))

    def gradient(self, X) -> np.ndarray:
        D = _resolvent(self.a, self.lam)
        W = square_matrix(X) @ D
        return -4.0 * self.k * skew(D @ np.linalg.matrix_power(W, 2 * self.k - 1))

    def scale(self, X) -> float:
        d = float(np.max(np.abs(np.diag(_resolvent(self.a, self.lam)))))
        m = max(float(np.linalg.norm(X)), 1e-300)
        return 4.0 * self.k * d ** (2 * self.k) * m ** (2 * self.k - 1)


@dataclass(frozen=True, eq=False, repr=False)
class LinearForm(IntegralMember):
    """M -> <M, E_i ^ E_j> = M_ij"""
    i: int
    j: int
    family: str = "S"

    @property
    def tag(self) -> str:
        return f"{self.family}({self.i + 1},{self.j + 1})"

    def evaluate(self, X) -> float:
        return float(square_matrix(X)[self.i, self.j])

    def gradient(self, X) -> np.ndarray:
        return wedge(square_matrix(X).shape[0], self.i, self.j)


@dataclass(frozen=True, eq=False, repr=False)
class HamiltonianMember(IntegralMember):
    """H = 1/2 <M, A(M)> of a sectional operator"""
    op: SectionalOperator

    @property
    def tag(self) -> str:
        return f"H[{self.op.kind.value}]"

    def evaluate(self, X) -> float:
        return self.op.hamiltonian(X)

    def gradient(self, X) -> np.ndarray:
        return self.op.apply(X)

    def scale(self, X) -> float:
        return max(float(np.linalg.norm(X)), 1e-300) * float(np.abs(self.op.wedge_matrix()).max())


@dataclass(frozen=True, eq=False, repr=False)
class PencilCasimir(IntegralMember):
    """f_{lam,k}(X) = tr(lam M + P + lam^2 A)^k with M = skew(X), P = sym(X)"""
    a: Tuple[float, ...]
    lam: float
    k: int
    space = 'gl'

    @property
    def tag(self) -> str:
        return f"C({self.lam:g},{self.k})"

    def _z(self, X) -> np.ndarray:
        X = square_matrix(X)
        return self.lam * skew(X) + sym(X) + self.lam ** 2 * np.diag(self.a)

    def evaluate(self, X) -> float:
        return float(np.trace(np.linalg.matrix_power(self._z(X), self.k)))

    def gradient(self, X) -> np.ndarray:
        C = np.linalg.matrix_power(self._z(X), self.k - 1)
        return -2.0 * self.k * (self.lam * skew(C) + sym(C))


@dataclass(frozen=True, eq=False, repr=False)
class GLTrace(IntegralMember):
    """tr(X + C)^k on gl(n) for a fixed matrix C"""
    shift: np.ndarray
    k: int
    space = 'gl'

    @property
    def tag(self) -> str:
        return f"G({self.k})"

    def evaluate(self, X) -> float:
        return float(np.trace(np.linalg.matrix_power(square_matrix(X) + self.shift, self.k)))

    def gradient(self, X) -> np.ndarray:
        return -2.0 * self.k * np.linalg.matrix_power(square_matrix(X) + self.shift, self.k - 1)


@dataclass(frozen=True, eq=False)
class IntegralFamily:
    """Finite generating set of functions on a carrier space"""
    carrier: Carrier
    members: Tuple[IntegralMember, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'members', tuple(self.members))
        want = 'gl' if self.carrier.kind == 'gl' else 'skew'
        for m in self.members:
            if m.space != want:
                raise CarrierMismatchError(
                    f"member {m.tag} lives on {m.space} functions, carrier is {self.carrier}"
                )

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[IntegralMember]:
        return iter(self.members)

    def __getitem__(self, idx) -> IntegralMember:
        return self.members[idx]

    def __add__(self, other: "IntegralFamily") -> "IntegralFamily":
        if other.carrier != self.carrier:
            raise CarrierMismatchError(f"cannot join families on {self.carrier} and {other.carrier}")
        return IntegralFamily(self.carrier, self.members + other.members)

    @property
    def tags(self) -> List[str]:
        return [m.tag for m in self.members]

    def check_point(self, X, tol: float = 1e-12):
        X = square_matrix(X)
        if X.shape[0] != self.carrier.n:
            raise CarrierMismatchError(f"point of size {X.shape[0]} on carrier {self.carrier}")
        if not self.carrier.contains(X, tol * max(1.0, float(np.abs(X).max(initial=0.0)))):
            raise CarrierMismatchError(f"point does not lie in carrier {self.carrier}")

    def values(self, X) -> np.ndarray:
        return np.asarray([m.evaluate(X) for m in self.members])

    def gradient(self, member: IntegralMember, X) -> np.ndarray:
        return self.carrier.project(member.gradient(X))

    def gradients(self, X) -> List[np.ndarray]:
        return [self.gradient(m, X) for m in self.members]


def gradient(member: IntegralMember, X, carrier: Optional[Carrier] = None) -> np.ndarray:
    """Gradient of a member, orthogonally projected onto a carrier when given"""
    G = member.gradient(X)
    return G if carrier is None else carrier.project(G)


def manakov_members(a: Sequence[float], n: int, max_k: Optional[int] = None) -> List[IntegralMember]:
    """Generating set p_{k,s}, k = 2..n, s <= k-2, k - s even"""
    max_k = n if max_k is None else max_k
    return [ManakovCoefficient(tuple(a), k, s)
            for k in range(2, max_k + 1) for s in range(0, k - 1) if (k - s) % 2 == 0]


def manakov_family(params: SpectralParams, carrier: Optional[Carrier] = None,
                   max_k: Optional[int] = None) -> IntegralFamily:
    """The family L restricted to a carrier (so(n) by default)"""
    carrier = carrier or Carrier('so', params.partition)
    return IntegralFamily(carrier, tuple(manakov_members(params.a, params.n, max_k)))


def casimir_family(n: int) -> IntegralFamily:
    """tr M^(2k), k = 1..floor(n/2)"""
    a = (0.0,) * n
    members = tuple(ManakovCoefficient(a, 2 * j, 0) for j in range(1, n // 2 + 1))
    return IntegralFamily(Carrier.so(n), members)


def noether_family(partition: BlockPartition, carrier: Optional[Carrier] = None,
                   first_block: int = 0) -> IntegralFamily:
    """Linear forms on the isotropy blocks with index >= first_block

    With first_block = 0 this is S on so(n); with first_block = l_split on the carrier p it is K.
    """
    carrier = carrier or Carrier('so', partition)
    basis = WedgeBasis(partition)
    label = "S" if first_block == 0 else "K"
    members = tuple(LinearForm(i, j, label)
                    for (i, j), (p, q) in zip(basis.pairs, basis.block_pairs)
                    if p == q and p >= first_block)
    return IntegralFamily(carrier, members)


def factor_manakov_family(partition: BlockPartition, carrier: Carrier,
                          first_block: int) -> IntegralFamily:
    """Manakov coefficients on every so(k_i) factor with i >= first_block

    Each factor uses the regular diagonal d = (1, 2, ..., k_i)/k_i.
    """
    members: List[IntegralMember] = []
    for p in range(first_block, partition.r):
        size = partition.parts[p]
        if size < 2:
            continue
        start = partition.offsets[p]
        d = tuple((i + 1) / size for i in range(size))
        members.extend(ManakovCoefficient(d, k, s, (start, start + size))
                       for k in range(2, size + 1) for s in range(0, k - 1) if (k - s) % 2 == 0)
    return IntegralFamily(carrier, tuple(members))


def default_j_lambdas(params: SpectralParams, count: Optional[int] = None,
                      seed: Optional[int] = None) -> Tuple[float, ...]:
    """Seed-derived admissible lambda samples keeping a margin from every -alpha"""
    n = params.n
    count = 2 * n if count is None else count
    seed = config.sampling.j_lambda_seed if seed is None else seed
    alphas = np.asarray(params.alphas)
    gaps = np.diff(np.sort(alphas))
    min_gap = float(gaps.min()) if gaps.size else 1.0
    margin = max(config.sampling.j_lambda_margin * min_gap, 0.25)
    radius = float(np.max(np.abs(alphas))) + 1.0

    rng = np.random.default_rng(np.random.SeedSequence([int(seed), n]))
    samples: List[float] = []
    while len(samples) < count:
        lam = float(rng.uniform(-radius, radius))
        if np.min(np.abs(lam + alphas)) >= margin and all(abs(lam - x) > 1e-3 for x in samples):
            samples.append(lam)
    return tuple(samples)


def bolsinov_family(params: SpectralParams, carrier: Optional[Carrier] = None,
                    lambdas: Optional[Sequence[float]] = None) -> IntegralFamily:
    """J family materialized at lambda samples, k = 1..floor(n/2)"""
    carrier = carrier or Carrier('so', params.partition)
    lambdas = default_j_lambdas(params) if lambdas is None else lambdas
    members = tuple(BolsinovTrace(tuple(params.a), k, lam)
                    for lam in lambdas for k in range(1, params.n // 2 + 1))
    return IntegralFamily(carrier, members)


def hamiltonian_family(ops: Sequence[SectionalOperator],
                       carrier: Optional[Carrier] = None) -> IntegralFamily:
    """Hamiltonians of the given operators (so(n) over the first operator's partition by default)"""
    carrier = carrier or Carrier('so', ops[0].partition)
    return IntegralFamily(carrier, tuple(HamiltonianMember(op) for op in ops))


def pencil_casimir_family(a: Sequence[float], lambdas: Sequence[float]) -> IntegralFamily:
    n = len(a)
    members = tuple(PencilCasimir(tuple(a), lam, k) for lam in lambdas for k in range(1, n + 1))
    return IntegralFamily(Carrier('gl', BlockPartition.regular(n)), members)


def eval_manakov_coeffs(M, A) -> Dict[Tuple[int, int], float]:
    """Table p_{k,s}, k = 1..n, s = 0..k, by integer-node Vandermonde interpolation

    Args:
        M: Skew matrix
        A: Diagonal matrix or its diagonal

    Returns:
        Mapping (k, s) -> coefficient of lam^s in tr(M + lam A)^k
    """
    M = square_matrix(M)
    n = M.shape[0]
    Amat = np.diag(diag_vector(A))
    table: Dict[Tuple[int, int], float] = {}
    for k in range(1, n + 1):
        nodes = np.asarray([0.0] + [sgn * j for j in range(1, k // 2 + 2) for sgn in (1, -1)][:k])
        values = np.asarray([np.trace(np.linalg.matrix_power(M + lam * Amat, k)) for lam in nodes])
        coeffs = np.linalg.solve(np.vander(nodes, k + 1, increasing=True), values)
        for s in range(k + 1):
            table[(k, s)] = float(coeffs[s])
    return table


def j_family_eval(M, A, k: int, lam: float) -> float:
    """tr(M (lam I + A)^-1)^(2k)

    Raises:
        PoleError: if lam + a_i vanishes
    """
    return BolsinovTrace(tuple(diag_vector(A)), k, lam).evaluate(M)


def casimir_gl_eval(X, A, lam: float, k: int) -> float:
    """f_{lam,k}(X) = tr(lam M + P + lam^2 A)^k"""
    return PencilCasimir(tuple(diag_vector(A)), lam, k).evaluate(X)
