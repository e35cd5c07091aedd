"""
Flows Module
Euler, singular Manakov and rigid-body dynamics on so(n), time integration and Lax monitoring
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..algebra.liealg import (
    BlockPartition, SpectralParams, skew, skew_matrix, commutator, project, upper_indices
)
from ..core.config import config
from ..core.errors import ConvergenceError, ParameterError, ShapeError
from ..core.logger import logger
from .sectional import OperatorKind, SectionalOperator

Field = Callable[[np.ndarray], np.ndarray]

# Classical RK4 Butcher table
RK4_TABLE = {
    'a': ((), (0.5,), (0.0, 0.5), (0.0, 0.0, 1.0)),
    'b': (1 / 6, 1 / 3, 1 / 3, 1 / 6),
}


class IntegratorMethod(str, Enum):
    """Time stepping schemes"""
    RK4 = "rk4"
    IMPLICIT_MIDPOINT = "implicit_midpoint"


@dataclass(frozen=True)
class IntegratorConfig:
    """Step size, horizon and output stride"""
    method: IntegratorMethod = IntegratorMethod.RK4
    step: float = 1e-3
    horizon: float = 100.0
    stride: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'method', IntegratorMethod(self.method))
        if not self.step > 0.0:
            raise ParameterError(f"integrator step must be positive, got {self.step}")
        if not self.horizon > 0.0:
            raise ParameterError(f"integrator horizon must be positive, got {self.horizon}")
        if self.step > self.horizon:
            raise ParameterError(f"step {self.step} exceeds horizon {self.horizon}")
        if self.stride < 1:
            raise ParameterError(f"stride must be at least 1, got {self.stride}")

    @property
    def steps(self) -> int:
        return int(round(self.horizon / self.step))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded solution of M' = field(M)"""
    times: np.ndarray
    states: np.ndarray
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if states.ndim != 3 or states.shape[0] != times.shape[0]:
            raise ShapeError(f"states {states.shape} do not match {times.shape[0]} times")
        if times.size > 1 and not np.all(np.diff(times) > 0.0):
            raise ParameterError("trajectory times must be strictly increasing")
        if np.any(states + np.transpose(states, (0, 2, 1)) != 0.0):
            raise ParameterError("trajectory states must be skew-symmetric")
        times.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'states', states)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def csv_header(self) -> List[str]:
        iu = upper_indices(self.n)
        return ['time'] + [f"M_{i + 1}_{j + 1}" for i, j in zip(*iu)]

    def csv_rows(self) -> Iterable[List[float]]:
        iu = upper_indices(self.n)
        for t, M in zip(self.times, self.states):
            yield [float(t)] + [float(x) for x in M[iu]]


def euler_field(M, op: SectionalOperator) -> np.ndarray:
    """Euler equation right-hand side [M, A(M)]"""
    M = skew_matrix(M)
    return commutator(M, op.apply(M))


def singular_flow_field(M, op: SectionalOperator) -> np.ndarray:
    """Euler field assembled from its so(n)_A and v components

    The v component carries [M_v, ad_A^-1 ad_B(M_v)] projected to v; its so(n)_A
    projection vanishes for block diagonal A, B.
    """
    if op.kind != OperatorKind.SINGULAR:
        raise ParameterError(f"singular_flow_field needs a singular operator, got {op.kind.value}")
    M = skew_matrix(M)
    M_iso, M_v = project(M, op.partition)
    interior = op.apply_interior(M_iso)
    transversal = op.transversal(M_v)

    iso_dot = commutator(M_iso, interior)
    v_dot = commutator(M_iso, transversal) + commutator(M_v, interior)
    _, v_self = project(commutator(M_v, transversal), op.partition)
    iso_part, _ = project(iso_dot, op.partition)
    return iso_part + v_dot + v_self


def rigid_body_field(M, params: SpectralParams) -> np.ndarray:
    """Entrywise rigid body field sum_k (b_i - b_j)/((b_k + b_i)(b_k + b_j)) M_ik M_kj"""
    M = skew_matrix(M)
    b = np.asarray(params.b)
    S = b[:, None] + b[None, :]
    # coef[i, j, k] = (b_i - b_j) / ((b_k + b_i)(b_k + b_j))
    coef = (b[:, None, None] - b[None, :, None]) / (S[:, None, :] * S[None, :, :])
    return np.einsum('ijk,ik,kj->ij', coef, M, M)


def operator_field(op: SectionalOperator) -> Field:
    """Closure M -> Euler field of op"""
    if op.kind == OperatorKind.RIGID_BODY:
        return lambda M: rigid_body_field(M, op.params)
    return lambda M: euler_field(M, op)


def _rk4_step(field_fn: Field, M: np.ndarray, h: float) -> np.ndarray:
    stages = []
    for a_row in RK4_TABLE['a']:
        Y = M + h * sum((a * k for a, k in zip(a_row, stages)), np.zeros_like(M))
        stages.append(field_fn(Y))
    return M + h * sum(b * k for b, k in zip(RK4_TABLE['b'], stages))


def _midpoint_step(field_fn: Field, M: np.ndarray, h: float, step: int,
                   tol: float, max_iter: int) -> np.ndarray:
    Y = M + h * field_fn(M)
    for _ in range(max_iter):
        Y_new = M + h * field_fn((M + Y) / 2.0)
        if np.linalg.norm(Y_new - Y) <= tol * max(1.0, np.linalg.norm(Y_new)):
            return Y_new
        Y = Y_new
    raise ConvergenceError("implicit midpoint fixed-point iteration did not converge", step)


def integrate(field_fn: Field, M0, cfg: IntegratorConfig,
              meta: Optional[Dict[str, Any]] = None) -> Trajectory:
    """Integrate M' = field_fn(M) from M0

    Args:
        field_fn: Closure mapping so(n) to so(n)
        M0: Initial state
        cfg: Integrator configuration
        meta: Extra metadata stored on the trajectory

    Returns:
        Trajectory recorded every cfg.stride steps (final state always included)
    """
    M = skew_matrix(M0)
    h = cfg.step
    steps = cfg.steps
    tol = config.tolerances.midpoint_tol
    max_iter = config.tolerances.midpoint_max_iter

    logger.debug(f"integrating n={M.shape[0]} with {cfg.method.value}, h={h}, steps={steps}")
    times = [0.0]
    states = [M.copy()]
    for k in range(1, steps + 1):
        if cfg.method == IntegratorMethod.RK4:
            M = _rk4_step(field_fn, M, h)
        else:
            M = _midpoint_step(field_fn, M, h, k, tol, max_iter)
        M = skew(M)
        if k % cfg.stride == 0 or k == steps:
            times.append(k * h)
            states.append(M.copy())

    info = {'method': cfg.method.value, 'step': h, 'horizon': cfg.horizon, 'stride': cfg.stride}
    info.update(meta or {})
    return Trajectory(np.asarray(times), np.asarray(states), info)


def lax_residual(M, op: SectionalOperator, lam: float,
                 lax_params: Optional[SpectralParams] = None) -> float:
    """Norm of d/dt(M + lam A) - [M + lam A, Omega + lam B]

    Args:
        M: State
        op: Operator driving the flow
        lam: Spectral parameter
        lax_params: Spectra used in the Lax pair (defaults to op.params)
    """
    M = skew_matrix(M)
    params = op.params if lax_params is None else lax_params
    A, B = params.expand()
    Omega = op.apply(M)
    return float(np.linalg.norm(euler_field(M, op) - commutator(M + lam * A, Omega + lam * B)))


def lax_spectrum(M, params: SpectralParams, lam: float, decimals: int = 8) -> np.ndarray:
    """Eigenvalues of M + lam A sorted by (real, imaginary) parts

    Real parts are rounded to `decimals` digits for ordering only.
    """
    A, _ = params.expand()
    L = skew_matrix(M) + lam * A
    try:
        eigs = np.linalg.eigvals(L)
    except np.linalg.LinAlgError as e:
        logger.error(f"eigenvalue solver failed for lambda={lam}: {e}")
        raise
    order = np.lexsort((eigs.imag, np.round(eigs.real, decimals)))
    return eigs[order]


def relative_drift(values: Sequence[float]) -> float:
    """max_t |f(t) - f(0)| / max(|f(0)|, 1)"""
    values = np.asarray(values, dtype=float)
    return float(np.max(np.abs(values - values[0])) / max(abs(values[0]), 1.0))


def spectrum_drift(traj: Trajectory, params: SpectralParams, lambdas: Sequence[float]) -> float:
    """Largest relative displacement of the sorted Lax spectrum along a trajectory"""
    worst = 0.0
    for lam in lambdas:
        ref = lax_spectrum(traj.states[0], params, lam)
        scale = max(1.0, float(np.max(np.abs(ref))))
        for M in traj.states[1:]:
            worst = max(worst, float(np.max(np.abs(lax_spectrum(M, params, lam) - ref))) / scale)
    return worst


def noether_drift(traj: Trajectory, partition: BlockPartition) -> float:
    """max_t ||M_iso(t) - M_iso(0)||_F"""
    mask = partition.same_block_mask()
    iso = np.where(mask[None, :, :], traj.states, 0.0)
    return float(np.max(np.linalg.norm(iso - iso[0], axis=(1, 2))))
