"""
Run Configuration
Pydantic schema of a run (system, operator, integrator, initial condition, targets, outputs)
loaded from JSON or YAML with field-precise validation messages
"""

from pathlib import Path
from typing import Dict, List, Literal, Optional

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..algebra.liealg import (
    MAX_DIMENSION, MIN_DIMENSION, BlockPartition, SpectralParams, sample_generic, skew_matrix
)
from ..core.config import config
from ..core.errors import ConfigValidationError, LabError, OutputError
from ..core.logger import logger
from ..dynamics.flows import IntegratorConfig
from ..dynamics.sectional import MetricKind, MetricSpec, OperatorKind, SectionalOperator

TARGETS = (
    "involution", "theorem1", "theorem2", "theorem3", "theorem4", "lemma1", "reduction",
    "det-identity", "cross-commute", "lax", "restriction",
)


class IntegratorSection(BaseModel):
    """Integrator settings; omitted fields fall back to the config defaults"""
    model_config = ConfigDict(extra='forbid')

    method: Literal["rk4", "implicit_midpoint"] = Field(default_factory=lambda: config.integrator.method)
    step: float = Field(default_factory=lambda: config.integrator.step, gt=0.0)
    horizon: float = Field(default_factory=lambda: config.integrator.horizon, gt=0.0)
    stride: int = Field(default_factory=lambda: config.integrator.stride, ge=1)


class InitialCondition(BaseModel):
    """Explicit entries or a sampling seed (exactly one)"""
    model_config = ConfigDict(extra='forbid')

    entries: Optional[List[List[float]]] = None
    seed: Optional[int] = None
    space: Literal["so", "v", "p"] = "so"

    @model_validator(mode='after')
    def _one_source(self):
        if (self.entries is None) == (self.seed is None):
            raise ValueError("give exactly one of 'entries' or 'seed'")
        return self


class MetricSection(BaseModel):
    """Invariant metric driving a geodesic flow"""
    model_config = ConfigDict(extra='forbid')

    kind: Literal["normal", "submersion", "stiefel"]
    kappa: float = 1.0
    chi: float = 1.0
    interior: Optional[List[List[float]]] = None


class SweepSection(BaseModel):
    model_config = ConfigDict(extra='forbid')

    partitions: Optional[List[List[int]]] = None
    cap: Optional[int] = Field(default=None, ge=1)


class OutputSection(BaseModel):
    model_config = ConfigDict(extra='forbid')

    dir: Optional[str] = None
    trajectory: str = "trajectory.csv"
    conservation: str = "conservation.json"
    verdicts: str = "verdicts.json"
    sweep: str = "sweep.csv"


class RunConfig(BaseModel):
    """A complete run description

    Cross-field invariants (spectra distinct and matching the partition,
    positivity of the operator or metric) are checked on load by building
    the corresponding domain objects.
    """
    model_config = ConfigDict(extra='forbid')

    n: int = Field(ge=MIN_DIMENSION, le=MAX_DIMENSION)
    partition: Optional[List[int]] = None
    alphas: Optional[List[float]] = None
    betas: Optional[List[float]] = None
    operator: Optional[Literal["regular", "singular", "rigid_body"]] = None
    interior_op: Optional[List[List[float]]] = None
    metric: Optional[MetricSection] = None
    integrator: IntegratorSection = Field(default_factory=IntegratorSection)
    initial: Optional[InitialCondition] = None
    targets: List[str] = Field(default_factory=list)
    l_split: Optional[int] = Field(default=None, ge=1)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    seeds: Optional[List[int]] = None
    output: OutputSection = Field(default_factory=OutputSection)
    sweep: Optional[SweepSection] = None

    @field_validator('partition')
    @classmethod
    def _positive_blocks(cls, value):
        if value is not None and (not value or any(k < 1 for k in value)):
            raise ValueError("partition blocks must be positive integers")
        return value

    @field_validator('targets')
    @classmethod
    def _known_targets(cls, value):
        unknown = [t for t in value if t not in TARGETS]
        if unknown:
            raise ValueError(f"unknown targets {unknown}; expected a subset of {list(TARGETS)}")
        return value

    @field_validator('tolerances')
    @classmethod
    def _known_tolerances(cls, value):
        for key, tol in value.items():
            try:
                config.tolerances.override(key, tol)
            except KeyError:
                raise ValueError(f"unknown tolerance '{key}'")
        return value

    @model_validator(mode='after')
    def _domain_invariants(self):
        self._check('partition', self.block_partition)
        self._check('alphas', self.spectral_params)
        if self.operator is not None:
            self._check('operator', self.sectional_operator)
        if self.metric is not None:
            self._check('metric', self.metric_spec)
        self._check('integrator', self.integrator_config)
        if self.initial is not None:
            self._check('initial', self.initial_state)
        if self.l_split is not None and self.l_split > self.block_partition().r:
            raise ValueError(f"l_split: must not exceed the number of blocks "
                             f"{self.block_partition().r}")
        if "theorem4" in self.targets and self.l_split is None:
            raise ValueError("l_split: required by target theorem4")
        return self

    @staticmethod
    def _check(field: str, build):
        try:
            build()
        except LabError as e:
            raise ValueError(f"{field}: {e}")

    def block_partition(self) -> BlockPartition:
        """Partition of n; short partitions are padded with size-1 blocks"""
        if self.partition is None:
            return BlockPartition.regular(self.n)
        return BlockPartition.padded(self.partition, self.n)

    def spectral_params(self) -> SpectralParams:
        partition = self.block_partition()
        if self.alphas is None and self.betas is None:
            return SpectralParams.default(partition)
        default = SpectralParams.default(partition)
        alphas = default.alphas if self.alphas is None else tuple(self.alphas)
        betas = default.betas if self.betas is None else tuple(self.betas)
        return SpectralParams(partition, alphas, betas)

    def sectional_operator(self) -> SectionalOperator:
        params = self.spectral_params()
        if self.operator == OperatorKind.RIGID_BODY.value:
            return SectionalOperator.rigid_body(params.partition, params.betas)
        interior = None if self.interior_op is None else np.asarray(self.interior_op, dtype=float)
        return SectionalOperator(OperatorKind(self.operator), params, interior)

    def metric_spec(self) -> MetricSpec:
        m = self.metric
        interior = None if m.interior is None else np.asarray(m.interior, dtype=float)
        kind = MetricKind(m.kind)
        params = self.spectral_params() if kind == MetricKind.SUBMERSION else None
        return MetricSpec(kind, self.block_partition(), params, interior, m.kappa, m.chi)

    def driving_operator(self) -> SectionalOperator:
        """Operator of the simulated flow (explicit operator wins over a metric)"""
        if self.operator is not None:
            return self.sectional_operator()
        if self.metric is not None:
            return self.metric_spec().to_operator()
        raise ConfigValidationError("operator: simulate needs an operator kind or a metric")

    def integrator_config(self) -> IntegratorConfig:
        s = self.integrator
        return IntegratorConfig(s.method, s.step, s.horizon, s.stride)

    def initial_state(self) -> np.ndarray:
        init = self.initial
        if init is None:
            raise ConfigValidationError("initial: simulate needs an initial condition")
        if init.entries is not None:
            M = skew_matrix(init.entries)
            if M.shape[0] != self.n:
                raise ConfigValidationError(f"entries must be {self.n}x{self.n}, got {M.shape}")
            return M
        partition = self.block_partition()
        l_split = self.l_split if init.space == 'p' else None
        return sample_generic(init.seed, init.space, self.n, partition, l_split)


def _format_errors(err: ValidationError) -> str:
    lines = []
    for item in err.errors():
        loc = ".".join(str(p) for p in item["loc"])
        msg = item["msg"].removeprefix("Value error, ")
        lines.append(f"{loc}: {msg}" if loc else msg)
    return "; ".join(lines)


def parse_run_config(data) -> RunConfig:
    """Validate an already parsed document

    Raises:
        ConfigValidationError: with one 'field.path: message' entry per problem
    """
    if not isinstance(data, dict):
        raise ConfigValidationError("run configuration must be a mapping")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigValidationError(_format_errors(e))


def load_run_config(path) -> RunConfig:
    """Read a JSON (or YAML) run configuration

    Raises:
        OutputError: if the file cannot be read
        ConfigValidationError: on syntax errors (with line and column) or invalid fields
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise OutputError(f"cannot read run config {path}: {e}")

    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, 'problem_mark', None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigValidationError(f"{path}{where}: {getattr(e, 'problem', e)}")

    run = parse_run_config(data)
    logger.debug(f"run config {path} loaded (n={run.n}, partition={run.block_partition()})")
    return run
