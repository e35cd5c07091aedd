"""
Verification Reports
Per-point records, family span reports and aggregated verdicts serialized as JSON
"""

from dataclasses import asdict
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel, Field

from ..core.config import config


class Verdict(str, Enum):
    """Outcome of a verification target"""
    PASS = "PASS"
    FAIL = "FAIL"
    NOT_APPLICABLE = "NOT_APPLICABLE"


def effective_tolerances() -> Dict[str, float]:
    """Snapshot of the tolerance table in force"""
    return {k: float(v) for k, v in asdict(config.tolerances).items()}


class PointRecord(BaseModel):
    """Measurements at one sampled point"""
    seed: int
    point_seed: int
    attempt: int = 0
    ranks: Dict[str, int] = Field(default_factory=dict)
    residuals: Dict[str, float] = Field(default_factory=dict)
    lhs: Optional[int] = None
    rhs: Optional[int] = None
    passed: bool
    generic: bool = True
    note: Optional[str] = None


class FamilySpanReport(BaseModel):
    """Gradient span and bracket corank of a family at one point"""
    seed: Optional[int] = None
    members: int
    gradient_singular_values: List[float]
    ddim: int
    bracket_singular_values: List[float]
    dind: int
    tolerances: Dict[str, float] = Field(default_factory=effective_tolerances)
    stable: bool = True


class CompletenessVerdict(BaseModel):
    """Aggregated outcome of one verification target"""
    theorem: str
    identity: str = ""
    n: int
    partition: List[int]
    l_split: Optional[int] = None
    seeds: List[int]
    target: Optional[int] = None
    per_point: List[PointRecord] = Field(default_factory=list)
    passed_points: int = 0
    non_generic_points: int = 0
    verdict: Verdict
    tolerances: Dict[str, float] = Field(default_factory=effective_tolerances)

    @property
    def passed(self) -> bool:
        return self.verdict != Verdict.FAIL

    @classmethod
    def aggregate(cls, theorem: str, n: int, partition: Sequence[int], seeds: Sequence[int],
                  per_point: Sequence[PointRecord], identity: str = "",
                  target: Optional[int] = None, l_split: Optional[int] = None,
                  pass_fraction: Optional[float] = None) -> "CompletenessVerdict":
        """Combine point records into a verdict

        A target passes when no generic point fails and at least `pass_fraction`
        of all sampled points pass; the rest must be flagged non-generic.
        The result does not depend on the order of the records.
        """
        pass_fraction = config.tolerances.pass_fraction if pass_fraction is None else pass_fraction
        records = sorted(per_point, key=lambda p: p.seed)
        passed = sum(1 for p in records if p.passed)
        non_generic = sum(1 for p in records if not p.generic)
        failed = sum(1 for p in records if p.generic and not p.passed)

        if not records:
            verdict = Verdict.FAIL
        elif failed == 0 and passed >= pass_fraction * len(records):
            verdict = Verdict.PASS
        else:
            verdict = Verdict.FAIL

        return cls(
            theorem=theorem, identity=identity, n=n, partition=list(partition),
            l_split=l_split, seeds=sorted(int(s) for s in seeds), target=target,
            per_point=records, passed_points=passed, non_generic_points=non_generic,
            verdict=verdict,
        )

    @classmethod
    def not_applicable(cls, theorem: str, n: int, partition: Sequence[int],
                       seeds: Sequence[int], note: str = "") -> "CompletenessVerdict":
        return cls(theorem=theorem, identity=note, n=n, partition=list(partition),
                   seeds=sorted(int(s) for s in seeds), verdict=Verdict.NOT_APPLICABLE)

    def to_record(self) -> Dict[str, Any]:
        """JSON-ready dictionary"""
        return self.model_dump(mode="json")
