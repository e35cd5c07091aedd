"""
Error Types
Exception hierarchy shared by every module of the lab
"""

from typing import Optional, Tuple


class LabError(Exception):
    """Base class for all lab errors"""


class ShapeError(LabError, ValueError):
    """Operands have incompatible dimensions"""


class SingularDenominatorError(LabError, ArithmeticError):
    """A coefficient denominator vanishes"""

    def __init__(self, message: str, pair: Optional[Tuple[int, int]] = None):
        if pair is not None:
            message = f"{message} (index pair {pair[0]},{pair[1]})"
        super().__init__(message)
        self.pair = pair


class PoleError(LabError, ArithmeticError):
    """Spectral parameter hits a pole of (lambda I + A)^-1"""


class MetricPositivityError(LabError, ValueError):
    """Operator or metric fails positive definiteness"""


class ParameterError(LabError, ValueError):
    """Invalid partition or spectral parameters"""


class ConvergenceError(LabError, ArithmeticError):
    """Implicit solver did not converge"""

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} at step {step}")
        self.step = step


class CarrierMismatchError(LabError, ValueError):
    """Functions or points live on different carrier spaces"""


class NonGenericPointError(LabError):
    """Sampled point lies on a non-generic stratum; caller should resample"""


class IndeterminateRankError(LabError, ArithmeticError):
    """Rank decision stayed unstable after every resample"""


class ConfigValidationError(LabError, ValueError):
    """Run configuration failed validation"""


class OutputError(LabError, OSError):
    """Writing a report or trajectory failed"""
