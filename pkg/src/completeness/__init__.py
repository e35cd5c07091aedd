"""
Completeness modules - ddim/dind criteria, normal-form reduction and theorem drivers
"""

from ..algebra.orbits import orbit_dimension, j_space
from .report import Verdict, PointRecord, FamilySpanReport, CompletenessVerdict
from .criteria import (
    ddim_dind, coisotropy_check, coisotropy_residual, self_orthogonality,
    bracket_corank, bracket_complement, with_resampling
)
from .reduction import (
    NormalForm, ReductionCheck, normal_form_reduce, verify_reduction_equality,
    reduced_partition, reduction_size, conjugation_error
)
from .theorems import (
    as_partition, evaluate_points, verify_theorem1, verify_theorem2, verify_theorem3,
    verify_theorem4, lemma1_nullity, verify_lemma1, verify_reduction, antidiagonal_normal_form
)
from .checks import (
    verify_involution, verify_cross_commutation, verify_det_identity, verify_restriction, verify_lax
)

__all__ = [
    'orbit_dimension', 'j_space',
    'Verdict', 'PointRecord', 'FamilySpanReport', 'CompletenessVerdict',
    'ddim_dind', 'coisotropy_check', 'coisotropy_residual', 'self_orthogonality',
    'bracket_corank', 'bracket_complement', 'with_resampling',
    'NormalForm', 'ReductionCheck', 'normal_form_reduce', 'verify_reduction_equality',
    'reduced_partition', 'reduction_size', 'conjugation_error',
    'as_partition', 'evaluate_points', 'verify_theorem1', 'verify_theorem2', 'verify_theorem3',
    'verify_theorem4', 'lemma1_nullity', 'verify_lemma1', 'verify_reduction', 'antidiagonal_normal_form',
    'verify_involution', 'verify_cross_commutation', 'verify_det_identity', 'verify_restriction',
    'verify_lax'
]
