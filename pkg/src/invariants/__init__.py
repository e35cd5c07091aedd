"""
Invariants modules - integral families, brackets and algebraic identities
"""

from .families import (
    IntegralMember, IntegralFamily, ManakovCoefficient, ShiftedTrace, BolsinovTrace,
    LinearForm, HamiltonianMember, PencilCasimir, GLTrace,
    gradient, manakov_family, casimir_family, noether_family, factor_manakov_family,
    bolsinov_family, hamiltonian_family, pencil_casimir_family, default_j_lambdas,
    eval_manakov_coeffs, j_family_eval, casimir_gl_eval, power_coefficients
)
from .brackets import (
    BracketType, BracketKind, BracketSpace, InvolutionResult,
    bracket, bracket_space, involution_matrix, structure_matrix, jacobiator,
    lie_poisson_form, frozen_form, pencil_form
)
from .identities import CheckResult, cross_commutation_check, restriction_check, det_identity_check

__all__ = [
    'IntegralMember', 'IntegralFamily', 'ManakovCoefficient', 'ShiftedTrace', 'BolsinovTrace',
    'LinearForm', 'HamiltonianMember', 'PencilCasimir', 'GLTrace',
    'gradient', 'manakov_family', 'casimir_family', 'noether_family', 'factor_manakov_family',
    'bolsinov_family', 'hamiltonian_family', 'pencil_casimir_family', 'default_j_lambdas',
    'eval_manakov_coeffs', 'j_family_eval', 'casimir_gl_eval', 'power_coefficients',
    'BracketType', 'BracketKind', 'BracketSpace', 'InvolutionResult',
    'bracket', 'bracket_space', 'involution_matrix', 'structure_matrix', 'jacobiator',
    'lie_poisson_form', 'frozen_form', 'pencil_form',
    'CheckResult', 'cross_commutation_check', 'restriction_check', 'det_identity_check'
]
