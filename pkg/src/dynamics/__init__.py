"""
Dynamics modules - sectional operators, metrics and flows on so(n)
"""

from .sectional import (
    OperatorKind, MetricKind, SectionalOperator, MetricSpec, MetricTable,
    manakov_omega, singular_omega, rigid_body_omega, build_omega,
    check_manakov_condition, metric_coefficients, hamiltonian_of, noether_applicable
)
from .flows import (
    IntegratorMethod, IntegratorConfig, Trajectory,
    euler_field, singular_flow_field, rigid_body_field, operator_field, integrate,
    lax_residual, lax_spectrum, relative_drift, spectrum_drift, noether_drift
)

__all__ = [
    'OperatorKind', 'MetricKind', 'SectionalOperator', 'MetricSpec', 'MetricTable',
    'manakov_omega', 'singular_omega', 'rigid_body_omega', 'build_omega',
    'check_manakov_condition', 'metric_coefficients', 'hamiltonian_of', 'noether_applicable',
    'IntegratorMethod', 'IntegratorConfig', 'Trajectory',
    'euler_field', 'singular_flow_field', 'rigid_body_field', 'operator_field', 'integrate',
    'lax_residual', 'lax_spectrum', 'relative_drift', 'spectrum_drift', 'noether_drift'
]
