"""
Algebra modules - so(n)/gl(n) substrate, numerical rank and adjoint orbits
"""

from .liealg import (
    skew, sym, skew_matrix, scalar_product, commutator, wedge, project,
    BlockPartition, SpectralParams, WedgeBasis, Carrier,
    to_coords, from_coords, sample_generic, derived_seed, partitions_of
)
from .rank import RankDecision, numerical_rank, null_space, orth_rows, subspace_distance
from .orbits import ad_matrix, orbit_dimension, centralizer_basis, j_space

__all__ = [
    'skew', 'sym', 'skew_matrix', 'scalar_product', 'commutator', 'wedge', 'project',
    'BlockPartition', 'SpectralParams', 'WedgeBasis', 'Carrier',
    'to_coords', 'from_coords', 'sample_generic', 'derived_seed', 'partitions_of',
    'RankDecision', 'numerical_rank', 'null_space', 'orth_rows', 'subspace_distance',
    'ad_matrix', 'orbit_dimension', 'centralizer_basis', 'j_space'
]
