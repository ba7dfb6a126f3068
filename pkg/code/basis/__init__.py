"""
Пакет базиса Эрмита-HDMR: множества индексов и функции Эрмита.
"""

from .index_sets import (MultiIndex, IndexSet, enumerate_index_set, order_number, max_hdmr_order,
                         cardinality_bound, harmonic_number, hdmr_components, interaction_profile)
from .hermite import (BasisSpec, BasisEval, hermite_phi_triple, hermite_phi_table,
                      normalization_constant, basis_eval, basis_matrix)

__all__ = [
    'MultiIndex',
    'IndexSet',
    'enumerate_index_set',
    'order_number',
    'max_hdmr_order',
    'cardinality_bound',
    'harmonic_number',
    'hdmr_components',
    'interaction_profile',
    'BasisSpec',
    'BasisEval',
    'hermite_phi_triple',
    'hermite_phi_table',
    'normalization_constant',
    'basis_eval',
    'basis_matrix',
]
