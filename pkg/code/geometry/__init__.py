"""
Пакет геометрии: области и генерация узлов.
"""

from .domains import Domain, domain_measure
from .sampling import (NodeSet, generate_node_set, sample_interior, sample_boundary,
                       default_boundary_count)

__all__ = [
    'Domain',
    'domain_measure',
    'NodeSet',
    'generate_node_set',
    'sample_interior',
    'sample_boundary',
    'default_boundary_count',
]
