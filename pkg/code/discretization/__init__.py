"""
Пакет дискретизации: шаблоны оператора Лапласа и сборка разреженной системы.
"""

from .stencil import (MethodParams, Stencil, NeighborSearch, StencilBuilder, select_lambda,
                      smooth_coefficient_scale, find_neighbors, build_laplacian_row)
from .assembly import (SparseSystem, assemble, check_conditioning, condition_number, dump_matrix,
                       load_matrix_dump)

__all__ = [
    'MethodParams',
    'Stencil',
    'NeighborSearch',
    'StencilBuilder',
    'select_lambda',
    'smooth_coefficient_scale',
    'find_neighbors',
    'build_laplacian_row',
    'SparseSystem',
    'assemble',
    'condition_number',
    'check_conditioning',
    'dump_matrix',
    'load_matrix_dump',
]
