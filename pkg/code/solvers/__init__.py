"""
Пакет итерационных решателей.
"""

from .iterative import SolveReport, build_preconditioner, bicgstab, sor, solve

__all__ = [
    'SolveReport',
    'build_preconditioner',
    'bicgstab',
    'sor',
    'solve',
]
