"""
Пакет задач, метрик и серий расчетов.
"""

from .problems import (DirichletProblem, case1, case2, case3, build_problem, load_custom_problem,
                       verify_problem, finite_difference_laplacian)
from .metrics import arep, arep_details, five_number_summary
from .experiment import ExperimentReport, ExperimentRunner, run_experiment, summarize
from .report_generator import ReportGenerator

__all__ = [
    'DirichletProblem',
    'case1',
    'case2',
    'case3',
    'build_problem',
    'load_custom_problem',
    'verify_problem',
    'finite_difference_laplacian',
    'arep',
    'arep_details',
    'five_number_summary',
    'ExperimentReport',
    'ExperimentRunner',
    'run_experiment',
    'summarize',
    'ReportGenerator',
]
