"""
Метрики точности: средняя относительная ошибка в процентах (AREP) и пятичисловая сводка.
"""

from typing import Dict, Sequence, Tuple

import numpy as np

from analysis.problems import DirichletProblem
from utils.constants import AREP_ZERO_THRESHOLD
from utils.error_handler import ErrorMetricError, ProblemDefinitionError
from utils.logger import get_logger

logger = get_logger(__name__)


def arep_details(solution: np.ndarray, exact_values: np.ndarray,
                 zero_threshold: float = AREP_ZERO_THRESHOLD) -> Tuple[float, int, int]:
    """
    AREP с учетом исключенных узлов.

    Узлы с |u(chi_i)| < zero_threshold исключаются из усреднения.

    Args:
        solution: Численное решение U
        exact_values: Точные значения u(chi_i)
        zero_threshold: Порог исключения

    Returns:
        Кортеж (AREP в процентах, число учтенных узлов, число исключенных узлов)
    """
    solution = np.asarray(solution, dtype=float)
    exact_values = np.asarray(exact_values, dtype=float)
    if solution.shape != exact_values.shape:
        raise ErrorMetricError(f"Размеры решения {solution.shape} и точных значений {exact_values.shape} различаются")

    kept = np.abs(exact_values) >= zero_threshold
    n_kept = int(kept.sum())
    n_excluded = solution.size - n_kept
    if n_kept == 0:
        raise ErrorMetricError(f"Все {solution.size} узлов исключены из AREP: |u| < {zero_threshold}")
    if n_excluded:
        logger.warning(f"Из AREP исключено {n_excluded} узлов с |u| < {zero_threshold}")

    relative = np.abs(solution[kept] - exact_values[kept]) / np.abs(exact_values[kept])
    return float(np.mean(relative) * 100.0), n_kept, n_excluded


def arep(solution: np.ndarray, problem: DirichletProblem, interior: np.ndarray) -> float:
    """
    Средняя относительная ошибка в процентах по внутренним узлам.

    Args:
        solution: Численное решение U
        problem: Задача с точным решением
        interior: Внутренние узлы

    Returns:
        AREP в процентах
    """
    if problem.exact is None:
        raise ProblemDefinitionError(f"Задача {problem.name} не имеет точного решения")
    value, _, _ = arep_details(solution, problem.exact(np.asarray(interior, dtype=float)))
    return value


def five_number_summary(values: Sequence[float]) -> Dict[str, float]:
    """Минимум, квартили и максимум (линейная интерполяция); NaN для пустой выборки."""
    values = np.asarray(values, dtype=float)
    keys = ('min', 'q1', 'median', 'q3', 'max')
    if values.size == 0:
        return {key: float('nan') for key in keys}
    quantiles = np.percentile(values, [0, 25, 50, 75, 100])
    return {key: float(value) for key, value in zip(keys, quantiles)}
