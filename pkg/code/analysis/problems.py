"""
Краевые задачи Дирихле 1/2 Laplace u = phi с известным точным решением.

Все функции задачи вычисляются по строкам массива точек формы (n, d).
Правая часть phi всегда выводится аналитически из точного решения как 1/2 Laplace u.
"""

import importlib.util
import os
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from geometry.domains import Domain
from geometry.sampling import sample_interior
from utils.data_validator import require_integer
from utils.error_handler import ProblemDefinitionError
from utils.logger import get_logger

logger = get_logger(__name__)

PointFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class DirichletProblem:
    """Задача 1/2 Laplace u = phi в Omega, u = v на границе."""
    name: str
    domain: Domain
    source: PointFunction
    boundary: PointFunction
    exact: Optional[PointFunction] = None

    @property
    def dimension(self) -> int:
        return self.domain.dimension


def case1(d: int) -> DirichletProblem:
    """
    Постоянная правая часть и линейное граничное условие в единичном шаре.

    u = (1/d)(1 - |x|^2) + sum x_i, phi = -1, v = sum x_i.
    """
    require_integer('d', d, minimum=1)

    def exact(x: np.ndarray) -> np.ndarray:
        return (1.0 - np.sum(x ** 2, axis=1)) / d + np.sum(x, axis=1)

    def source(x: np.ndarray) -> np.ndarray:
        return -np.ones(x.shape[0])

    def boundary(x: np.ndarray) -> np.ndarray:
        return np.sum(x, axis=1)

    return DirichletProblem('case1', Domain.ball(d), source, boundary, exact)


def case2(d: int) -> DirichletProblem:
    """
    Квадратичная правая часть и граничное условие четвертой степени в [-1, 1]^d.

    u = v = (1/6) sum x_i^4, phi = sum x_i^2.
    """
    require_integer('d', d, minimum=1)

    def exact(x: np.ndarray) -> np.ndarray:
        return np.sum(x ** 4, axis=1) / 6.0

    def source(x: np.ndarray) -> np.ndarray:
        return np.sum(x ** 2, axis=1)

    return DirichletProblem('case2', Domain.cube(d, -1.0, 1.0), source, exact, exact)


def case3(d: int) -> DirichletProblem:
    """
    Трансцендентные правая часть и граничное условие в [-3, 3]^d.

    u = v = arctan(s/2) + exp(-|x|^2), s = sum x_i;
    phi = (2|x|^2 - d) exp(-|x|^2) - 2 d s / (4 + s^2)^2.
    """
    require_integer('d', d, minimum=1)

    def exact(x: np.ndarray) -> np.ndarray:
        return np.arctan(np.sum(x, axis=1) / 2.0) + np.exp(-np.sum(x ** 2, axis=1))

    def source(x: np.ndarray) -> np.ndarray:
        s = np.sum(x, axis=1)
        r2 = np.sum(x ** 2, axis=1)
        return (2.0 * r2 - d) * np.exp(-r2) - 2.0 * d * s / (4.0 + s ** 2) ** 2

    return DirichletProblem('case3', Domain.cube(d, -3.0, 3.0), source, exact, exact)


PROBLEM_FACTORIES = {
    'case1': case1,
    'case2': case2,
    'case3': case3,
}


def load_custom_problem(file_path: str, d: int) -> DirichletProblem:
    """
    Загрузка пользовательской задачи из Python-файла с функцией build_problem(d).

    Args:
        file_path: Путь к файлу
        d: Размерность

    Returns:
        Задача, возвращенная build_problem(d)
    """
    if not file_path or not os.path.isfile(file_path):
        raise ProblemDefinitionError(f"Файл задачи не найден: {file_path}")

    try:
        spec = importlib.util.spec_from_file_location("hhfd_custom_problem", file_path)
        module = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(module)
    except Exception as e:
        raise ProblemDefinitionError(f"Ошибка при загрузке задачи {file_path}: {str(e)}") from e

    factory = getattr(module, 'build_problem', None)
    if not callable(factory):
        raise ProblemDefinitionError(f"В файле {file_path} не определена функция build_problem(d)")

    problem = factory(d)
    if not isinstance(problem, DirichletProblem):
        raise ProblemDefinitionError(
            f"build_problem в {file_path} вернула {type(problem).__name__}, ожидается DirichletProblem"
        )
    if problem.dimension != d:
        raise ProblemDefinitionError(f"Задача из {file_path} имеет размерность {problem.dimension}, ожидается {d}")
    return problem


def build_problem(kind: str, d: int, problem_file: Optional[str] = None) -> DirichletProblem:
    """Задача по имени: case1, case2, case3 или custom (из файла)."""
    if kind == 'custom':
        return load_custom_problem(problem_file, d)
    if kind not in PROBLEM_FACTORIES:
        raise ProblemDefinitionError(f"Неизвестная задача: {kind}")
    return PROBLEM_FACTORIES[kind](d)


def finite_difference_laplacian(func: PointFunction, points: np.ndarray, step: float = 1e-3) -> np.ndarray:
    """Центральная разностная аппроксимация Laplace func в точках."""
    points = np.asarray(points, dtype=float)
    center = func(points)
    laplacian = np.zeros(points.shape[0])
    for j in range(points.shape[1]):
        shift = np.zeros(points.shape[1])
        shift[j] = step
        laplacian += func(points + shift) - 2.0 * center + func(points - shift)
    return laplacian / step ** 2


def verify_problem(problem: DirichletProblem, n_points: int = 100, seed: int = 0,
                   rtol: float = 1e-4, step: float = 1e-3) -> float:
    """
    Проверка согласованности 1/2 Laplace u = phi в случайных внутренних точках.

    Args:
        problem: Задача с точным решением
        n_points: Число контрольных точек
        seed: Зерно генератора
        rtol: Допустимая относительная погрешность (относительно max(|phi|, 1))
        step: Шаг разностной схемы

    Returns:
        Максимальная относительная погрешность
    """
    if problem.exact is None:
        raise ProblemDefinitionError(f"Задача {problem.name} не имеет точного решения")

    points = sample_interior(problem.domain, n_points, seed)
    expected = problem.source(points)
    approximate = 0.5 * finite_difference_laplacian(problem.exact, points, step)
    scale = max(float(np.max(np.abs(expected))), 1.0)
    error = float(np.max(np.abs(approximate - expected))) / scale

    if error > rtol:
        raise ProblemDefinitionError(
            f"Задача {problem.name}: 1/2 Laplace u расходится с phi, относительная погрешность {error:.3e}"
        )
    logger.debug(f"Задача {problem.name} проверена: погрешность {error:.3e}")
    return error
