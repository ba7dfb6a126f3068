"""
Многомерные функции Эрмита H_{m,lambda}(x - a).

Одномерные многочлены задаются формулой Родрига phi_j(t) = e^{t^2} d^j/dt^j e^{-t^2}
и вычисляются трехчленной рекуррентностью. Многомерная функция является
произведением одномерных множителей с нормировочной константой N_m.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
from scipy.special import gammaln

from basis.index_sets import IndexSet, MultiIndex
from utils.constants import NORMALIZATION_MODES
from utils.data_validator import require_choice, require_positive
from utils.logger import get_logger

logger = get_logger(__name__)


def hermite_phi_triple(j: int, t: float) -> Tuple[float, float, float]:
    """
    Значение, первая и вторая производные phi_j в точке t.

    Args:
        j: Степень многочлена, j >= 0
        t: Аргумент

    Returns:
        Кортеж (phi_j(t), phi_j'(t), phi_j''(t))
    """
    if j < 0:
        raise ValueError(f"Степень многочлена Эрмита должна быть >= 0, получено {j}")
    values, first, second = hermite_phi_table(max(j, 2), np.asarray(t, dtype=float))
    return float(values[j]), float(first[j]), float(second[j])


def hermite_phi_table(max_degree: int, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Таблица phi_j, phi_j', phi_j'' для всех j = 0..max_degree.

    phi_0 = 1, phi_1 = -2t, phi_{j+1} = -2t phi_j - 2j phi_{j-1};
    phi_j' = -2j phi_{j-1}, phi_j'' = 4j(j-1) phi_{j-2}.

    Args:
        max_degree: Максимальная степень
        t: Массив аргументов произвольной формы

    Returns:
        Три массива формы (max_degree + 1,) + t.shape
    """
    t = np.asarray(t, dtype=float)
    values = np.empty((max_degree + 1,) + t.shape)
    values[0] = 1.0
    if max_degree >= 1:
        values[1] = -2.0 * t
    for j in range(1, max_degree):
        values[j + 1] = -2.0 * t * values[j] - 2.0 * j * values[j - 1]

    first = np.zeros_like(values)
    second = np.zeros_like(values)
    for j in range(1, max_degree + 1):
        first[j] = -2.0 * j * values[j - 1]
    for j in range(2, max_degree + 1):
        second[j] = 4.0 * j * (j - 1) * values[j - 2]
    return values, first, second


def _log_factor_sum(exponents: np.ndarray) -> np.ndarray:
    """sum_i ln(2^{m_i} m_i!) по последней оси; совпадает с ln prod (2 m_i)!!."""
    exponents = np.asarray(exponents, dtype=float)
    return np.sum(exponents * math.log(2.0) + gammaln(exponents + 1.0), axis=-1)


def _log_normalization(exponents: np.ndarray, dimension: int, scale: float, mode: str) -> np.ndarray:
    pi_power = dimension / 2.0 if mode == 'orthonormal' else float(dimension)
    return 0.5 * (dimension * math.log(scale) - pi_power * math.log(math.pi)
                  - _log_factor_sum(exponents))


def normalization_constant(m: MultiIndex, scale: float, mode: str = 'orthonormal') -> float:
    """
    Нормировочная константа N_m функции H_{m,lambda}.

    Режим orthonormal дает sqrt(lambda^d / (pi^{d/2} prod 2^{m_i} m_i!)), при котором
    функции ортонормированы с весом e^{-lambda^2 |x-a|^2}; режимы paper и pi_d (синонимы) используют pi^d.
    Вычисление ведется в логарифмах.

    Args:
        m: Мультииндекс
        scale: Масштаб lambda > 0
        mode: 'orthonormal', 'paper' или 'pi_d'

    Returns:
        Значение N_m
    """
    require_positive('lambda', scale)
    require_choice('normalization', mode, NORMALIZATION_MODES)
    exponents = np.array([exponent for _, exponent in m.support], dtype=float)
    return float(np.exp(_log_normalization(exponents, m.dimension, scale, mode)))


@dataclass(frozen=True)
class BasisSpec:
    """Параметры базиса: множество индексов, масштаб lambda, сглаживание beta, режим нормировки."""
    index_set: IndexSet
    scale: float
    smoothing: float = 0.0
    normalization: str = 'orthonormal'

    def __post_init__(self):
        require_positive('lambda', self.scale)
        require_positive('beta', self.smoothing, allow_zero=True)
        require_choice('normalization', self.normalization, NORMALIZATION_MODES)

    @property
    def dimension(self) -> int:
        return self.index_set.dimension

    @property
    def size(self) -> int:
        return len(self.index_set)

    @cached_property
    def normalizations(self) -> np.ndarray:
        """Константы N_m всех членов в базисном порядке."""
        _, exponents = self.index_set.padded_support
        return np.exp(_log_normalization(exponents, self.dimension, self.scale, self.normalization))


@dataclass(frozen=True)
class BasisEval:
    """Значения и лапласианы всех базисных функций в одной точке."""
    values: np.ndarray
    laplacians: np.ndarray


def basis_matrix(spec: BasisSpec, points: np.ndarray, center: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Значения и лапласианы всех M базисных функций в q точках.

    Используется разреженный носитель: множители вне носителя равны phi_0 = 1.
    Лапласиан считается через префиксные и суффиксные произведения множителей.

    Args:
        spec: Параметры базиса
        points: Массив точек формы (q, d)
        center: Центр разложения a, форма (d,)

    Returns:
        Кортеж (values, laplacians) массивов формы (q, M)
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    center = np.asarray(center, dtype=float)
    if points.shape[1] != spec.dimension or center.shape != (spec.dimension,):
        raise ValueError(
            f"Размерность точек {points.shape} не совпадает с размерностью базиса {spec.dimension}"
        )

    q = points.shape[0]
    if spec.size == 0:
        return np.zeros((q, 0)), np.zeros((q, 0))

    coordinates, exponents = spec.index_set.padded_support
    t = spec.scale * (points - center)
    values, _, second = hermite_phi_table(max(spec.index_set.max_degree, 2), t)

    # (J, q, d) -> (q, M, width)
    factors = values[exponents, :, coordinates].transpose(2, 0, 1)
    curvatures = second[exponents, :, coordinates].transpose(2, 0, 1)

    ones = np.ones(factors.shape[:2] + (1,))
    prefix = np.cumprod(np.concatenate([ones, factors[:, :, :-1]], axis=2), axis=2)
    suffix = np.cumprod(np.concatenate([ones, factors[:, :, :0:-1]], axis=2), axis=2)[:, :, ::-1]

    norms = spec.normalizations
    basis_values = norms * np.prod(factors, axis=2)
    basis_laplacians = norms * spec.scale ** 2 * np.sum(curvatures * prefix * suffix, axis=2)
    return basis_values, basis_laplacians


def basis_eval(spec: BasisSpec, x: np.ndarray, a: np.ndarray) -> BasisEval:
    """
    Значения H_{m,lambda}(x - a) и их лапласианы для всех членов базиса.

    Args:
        spec: Параметры базиса
        x: Точка вычисления
        a: Центр разложения

    Returns:
        BasisEval в базисном порядке
    """
    values, laplacians = basis_matrix(spec, np.asarray(x, dtype=float)[None, :], a)
    return BasisEval(values=values[0], laplacians=laplacians[0])
