"""
Модуль построения шаблонов (stencil) для оператора 1/2 Laplace.

Для каждого внутреннего опорного узла выбираются соседи в шаре радиуса rho = kappa / lambda,
решается взвешенная задача наименьших квадратов по базису Эрмита-HDMR и формируется
строка весов w, для которой w^T U' ~ 1/2 Laplace u(chi_i).
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg as la
from joblib import Parallel, delayed
from scipy.special import gammaln
from sklearn.neighbors import NearestNeighbors
from tqdm import tqdm

from basis.hermite import BasisSpec, basis_matrix
from basis.index_sets import MultiIndex, order_number
from geometry.sampling import NodeSet
from utils.constants import (CONDITION_LIMIT, DEFAULT_KAPPA, DEFAULT_RIDGE, DEFAULT_THETA,
                             MAX_RADIUS_EXPANSIONS, RADIUS_EXPANSION_FACTOR, REFINEMENT_STEPS)
from utils.data_validator import require_in_range, require_integer, require_positive
from utils.error_handler import InsufficientNodesError, SingularStencilError
from utils.logger import get_logger

logger = get_logger(__name__)

# Относительный запас радиуса при запросе к индексу соседей; итоговый отбор точный
SEARCH_SLACK = 1e-6


@dataclass(frozen=True)
class MethodParams:
    """Параметры метода: kappa, theta, lambda, регуляризация и правила расширения радиуса."""
    scale: float
    kappa: float = DEFAULT_KAPPA
    theta: float = DEFAULT_THETA
    ridge: float = DEFAULT_RIDGE
    min_neighbors: int = 1
    expansion_factor: float = RADIUS_EXPANSION_FACTOR
    max_expansions: int = MAX_RADIUS_EXPANSIONS
    condition_limit: float = CONDITION_LIMIT
    refinement_steps: int = REFINEMENT_STEPS

    def __post_init__(self):
        require_positive('lambda', self.scale)
        require_positive('kappa', self.kappa)
        require_in_range('theta', self.theta, lower=1.0, lower_inclusive=False)
        require_positive('ridge', self.ridge, allow_zero=True)
        require_integer('min_neighbors', self.min_neighbors, minimum=1)
        require_in_range('expansion_factor', self.expansion_factor, lower=1.0, lower_inclusive=False)
        require_integer('max_expansions', self.max_expansions, minimum=0)
        require_integer('refinement_steps', self.refinement_steps, minimum=0)

    @property
    def radius(self) -> float:
        """Радиус шаблона rho = kappa / lambda."""
        return self.kappa / self.scale


@dataclass(frozen=True, eq=False)
class Stencil:
    """Строка весов для одного опорного узла вместе с диагностикой."""
    reference_index: int
    neighbor_indices: np.ndarray
    weights: np.ndarray
    radius: float
    expansions: int = 0
    condition: float = field(default=float('nan'))

    @property
    def neighbor_count(self) -> int:
        return len(self.neighbor_indices)


def select_lambda(theta: float, kappa: float, M: int, N: int, measure: float, d: int) -> float:
    """
    Выбор масштаба lambda по плотности узлов.

    (1/lambda)^d = (1/(kappa sqrt(pi)))^d * theta * M * Gamma(d/2 + 1) * |Omega| / N,
    вычисление ведется в логарифмах.

    Args:
        theta: Коэффициент запаса, theta > 1
        kappa: Константа радиуса
        M: Число базисных функций
        N: Число внутренних узлов
        measure: Мера области |Omega|
        d: Размерность

    Returns:
        Масштаб lambda
    """
    require_in_range('theta', theta, lower=1.0, lower_inclusive=False)
    require_positive('kappa', kappa)
    require_integer('M', M, minimum=1)
    require_integer('N', N, minimum=1)
    require_positive('|Omega|', measure)
    require_integer('d', d, minimum=1)

    log_ratio = (math.log(N) - math.log(theta) - math.log(M)
                 - gammaln(d / 2.0 + 1.0) - math.log(measure))
    return float(math.exp(math.log(kappa * math.sqrt(math.pi)) + log_ratio / d))


def smooth_coefficient_scale(m: MultiIndex, c: float, beta: float) -> float:
    """Множитель сглаживания k_m^{-beta}."""
    require_positive('beta', beta, allow_zero=True)
    return order_number(m, c) ** (-beta)


class NeighborSearch:
    """Поиск соседей в шаре по всем N' узлам набора."""

    def __init__(self, nodes: NodeSet, algorithm: str = 'brute'):
        """
        Args:
            nodes: Набор узлов
            algorithm: Алгоритм sklearn.neighbors.NearestNeighbors
        """
        self.points = nodes.points
        self.index = NearestNeighbors(algorithm=algorithm).fit(self.points)

    def query(self, reference: np.ndarray, radius: float) -> np.ndarray:
        """Отсортированные индексы узлов с |x - reference| <= radius."""
        reference = np.asarray(reference, dtype=float)
        candidates = self.index.radius_neighbors(reference[None, :], radius=radius * (1.0 + SEARCH_SLACK),
                                                 return_distance=False)[0]
        distances = np.linalg.norm(self.points[candidates] - reference, axis=1)
        return np.sort(candidates[distances <= radius])

    def find(self, reference: np.ndarray, radius: float, min_neighbors: int,
             expansion_factor: float = RADIUS_EXPANSION_FACTOR,
             max_expansions: int = MAX_RADIUS_EXPANSIONS,
             reference_index: Optional[int] = None) -> Tuple[np.ndarray, float, int]:
        """
        Соседи в шаре с расширением радиуса, пока их меньше min_neighbors.

        Returns:
            Кортеж (индексы, итоговый радиус, число расширений)
        """
        for expansions in range(max_expansions + 1):
            indices = self.query(reference, radius)
            if len(indices) >= min_neighbors:
                return indices, radius, expansions
            if expansions < max_expansions:
                radius *= expansion_factor

        raise InsufficientNodesError(
            f"Узел {reference_index}: в шаре радиуса {radius:.6g} найдено {len(indices)} узлов "
            f"после {max_expansions} расширений, требуется не меньше {min_neighbors}",
            reference_index=reference_index,
        )


def find_neighbors(nodes: NodeSet, reference: np.ndarray, radius: float,
                   min_neighbors: int = 1) -> np.ndarray:
    """
    Индексы (в глобальном порядке узлов) всех узлов в шаре B(reference, radius).

    Если соседей меньше min_neighbors, радиус умножается на 1.1 (не более 50 раз).

    Args:
        nodes: Набор узлов
        reference: Опорная точка
        radius: Радиус rho > 0
        min_neighbors: Минимальное число соседей

    Returns:
        Отсортированный массив индексов
    """
    require_positive('rho', radius)
    indices, _, _ = NeighborSearch(nodes).find(reference, radius, min_neighbors)
    return indices


def build_laplacian_row(nodes: NodeSet, reference_index: int, spec: BasisSpec, params: MethodParams,
                        search: Optional[NeighborSearch] = None) -> Stencil:
    """
    Строка весов оператора 1/2 Laplace в опорном узле.

    B[r, j] = H_j(chi'_r - chi_i) k_j^{-beta}, W = diag(exp(-lambda^2 |chi'_r - chi_i|^2)),
    D[j] = 1/2 Laplace H_j(0) k_j^{-beta}; решается G y = D с G = B^T W B + ridge tr/M I,
    веса w = W B y.

    При params.refinement_steps > 0 решение G y = D дополнительно уточняется шагами
    y <- y + G^{-1}(D - B^T W B y) с тем же разложением Холецкого, то есть y приближается
    к решению нерегуляризованной системы B^T W B y = D. При refinement_steps = 0
    возвращается решение G y = D без уточнения.

    Args:
        nodes: Набор узлов
        reference_index: Индекс опорного узла среди внутренних
        spec: Параметры базиса
        params: Параметры метода
        search: Готовый индекс соседей (строится заново, если не задан)

    Returns:
        Шаблон опорного узла
    """
    search = search or NeighborSearch(nodes)
    reference = nodes.interior[reference_index]
    indices, radius, expansions = search.find(
        reference, params.radius, max(params.min_neighbors, spec.size),
        expansion_factor=params.expansion_factor, max_expansions=params.max_expansions,
        reference_index=reference_index,
    )

    neighbors = search.points[indices]
    column_scale = np.power(np.asarray(spec.index_set.orders), -spec.smoothing)
    values, _ = basis_matrix(spec, neighbors, reference)
    _, laplacians_at_center = basis_matrix(spec, reference[None, :], reference)

    design = values * column_scale
    gauss = np.exp(-spec.scale ** 2 * np.sum((neighbors - reference) ** 2, axis=1))
    target = 0.5 * laplacians_at_center[0] * column_scale

    gram = design.T @ (gauss[:, None] * design)
    regularized = gram + params.ridge * np.trace(gram) / spec.size * np.eye(spec.size)

    condition = np.linalg.cond(regularized)
    if not np.isfinite(condition) or condition > params.condition_limit:
        raise SingularStencilError(
            f"Узел {reference_index}: локальная система вырождена (число обусловленности {condition:.3e})",
            reference_index=reference_index,
        )

    try:
        factor = la.cho_factor(regularized)
    except la.LinAlgError as e:
        raise SingularStencilError(f"Узел {reference_index}: {str(e)}", reference_index=reference_index) from e

    # Каждый шаг уточнения по B^T W B умножает ошибку на ridge / (mu + ridge)
    coefficients = la.cho_solve(factor, target)
    for _ in range(params.refinement_steps):
        coefficients = coefficients + la.cho_solve(factor, target - gram @ coefficients)
    weights = gauss * (design @ coefficients)

    logger.debug(f"Узел {reference_index}: {len(indices)} соседей, радиус {radius:.4g}, "
                 f"расширений {expansions}, cond {condition:.3e}")
    return Stencil(reference_index=reference_index, neighbor_indices=indices, weights=weights,
                   radius=radius, expansions=expansions, condition=float(condition))


class StencilBuilder:
    """Построение шаблонов для всех внутренних узлов."""

    def __init__(self, config: Dict[str, Any]):
        """
        Args:
            config: Настройки: n_jobs (число процессов joblib), show_progress,
                neighbor_algorithm
        """
        self.config = config
        self.n_jobs = config.get('n_jobs', 1)
        self.show_progress = config.get('show_progress', False)
        self.algorithm = config.get('neighbor_algorithm', 'brute')

    def build_all(self, nodes: NodeSet, spec: BasisSpec, params: MethodParams) -> List[Stencil]:
        """
        Шаблоны всех внутренних узлов в порядке reference_index.

        Args:
            nodes: Набор узлов
            spec: Параметры базиса
            params: Параметры метода

        Returns:
            Список шаблонов
        """
        search = NeighborSearch(nodes, algorithm=self.algorithm)
        references = range(nodes.n_interior)
        if self.show_progress:
            references = tqdm(references, desc="Шаблоны", leave=False)

        if self.n_jobs == 1:
            stencils = [build_laplacian_row(nodes, i, spec, params, search) for i in references]
        else:
            stencils = Parallel(n_jobs=self.n_jobs)(
                delayed(build_laplacian_row)(nodes, i, spec, params, search) for i in references
            )

        expanded = sum(1 for stencil in stencils if stencil.expansions > 0)
        if expanded:
            logger.warning(f"Радиус шаблона расширялся в {expanded} из {len(stencils)} узлов")
        return stencils
