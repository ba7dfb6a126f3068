"""
Генерация случайных наборов узлов: равномерно внутри области и на ее границе.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy.spatial import cKDTree

from geometry.domains import Domain
from utils.constants import BOUNDARY_RATIO, BOUNDARY_TOLERANCE, DUPLICATE_TOLERANCE
from utils.data_validator import require_integer
from utils.error_handler import ConfigurationError
from utils.logger import get_logger

logger = get_logger(__name__)

MAX_RESAMPLE_ROUNDS = 100


@dataclass(frozen=True, eq=False)
class NodeSet:
    """Внутренние и граничные узлы; глобальный порядок - сначала внутренние, затем граничные."""
    interior: np.ndarray
    boundary: np.ndarray
    seed: Union[int, Tuple[int, ...]] = 0

    def __post_init__(self):
        self.interior.setflags(write=False)
        self.boundary.setflags(write=False)

    @property
    def dimension(self) -> int:
        return self.interior.shape[1]

    @property
    def n_interior(self) -> int:
        return self.interior.shape[0]

    @property
    def n_boundary(self) -> int:
        return self.boundary.shape[0]

    @property
    def n_total(self) -> int:
        return self.n_interior + self.n_boundary

    @property
    def points(self) -> np.ndarray:
        """Все узлы в глобальном порядке, форма (N', d)."""
        return np.vstack([self.interior, self.boundary])


def default_boundary_count(d: int, N: int, ratio: float = BOUNDARY_RATIO) -> int:
    """Число граничных узлов по умолчанию: max(2d, ceil(ratio * N))."""
    return max(2 * d, int(math.ceil(ratio * N)))


def _unit_directions(count: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Равномерные направления на единичной сфере через нормированные гауссовы векторы."""
    gauss = rng.standard_normal((count, d))
    norms = np.linalg.norm(gauss, axis=1)
    # Нулевой гауссов вектор практически невозможен, но заменяем его на e_0
    zero = norms == 0.0
    if np.any(zero):
        gauss[zero] = 0.0
        gauss[zero, 0] = 1.0
        norms[zero] = 1.0
    return gauss / norms[:, None]


def _draw_interior(domain: Domain, count: int, rng: np.random.Generator) -> np.ndarray:
    """count равномерных точек строго внутри области (с отступом от границы)."""
    d = domain.dimension
    accepted = np.empty((0, d))
    for _ in range(MAX_RESAMPLE_ROUNDS):
        missing = count - accepted.shape[0]
        if missing <= 0:
            break
        if domain.kind == 'ball':
            radii = domain.radius * rng.random(missing) ** (1.0 / d)
            candidates = np.asarray(domain.center) + _unit_directions(missing, d, rng) * radii[:, None]
        else:
            candidates = rng.uniform(domain.lower, domain.upper, size=(missing, d))
        inside = domain.contains(candidates, margin=BOUNDARY_TOLERANCE)
        accepted = np.vstack([accepted, candidates[inside]])
    if accepted.shape[0] < count:
        raise ConfigurationError(f"Не удалось сгенерировать {count} внутренних узлов области {domain.kind}")
    return accepted[:count]


def _draw_boundary(domain: Domain, count: int, rng: np.random.Generator) -> np.ndarray:
    """count равномерных точек на границе области."""
    d = domain.dimension
    if domain.kind == 'ball':
        return np.asarray(domain.center) + domain.radius * _unit_directions(count, d, rng)

    measures = domain.face_measures()
    faces = rng.choice(2 * d, size=count, p=measures / measures.sum())
    points = rng.uniform(domain.lower, domain.upper, size=(count, d))
    coordinates = faces // 2
    at_upper = faces % 2 == 1
    rows = np.arange(count)
    points[rows, coordinates] = np.where(at_upper,
                                         np.asarray(domain.upper)[coordinates],
                                         np.asarray(domain.lower)[coordinates])
    return points


def _replace_duplicates(interior: np.ndarray, boundary: np.ndarray, domain: Domain,
                        rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Перевыбор узлов, совпадающих с более ранними узлами с точностью DUPLICATE_TOLERANCE."""
    n = interior.shape[0]
    for _ in range(MAX_RESAMPLE_ROUNDS):
        points = np.vstack([interior, boundary])
        pairs = cKDTree(points).query_pairs(DUPLICATE_TOLERANCE, output_type='ndarray')
        if len(pairs) == 0:
            return interior, boundary
        repeated = np.unique(pairs.max(axis=1))
        logger.debug(f"Перевыбор {len(repeated)} совпадающих узлов")
        inner = repeated[repeated < n]
        outer = repeated[repeated >= n] - n
        if len(inner):
            interior[inner] = _draw_interior(domain, len(inner), rng)
        if len(outer):
            boundary[outer] = _draw_boundary(domain, len(outer), rng)
    raise ConfigurationError("Не удалось устранить совпадающие узлы")


def generate_node_set(domain: Domain, N: int, N_b: Optional[int] = None,
                      seed: Union[int, Tuple[int, ...]] = 0) -> NodeSet:
    """
    Набор узлов из одного потока случайных чисел: сначала внутренние, затем граничные.

    Args:
        domain: Область
        N: Число внутренних узлов
        N_b: Число граничных узлов (None - default_boundary_count)
        seed: Зерно генератора (целое или кортеж целых для повторной генерации)

    Returns:
        Неизменяемый NodeSet
    """
    require_integer('N', N, minimum=0)
    if N_b is None:
        N_b = default_boundary_count(domain.dimension, N)
    require_integer('N_b', N_b, minimum=0)

    rng = np.random.default_rng(seed)
    interior = _draw_interior(domain, N, rng)
    boundary = _draw_boundary(domain, N_b, rng) if N_b > 0 else np.empty((0, domain.dimension))
    interior, boundary = _replace_duplicates(interior, boundary, domain, rng)

    logger.debug(f"Сгенерировано {N} внутренних и {N_b} граничных узлов (seed={seed})")
    return NodeSet(interior=interior, boundary=boundary, seed=seed)


def sample_interior(domain: Domain, N: int, seed: int) -> np.ndarray:
    """
    N независимых равномерных точек внутри области.

    Args:
        domain: Область
        N: Число точек, N >= 1
        seed: Зерно генератора

    Returns:
        Массив формы (N, d)
    """
    require_integer('N', N, minimum=1)
    return generate_node_set(domain, N, N_b=0, seed=seed).interior.copy()


def sample_boundary(domain: Domain, N_b: int, seed: int) -> np.ndarray:
    """N_b равномерных точек на границе (для параллелепипеда грань выбирается пропорционально ее мере)."""
    require_integer('N_b', N_b, minimum=1)
    return generate_node_set(domain, 0, N_b=N_b, seed=seed).boundary.copy()
