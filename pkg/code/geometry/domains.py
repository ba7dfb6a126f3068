"""
Расчетные области: d-мерный шар и d-мерный параллелепипед.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from utils.constants import BOUNDARY_TOLERANCE
from utils.data_validator import require_integer, require_positive
from utils.error_handler import ConfigurationError

DOMAIN_KINDS = ("ball", "box")


@dataclass(frozen=True)
class Domain:
    """
    Область Omega.

    Для шара заданы center и radius, для параллелепипеда - lower и upper.
    """
    kind: str
    dimension: int
    center: Tuple[float, ...] = ()
    radius: float = 0.0
    lower: Tuple[float, ...] = ()
    upper: Tuple[float, ...] = ()

    def __post_init__(self):
        require_integer('d', self.dimension, minimum=1)
        if self.kind == 'ball':
            if len(self.center) != self.dimension:
                raise ConfigurationError(
                    f"Центр шара имеет размерность {len(self.center)}, ожидается {self.dimension}"
                )
            require_positive('radius', self.radius)
        elif self.kind == 'box':
            if len(self.lower) != self.dimension or len(self.upper) != self.dimension:
                raise ConfigurationError(f"Границы параллелепипеда должны иметь размерность {self.dimension}")
            for j, (lo, hi) in enumerate(zip(self.lower, self.upper)):
                if not hi > lo:
                    raise ConfigurationError(f"Для координаты {j} требуется lower < upper, получено [{lo}, {hi}]")
        else:
            raise ConfigurationError(f"Неизвестный тип области: {self.kind}")

    @classmethod
    def ball(cls, d: int, radius: float = 1.0, center: Optional[Sequence[float]] = None) -> 'Domain':
        """Шар радиуса radius (по умолчанию с центром в нуле)."""
        center = tuple(float(x) for x in center) if center is not None else (0.0,) * d
        return cls(kind='ball', dimension=d, center=center, radius=float(radius))

    @classmethod
    def box(cls, lower: Sequence[float], upper: Sequence[float]) -> 'Domain':
        """Параллелепипед prod_j [lower_j, upper_j]."""
        return cls(kind='box', dimension=len(lower),
                   lower=tuple(float(x) for x in lower), upper=tuple(float(x) for x in upper))

    @classmethod
    def cube(cls, d: int, low: float, high: float) -> 'Domain':
        """Куб [low, high]^d."""
        return cls.box([low] * d, [high] * d)

    @property
    def widths(self) -> np.ndarray:
        return np.asarray(self.upper) - np.asarray(self.lower)

    def measure(self) -> float:
        return domain_measure(self)

    def distance_to_boundary(self, points: np.ndarray) -> np.ndarray:
        """
        Знаковое расстояние до границы: положительное внутри, отрицательное снаружи.

        Для параллелепипеда используется расстояние до ближайшей грани.
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.kind == 'ball':
            return self.radius - np.linalg.norm(points - np.asarray(self.center), axis=1)
        below = points - np.asarray(self.lower)
        above = np.asarray(self.upper) - points
        return np.minimum(below, above).min(axis=1)

    def contains(self, points: np.ndarray, margin: float = 0.0) -> np.ndarray:
        """Маска точек, лежащих строго внутри области с запасом margin."""
        return self.distance_to_boundary(points) > margin

    def on_boundary(self, points: np.ndarray, tol: float = BOUNDARY_TOLERANCE) -> np.ndarray:
        """Маска точек, удовлетворяющих уравнению границы с точностью tol."""
        return np.abs(self.distance_to_boundary(points)) <= tol

    def face_measures(self) -> np.ndarray:
        """
        Меры 2d граней параллелепипеда в порядке (lower_0, upper_0, lower_1, ...).
        """
        if self.kind != 'box':
            raise ConfigurationError("Грани определены только для параллелепипеда")
        widths = self.widths
        measures = []
        for j in range(self.dimension):
            face = float(np.prod(np.delete(widths, j)))
            measures.extend([face, face])
        return np.asarray(measures)


def domain_measure(domain: Domain) -> float:
    """
    Мера Лебега области.

    Args:
        domain: Область

    Returns:
        pi^{d/2} r^d / Gamma(d/2 + 1) для шара, prod(upper - lower) для параллелепипеда
    """
    d = domain.dimension
    if domain.kind == 'ball':
        log_measure = (d / 2.0) * math.log(math.pi) + d * math.log(domain.radius) - gammaln(d / 2.0 + 1.0)
        return float(math.exp(log_measure))
    return float(np.prod(domain.widths))
