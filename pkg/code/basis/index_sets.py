"""
Множества мультииндексов Эрмита-HDMR.

Множество Gamma^K(d, c) содержит все m из N_0^d, для которых порядковый номер
k_m = prod_j (m_j + c) строго меньше K. Перечисление идет по подмножествам носителя
(структура HDMR), поэтому стоимость пропорциональна размеру множества, а не K^d.

Координаты мультииндекса нумеруются с нуля.
"""

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from utils.constants import MEMBER_LIMIT
from utils.data_validator import require_integer, require_in_range
from utils.error_handler import IndexCapacityError
from utils.logger import get_logger

logger = get_logger(__name__)

SupportEntry = Tuple[int, int]


@dataclass(frozen=True)
class MultiIndex:
    """Разреженный мультииндекс: только координаты с ненулевой степенью."""
    dimension: int
    support: Tuple[SupportEntry, ...] = ()

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"Размерность мультииндекса должна быть >= 1, получено {self.dimension}")
        previous = -1
        for coordinate, exponent in self.support:
            if not 0 <= coordinate < self.dimension:
                raise ValueError(f"Координата {coordinate} вне диапазона 0..{self.dimension - 1}")
            if coordinate <= previous:
                raise ValueError(f"Координаты носителя должны строго возрастать: {self.support}")
            if exponent < 1:
                raise ValueError(f"Степени в носителе должны быть >= 1: {self.support}")
            previous = coordinate

    @classmethod
    def from_dense(cls, exponents: Sequence[int]) -> 'MultiIndex':
        """Построение из плотного вектора степеней."""
        support = tuple((j, int(m)) for j, m in enumerate(exponents) if m != 0)
        return cls(len(exponents), support)

    def to_dense(self) -> Tuple[int, ...]:
        """Плотный вектор степеней длины dimension."""
        dense = [0] * self.dimension
        for coordinate, exponent in self.support:
            dense[coordinate] = exponent
        return tuple(dense)

    @property
    def support_size(self) -> int:
        return len(self.support)

    @property
    def coordinates(self) -> Tuple[int, ...]:
        return tuple(coordinate for coordinate, _ in self.support)

    @property
    def max_degree(self) -> int:
        return max((exponent for _, exponent in self.support), default=0)

    def order_number(self, c: float) -> float:
        return order_number(self, c)


def order_number(m: MultiIndex, c: float) -> float:
    """
    Порядковый номер Эрмита k_m = prod_j (m_j + c).

    Координаты вне носителя дают множитель c, поэтому произведение вычисляется
    по носителю: c^(d - |supp|) * prod_{supp} (m_j + c).

    Args:
        m: Мультииндекс
        c: Сдвиг, c >= 1

    Returns:
        Порядковый номер k_m
    """
    product = float(c) ** (m.dimension - m.support_size)
    for _, exponent in m.support:
        product *= exponent + c
    return product


def max_hdmr_order(K: int, c: float = 1.0) -> int:
    """
    Наименьшее u >= 0, для которого (1 + c)^(u + 1) > K.

    Любой член Gamma^K(d, c) имеет носитель размера не больше u.

    Args:
        K: Порядок усечения
        c: Сдвиг

    Returns:
        Максимальный порядок взаимодействий HDMR
    """
    require_integer('K', K, minimum=1)
    require_in_range('c', c, lower=1.0)
    u = 0
    while (1.0 + c) ** (u + 1) <= K:
        u += 1
    return u


def harmonic_number(K: int) -> float:
    """K-е гармоническое число h_K = sum_{j<=K} 1/j."""
    require_integer('K', K, minimum=1)
    return math.fsum(1.0 / j for j in range(1, K + 1))


def cardinality_bound(K: int, d: int, tight: bool = False) -> float:
    """
    Верхняя оценка мощности множества индексов.

    Args:
        K: Порядок усечения
        d: Размерность
        tight: Использовать промежуточную оценку K * h_K^(d-1) вместо K * (1 + ln K)^(d-1)

    Returns:
        Оценка мощности
    """
    require_integer('K', K, minimum=1)
    require_integer('d', d, minimum=1)
    base = harmonic_number(K) if tight else 1.0 + math.log(K)
    return K * base ** (d - 1)


@dataclass(frozen=True)
class IndexSet:
    """Упорядоченное множество Gamma^K(d, c) вместе с порядковыми номерами."""
    dimension: int
    order: int
    shift: float
    members: Tuple[MultiIndex, ...] = ()
    orders: Tuple[float, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.members)

    def items(self) -> Iterator[Tuple[MultiIndex, float]]:
        return zip(self.members, self.orders)

    @property
    def max_support(self) -> int:
        return max((m.support_size for m in self.members), default=0)

    @property
    def max_degree(self) -> int:
        return max((m.max_degree for m in self.members), default=0)

    def exponent_matrix(self) -> np.ndarray:
        """Плотная матрица степеней размера M x d."""
        dense = np.zeros((len(self.members), self.dimension), dtype=np.int64)
        for row, m in enumerate(self.members):
            for coordinate, exponent in m.support:
                dense[row, coordinate] = exponent
        return dense

    @cached_property
    def padded_support(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Носители, дополненные до общей длины max(max_support, 1).

        Дополнение (координата 0, степень 0) дает множитель phi_0 = 1 и нулевую
        вторую производную, поэтому не влияет ни на значения, ни на лапласианы.
        """
        width = max(self.max_support, 1)
        coordinates = np.zeros((len(self.members), width), dtype=np.int64)
        exponents = np.zeros((len(self.members), width), dtype=np.int64)
        for row, m in enumerate(self.members):
            for slot, (coordinate, exponent) in enumerate(m.support):
                coordinates[row, slot] = coordinate
                exponents[row, slot] = exponent
        return coordinates, exponents


def _positive_exponent_tuples(size: int, base: float, c: float, K: int) -> List[Tuple[Tuple[int, ...], float]]:
    """Все кортежи положительных степеней длины size с base * prod(m + c) < K."""
    found = []

    def extend(prefix: List[int], product: float) -> None:
        remaining = size - len(prefix)
        if remaining == 0:
            found.append((tuple(prefix), product))
            return
        m = 1
        # Оставшиеся позиции дают множитель не меньше (1 + c)
        while product * (m + c) * (1.0 + c) ** (remaining - 1) < K:
            prefix.append(m)
            extend(prefix, product * (m + c))
            prefix.pop()
            m += 1

    extend([], base)
    return found


def enumerate_index_set(d: int, c: float = 1.0, K: int = 4,
                        member_limit: int = MEMBER_LIMIT) -> IndexSet:
    """
    Перечисление Gamma^K(d, c) = {m : prod_j (m_j + c) < K}.

    Члены упорядочены по (k_m, размер носителя, лексикографический носитель).

    Args:
        d: Размерность
        c: Сдвиг, c >= 1
        K: Порядок усечения
        member_limit: Максимально допустимое число членов

    Returns:
        Упорядоченное множество индексов
    """
    require_integer('d', d, minimum=1)
    require_integer('K', K, minimum=1)
    require_in_range('c', c, lower=1.0)

    max_order = min(max_hdmr_order(K, c), d)
    entries = []
    total = 0

    for size in range(max_order + 1):
        base = float(c) ** (d - size)
        if base * (1.0 + c) ** size >= K:
            break
        tuples = _positive_exponent_tuples(size, base, c, K)
        if not tuples:
            continue
        total += math.comb(d, size) * len(tuples)
        if total > member_limit:
            raise IndexCapacityError(
                f"Множество индексов Gamma^{K}(d={d}, c={c}) превышает лимит {member_limit} членов"
            )
        for coordinates in combinations(range(d), size):
            for exponents, product in tuples:
                support = tuple(zip(coordinates, exponents))
                entries.append((product, size, support))

    entries.sort()
    members = tuple(MultiIndex(d, support) for _, _, support in entries)
    orders = tuple(product for product, _, _ in entries)

    index_set = IndexSet(dimension=d, order=K, shift=float(c), members=members, orders=orders)
    logger.debug(f"Gamma^{K}(d={d}, c={c}): {len(index_set)} членов, "
                 f"максимальный носитель {index_set.max_support}")
    return index_set


def hdmr_components(index_set: IndexSet) -> Dict[Tuple[int, ...], List[int]]:
    """
    HDMR-разложение множества индексов по подмножествам носителя.

    Args:
        index_set: Множество индексов

    Returns:
        Словарь {кортеж координат: позиции членов в базисном порядке}
    """
    components: Dict[Tuple[int, ...], List[int]] = {}
    for position, m in enumerate(index_set.members):
        components.setdefault(m.coordinates, []).append(position)
    return components


def interaction_profile(index_set: IndexSet) -> Dict[int, int]:
    """Число членов для каждого размера носителя (порядка взаимодействий)."""
    counts = Counter(m.support_size for m in index_set.members)
    return dict(sorted(counts.items()))
