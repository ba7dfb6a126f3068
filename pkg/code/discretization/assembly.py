"""
Сборка глобальной разреженной системы A U = Phi' из шаблонов.

Граничные узлы исключаются: их вклад с известными значениями v переносится в правую часть,
неизвестными остаются только значения во внутренних узлах.
"""

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from discretization.stencil import Stencil
from geometry.sampling import NodeSet
from utils.constants import CONDITION_CHECK_SIZE, SYSTEM_CONDITION_LIMIT
from utils.error_handler import ConfigurationError, IllConditionedSystemError
from utils.file_operations import ensure_parent_dir
from utils.logger import get_logger

logger = get_logger(__name__)

PointFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class SparseSystem:
    """Матрица N x N в формате CSR и правая часть длины N (порядок внутренних узлов)."""
    matrix: sp.csr_matrix
    rhs: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def residual(self, solution: np.ndarray) -> float:
        """Относительная невязка |A U - Phi'| / |Phi'| (абсолютная при нулевой правой части)."""
        norm_rhs = np.linalg.norm(self.rhs)
        norm_residual = np.linalg.norm(self.rhs - self.matrix @ solution)
        return float(norm_residual / norm_rhs) if norm_rhs > 0 else float(norm_residual)


def assemble(stencils: Sequence[Stencil], nodes: NodeSet,
             source: PointFunction, boundary_values: PointFunction) -> SparseSystem:
    """
    Сборка системы с исключением граничных узлов.

    Строка i содержит веса внутренних соседей шаблона i;
    rhs[i] = phi(chi_i) - sum_b w_ib v(chi'_b).

    Args:
        stencils: Шаблоны, по одному на внутренний узел, в порядке reference_index
        nodes: Набор узлов
        source: Правая часть phi, вычисляемая по строкам массива точек
        boundary_values: Граничные значения v

    Returns:
        Разреженная система
    """
    n = nodes.n_interior
    if len(stencils) != n:
        raise ConfigurationError(f"Ожидается {n} шаблонов, получено {len(stencils)}")

    rhs = np.asarray(source(nodes.interior), dtype=float).copy()
    boundary = (np.asarray(boundary_values(nodes.boundary), dtype=float)
                if nodes.n_boundary else np.empty(0))

    rows, columns, values = [], [], []
    for row, stencil in enumerate(stencils):
        if stencil.reference_index != row:
            raise ConfigurationError(
                f"Шаблон на позиции {row} относится к узлу {stencil.reference_index}"
            )
        inner = stencil.neighbor_indices < n
        rows.append(np.full(int(inner.sum()), row))
        columns.append(stencil.neighbor_indices[inner])
        values.append(stencil.weights[inner])
        if not inner.all():
            outer = stencil.neighbor_indices[~inner] - n
            rhs[row] -= stencil.weights[~inner] @ boundary[outer]

    matrix = sp.coo_matrix(
        (np.concatenate(values), (np.concatenate(rows), np.concatenate(columns))), shape=(n, n)
    ).tocsr()
    matrix.sum_duplicates()
    matrix.eliminate_zeros()
    matrix.sort_indices()

    logger.debug(f"Собрана система {n}x{n}, ненулевых элементов {matrix.nnz} "
                 f"(в среднем {matrix.nnz / max(n, 1):.1f} на строку)")
    return SparseSystem(matrix=matrix, rhs=rhs)


def condition_number(system: SparseSystem) -> float:
    """Число обусловленности sigma_max / sigma_min по сингулярным числам плотной матрицы."""
    if system.size == 0:
        return 1.0
    singular_values = la.svdvals(system.matrix.toarray())
    smallest = singular_values[-1]
    if smallest == 0.0:
        return math.inf
    return float(singular_values[0] / smallest)


def check_conditioning(system: SparseSystem, limit: float = SYSTEM_CONDITION_LIMIT,
                       max_size: int = CONDITION_CHECK_SIZE) -> float:
    """
    Проверка обусловленности собранной системы.

    Случайный набор узлов может дать почти вырожденную матрицу A; тогда решение
    не определяется системой, даже если каждый шаблон точен.

    Args:
        system: Собранная система
        limit: Допустимое число обусловленности
        max_size: Наибольший размер системы, для которого выполняется проверка

    Returns:
        Число обусловленности (nan, если проверка пропущена)

    Raises:
        IllConditionedSystemError: Число обусловленности больше limit
    """
    if system.size > max_size:
        logger.debug(f"Проверка обусловленности пропущена: N = {system.size} > {max_size}")
        return math.nan
    condition = condition_number(system)
    if not condition <= limit:
        raise IllConditionedSystemError(
            f"Система {system.size}x{system.size} вырождена: число обусловленности {condition:.3e} > {limit:.1e}",
            condition=condition,
        )
    logger.debug(f"Число обусловленности системы {condition:.3e}")
    return condition


def dump_matrix(system: SparseSystem, file_path: str, precision: int = 17) -> None:
    """
    Текстовый дамп матрицы: строка "rows cols nnz", затем тройки "i j value".

    Args:
        system: Система
        file_path: Путь к файлу
        precision: Число значащих цифр
    """
    ensure_parent_dir(file_path)
    coo = system.matrix.tocoo()
    rows, cols = system.matrix.shape
    triplets = np.column_stack([coo.row, coo.col, coo.data])
    np.savetxt(file_path, triplets, fmt=['%d', '%d', f'%.{precision}g'],
               header=f"{rows} {cols} {coo.nnz}", comments='')
    logger.info(f"Матрица системы сохранена в {file_path}")


def load_matrix_dump(file_path: str) -> sp.csr_matrix:
    """Чтение дампа, записанного dump_matrix."""
    with open(file_path, 'r', encoding='utf-8') as f:
        rows, cols, nnz = (int(token) for token in f.readline().split())
    triplets = np.loadtxt(file_path, skiprows=1, ndmin=2)
    if triplets.shape[0] != nnz:
        raise ConfigurationError(f"{file_path}: заявлено {nnz} элементов, прочитано {triplets.shape[0]}")
    if nnz == 0:
        return sp.csr_matrix((rows, cols))
    return sp.csr_matrix((triplets[:, 2], (triplets[:, 0].astype(int), triplets[:, 1].astype(int))),
                         shape=(rows, cols))
