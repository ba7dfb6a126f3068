"""
Итерационные решатели разреженных систем: BiCGSTAB и SOR.

Оба используют один критерий остановки |r| <= tol |Phi'| и возвращают отчет
SolveReport; отсутствие сходимости не является исключением.
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spilu, spsolve_triangular

from discretization.assembly import SparseSystem
from utils.constants import (BREAKDOWN_THRESHOLD, DEFAULT_OMEGA, DEFAULT_TOLERANCE, ILU_DROP_TOL,
                             ILU_FILL_FACTOR, MAX_RESTARTS, PRECONDITIONERS, SOLVERS)
from utils.data_validator import require_choice, require_in_range, require_integer, require_positive
from utils.error_handler import ZeroDiagonalError
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Результат итерационного решения."""
    solution: np.ndarray
    iterations: int
    final_residual: float
    converged: bool
    method: str
    restarts: int = 0


def _default_max_iter(system: SparseSystem, max_iter: Optional[int]) -> int:
    if max_iter is None:
        return 10 * max(system.size, 1)
    require_integer('max_iter', max_iter, minimum=1)
    return max_iter


def _diagonal(system: SparseSystem) -> np.ndarray:
    diagonal = system.matrix.diagonal()
    zero = np.flatnonzero(diagonal == 0.0)
    if len(zero):
        raise ZeroDiagonalError(f"Нулевой диагональный элемент в строке {zero[0]}")
    return diagonal


def _report(system: SparseSystem, solution: np.ndarray, iterations: int, tol: float,
            method: str, restarts: int = 0) -> SolveReport:
    residual = system.residual(solution)
    converged = residual <= tol
    level = 'info' if converged else 'warning'
    getattr(logger, level)(f"{method}: {iterations} итераций, невязка {residual:.3e}, "
                           f"{'сходимость' if converged else 'нет сходимости'}")
    return SolveReport(solution=solution, iterations=iterations, final_residual=residual,
                       converged=converged, method=method, restarts=restarts)


def build_preconditioner(system: SparseSystem, kind: str = 'none', drop_tol: float = ILU_DROP_TOL,
                         fill_factor: float = ILU_FILL_FACTOR) -> Optional[Callable[[np.ndarray], np.ndarray]]:
    """
    Правое предобусловливание M^{-1} для BiCGSTAB.

    none - без предобусловливания, jacobi - обратная диагональ, ilu - неполное LU-разложение
    SuperLU с порогом отбрасывания drop_tol. Если неполное разложение вырождено,
    BiCGSTAB работает без предобусловливания.

    Args:
        system: Разреженная система
        kind: Вид предобусловливания
        drop_tol: Порог отбрасывания элементов ILU
        fill_factor: Допустимое заполнение ILU относительно nnz(A)

    Returns:
        Функция v -> M^{-1} v или None
    """
    require_choice('preconditioner', kind, PRECONDITIONERS)
    if kind == 'none':
        return None
    if kind == 'jacobi':
        inverse_diagonal = 1.0 / _diagonal(system)
        return lambda vector: inverse_diagonal * vector

    require_positive('drop_tol', drop_tol, allow_zero=True)
    require_positive('fill_factor', fill_factor)
    try:
        factor = spilu(system.matrix.tocsc(), drop_tol=drop_tol, fill_factor=fill_factor)
    except RuntimeError as e:
        logger.warning(f"Неполное LU-разложение не построено ({str(e)}), BiCGSTAB без предобусловливания")
        return None
    logger.debug(f"ILU: nnz(L+U) = {factor.L.nnz + factor.U.nnz}, nnz(A) = {system.nnz}")
    return factor.solve


def bicgstab(system: SparseSystem, tol: float = DEFAULT_TOLERANCE, max_iter: Optional[int] = None,
             preconditioner: str = 'none', max_restarts: int = MAX_RESTARTS,
             breakdown_threshold: float = BREAKDOWN_THRESHOLD, drop_tol: float = ILU_DROP_TOL,
             fill_factor: float = ILU_FILL_FACTOR) -> SolveReport:
    """
    Стабилизированный метод бисопряженных градиентов.

    При вырождении (|rho|, |r_hat^T v| или |omega| меньше breakdown_threshold) и при
    расхождении рекуррентной и истинной невязок метод перезапускается от истинной невязки
    текущего приближения, не более max_restarts раз. Сходимость всегда проверяется по
    истинной невязке |Phi' - A U|.

    Args:
        system: Разреженная система
        tol: Относительная точность
        max_iter: Максимум итераций (по умолчанию 10 N)
        preconditioner: Правое предобусловливание: none, jacobi или ilu
        max_restarts: Максимум перезапусков
        breakdown_threshold: Порог вырождения
        drop_tol: Порог отбрасывания ILU
        fill_factor: Допустимое заполнение ILU

    Returns:
        Отчет о решении
    """
    require_positive('tol', tol)
    require_integer('max_restarts', max_restarts, minimum=0)
    max_iter = _default_max_iter(system, max_iter)
    A, b = system.matrix, system.rhs
    x = np.zeros_like(b)

    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        return SolveReport(solution=x, iterations=0, final_residual=0.0, converged=True, method='bicgstab')

    apply_preconditioner = build_preconditioner(system, preconditioner, drop_tol, fill_factor)

    def precondition(vector: np.ndarray) -> np.ndarray:
        return apply_preconditioner(vector) if apply_preconditioner is not None else vector

    threshold = tol * b_norm
    iterations = 0
    restarts = 0
    r = b.copy()

    while iterations < max_iter:
        r_hat = r.copy()
        rho_old = alpha = omega = 1.0
        p = np.zeros_like(b)
        v = np.zeros_like(b)
        breakdown = False
        recursive_converged = False

        while iterations < max_iter:
            rho = r_hat @ r
            if abs(rho) < breakdown_threshold:
                breakdown = True
                break
            beta = (rho / rho_old) * (alpha / omega)
            p = r + beta * (p - omega * v)
            p_hat = precondition(p)
            v = A @ p_hat
            denominator = r_hat @ v
            if abs(denominator) < breakdown_threshold:
                breakdown = True
                break
            alpha = rho / denominator
            s = r - alpha * v
            x = x + alpha * p_hat
            iterations += 1
            if np.linalg.norm(s) <= threshold:
                r = s
                recursive_converged = True
                break

            s_hat = precondition(s)
            t = A @ s_hat
            t_norm2 = t @ t
            if t_norm2 == 0.0:
                r = s
                breakdown = True
                break
            omega = (t @ s) / t_norm2
            x = x + omega * s_hat
            r = s - omega * t
            if np.linalg.norm(r) <= threshold:
                recursive_converged = True
                break
            if abs(omega) < breakdown_threshold:
                breakdown = True
                break
            rho_old = rho

        true_residual = b - A @ x
        if np.linalg.norm(true_residual) <= threshold:
            break
        if not (breakdown or recursive_converged):
            break
        if restarts >= max_restarts:
            logger.warning(f"bicgstab: исчерпан лимит перезапусков ({max_restarts})")
            break
        restarts += 1
        logger.debug(f"bicgstab: перезапуск {restarts} на итерации {iterations}")
        r = true_residual

    return _report(system, x, iterations, tol, 'bicgstab', restarts)


def sor(system: SparseSystem, omega: float = DEFAULT_OMEGA, tol: float = DEFAULT_TOLERANCE,
        max_iter: Optional[int] = None) -> SolveReport:
    """
    Последовательная верхняя релаксация.

    Каждый проход решает треугольную систему (D/omega + L) x_new = b - U x - (1 - 1/omega) D x.

    Args:
        system: Разреженная система
        omega: Параметр релаксации из (0, 2)
        tol: Относительная точность
        max_iter: Максимум проходов (по умолчанию 10 N)

    Returns:
        Отчет о решении
    """
    require_in_range('omega', omega, lower=0.0, upper=2.0, lower_inclusive=False, upper_inclusive=False)
    require_positive('tol', tol)
    max_iter = _default_max_iter(system, max_iter)
    A, b = system.matrix, system.rhs
    diagonal = _diagonal(system)
    x = np.zeros_like(b)

    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        return SolveReport(solution=x, iterations=0, final_residual=0.0, converged=True, method='sor')

    lower = (sp.tril(A, k=-1) + sp.diags(diagonal / omega)).tocsr()
    upper = sp.triu(A, k=1).tocsr()
    relaxation = (1.0 - 1.0 / omega) * diagonal
    threshold = tol * b_norm

    iterations = 0
    while iterations < max_iter:
        x = spsolve_triangular(lower, b - upper @ x - relaxation * x, lower=True)
        iterations += 1
        if np.linalg.norm(b - A @ x) <= threshold:
            break

    return _report(system, x, iterations, tol, 'sor')



def solve(system: SparseSystem, settings: Dict[str, Any]) -> SolveReport:
    """
    Решение системы выбранным методом.

    Args:
        system: Разреженная система
        settings: Словарь с ключами solver, tol, max_iter, omega, preconditioner
            и необязательными max_restarts, breakdown_threshold, ilu_drop_tol, ilu_fill_factor

    Returns:
        Отчет о решении
    """
    method = settings.get('solver', 'bicgstab')
    require_choice('solver', method, SOLVERS)
    tol = settings.get('tol', DEFAULT_TOLERANCE)
    max_iter = settings.get('max_iter')
    if method == 'sor':
        return sor(system, omega=settings.get('omega', DEFAULT_OMEGA), tol=tol, max_iter=max_iter)
    return bicgstab(system, tol=tol, max_iter=max_iter,
                    preconditioner=settings.get('preconditioner', 'none'),
                    max_restarts=settings.get('max_restarts', MAX_RESTARTS),
                    breakdown_threshold=settings.get('breakdown_threshold', BREAKDOWN_THRESHOLD),
                    drop_tol=settings.get('ilu_drop_tol', ILU_DROP_TOL),
                    fill_factor=settings.get('ilu_fill_factor', ILU_FILL_FACTOR))
