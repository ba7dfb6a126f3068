"""
Исключения проекта и обработка ошибок.
"""

import logging
from functools import wraps
from typing import Any, Callable

logger = logging.getLogger(__name__)


class HermiteFDError(Exception):
    """Базовое исключение метода конечных разностей Эрмита-HDMR."""


class ConfigurationError(HermiteFDError):
    """Недопустимая конфигурация расчета."""


class UsageError(ConfigurationError):
    """Ошибка использования командной строки."""

    def __init__(self, message: str, flag: str = None):
        super().__init__(message)
        self.flag = flag


class IndexCapacityError(HermiteFDError):
    """Множество индексов превышает допустимый размер."""


class StencilError(HermiteFDError):
    """Не удалось построить шаблон в опорном узле."""

    def __init__(self, message: str, reference_index: int = None):
        super().__init__(message)
        self.reference_index = reference_index


class InsufficientNodesError(StencilError):
    """В окрестности опорного узла меньше M узлов даже после расширений радиуса."""


class SingularStencilError(StencilError):
    """Локальная система вырождена после регуляризации."""


class SolverError(HermiteFDError):
    """Ошибка итерационного решателя."""


class ZeroDiagonalError(SolverError):
    """Нулевой диагональный элемент матрицы."""


class IllConditionedSystemError(SolverError):
    """Глобальная система численно вырождена для данного набора узлов."""

    def __init__(self, message: str, condition: float = None):
        super().__init__(message)
        self.condition = condition


class ErrorMetricError(HermiteFDError):
    """Метрику ошибки невозможно вычислить."""


class ProblemDefinitionError(HermiteFDError):
    """Некорректное определение краевой задачи."""


def log_exceptions(func: Callable) -> Callable:
    """
    Декоратор для логирования исключений.

    Args:
        func: Функция для обертывания

    Returns:
        Обернутая функция
    """
    @wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        try:
            return func(*args, **kwargs)
        except Exception as e:
            logger.error(f"Исключение в {func.__name__}: {str(e)}")
            raise
    return wrapper
