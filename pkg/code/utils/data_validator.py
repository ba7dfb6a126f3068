"""
Модуль для проверки параметров расчета.
"""

import math
from typing import Any, Iterable, Optional, Sequence

from utils.error_handler import ConfigurationError


def require_positive(name: str, value: float, allow_zero: bool = False) -> None:
    """
    Проверка, что значение положительно (или неотрицательно).

    Args:
        name: Имя параметра для сообщения об ошибке
        value: Проверяемое значение
        allow_zero: Допускать ли ноль
    """
    if value is None or not math.isfinite(value):
        raise ConfigurationError(f"Параметр {name} должен быть конечным числом, получено {value}")
    if allow_zero and value < 0:
        raise ConfigurationError(f"Параметр {name} должен быть неотрицательным, получено {value}")
    if not allow_zero and value <= 0:
        raise ConfigurationError(f"Параметр {name} должен быть положительным, получено {value}")


def require_in_range(name: str, value: float,
                     lower: Optional[float] = None, upper: Optional[float] = None,
                     lower_inclusive: bool = True, upper_inclusive: bool = True) -> None:
    """
    Проверка принадлежности значения интервалу.

    Args:
        name: Имя параметра
        value: Проверяемое значение
        lower: Нижняя граница (None - без ограничения)
        upper: Верхняя граница (None - без ограничения)
        lower_inclusive: Включать ли нижнюю границу
        upper_inclusive: Включать ли верхнюю границу
    """
    if value is None or not math.isfinite(value):
        raise ConfigurationError(f"Параметр {name} должен быть конечным числом, получено {value}")

    below = lower is not None and (value < lower if lower_inclusive else value <= lower)
    above = upper is not None and (value > upper if upper_inclusive else value >= upper)
    if below or above:
        left = '[' if lower_inclusive else '('
        right = ']' if upper_inclusive else ')'
        low_text = '-inf' if lower is None else lower
        high_text = 'inf' if upper is None else upper
        raise ConfigurationError(
            f"Параметр {name} должен лежать в {left}{low_text}, {high_text}{right}, получено {value}"
        )


def require_integer(name: str, value: Any, minimum: int = 1) -> None:
    """Проверка, что значение целое и не меньше minimum."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"Параметр {name} должен быть целым числом, получено {value!r}")
    if value < minimum:
        raise ConfigurationError(f"Параметр {name} должен быть не меньше {minimum}, получено {value}")


def require_choice(name: str, value: Any, choices: Iterable[Any]) -> None:
    """Проверка, что значение входит в допустимый набор."""
    choices = tuple(choices)
    if value not in choices:
        raise ConfigurationError(
            f"Параметр {name} должен быть одним из {', '.join(map(str, choices))}, получено {value!r}"
        )


def require_strictly_increasing(name: str, values: Sequence[float]) -> None:
    """Проверка строгого возрастания последовательности."""
    for previous, current in zip(values, values[1:]):
        if current <= previous:
            raise ConfigurationError(
                f"Значения {name} должны строго возрастать: {previous} >= {current}"
            )
