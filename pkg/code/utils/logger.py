"""
Модуль для настройки логирования.
"""

import logging
import os
from logging.handlers import RotatingFileHandler
from typing import Any, Dict, Optional

DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logger(name: Optional[str] = None,
                 log_level: int = logging.INFO,
                 log_file: Optional[str] = None,
                 log_format: str = DEFAULT_FORMAT,
                 max_bytes: int = 10485760,
                 backup_count: int = 5) -> logging.Logger:
    """
    Настройка логгера.

    Args:
        name: Имя логгера (None - корневой логгер)
        log_level: Уровень логирования
        log_file: Путь к файлу для записи логов (опционально)
        log_format: Формат сообщений
        max_bytes: Максимальный размер файла лога до ротации
        backup_count: Количество архивных файлов лога

    Returns:
        Настроенный логгер
    """
    logger = logging.getLogger(name)
    logger.setLevel(log_level)

    # Повторная настройка не должна дублировать обработчики
    for handler in list(logger.handlers):
        if getattr(handler, '_hhfd_handler', False):
            logger.removeHandler(handler)
            handler.close()

    formatter = logging.Formatter(log_format)

    # Обработчик для консоли
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    console_handler._hhfd_handler = True
    logger.addHandler(console_handler)

    # Обработчик для файла (если указан)
    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)

        file_handler = RotatingFileHandler(log_file, maxBytes=max_bytes,
                                           backupCount=backup_count, encoding='utf-8')
        file_handler.setFormatter(formatter)
        file_handler._hhfd_handler = True
        logger.addHandler(file_handler)

    return logger


def setup_logger_from_config(logging_config: Dict[str, Any],
                             name: Optional[str] = None) -> logging.Logger:
    """
    Настройка логгера по словарю LOGGING_CONFIG из config.py.

    Args:
        logging_config: Словарь с ключами log_level, log_file, log_format,
            max_log_size, backup_count
        name: Имя логгера

    Returns:
        Настроенный логгер
    """
    level = logging_config.get('log_level', 'INFO')
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    return setup_logger(
        name=name,
        log_level=level,
        log_file=logging_config.get('log_file'),
        log_format=logging_config.get('log_format', DEFAULT_FORMAT),
        max_bytes=logging_config.get('max_log_size', 10485760),
        backup_count=logging_config.get('backup_count', 5),
    )


def get_logger(name: str = __name__) -> logging.Logger:
    """
    Получение логгера с указанным именем.

    Args:
        name: Имя логгера

    Returns:
        Логгер
    """
    return logging.getLogger(name)
