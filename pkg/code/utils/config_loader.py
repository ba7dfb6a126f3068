"""
Модуль для загрузки и сохранения конфигурации.
"""

import importlib.util
import os
import re
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from utils.error_handler import ConfigurationError

# Комментарий в строке начинается с # после пробела
INLINE_COMMENT = re.compile(r"\s+#")


def load_config(config_path: str) -> Dict[str, Any]:
    """
    Загрузка конфигурации из Python-файла.

    Переменные окружения HHFD_LOG_LEVEL и HHFD_LOG_FILE (в том числе из файла .env)
    переопределяют настройки логирования.

    Args:
        config_path: Путь к файлу конфигурации

    Returns:
        Словарь с конфигурацией
    """
    if not os.path.isfile(config_path):
        raise ConfigurationError(f"Файл конфигурации не найден: {config_path}")

    try:
        spec = importlib.util.spec_from_file_location("hhfd_settings", config_path)
        config_module = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(config_module)
    except Exception as e:
        raise ConfigurationError(f"Ошибка при загрузке конфигурации {config_path}: {str(e)}") from e

    # Преобразуем модуль в словарь
    config_dict = {}
    for key in dir(config_module):
        if not key.startswith('_'):
            config_dict[key] = getattr(config_module, key)

    load_dotenv()
    logging_config = dict(config_dict.get('LOGGING_CONFIG', {}))
    if os.getenv('HHFD_LOG_LEVEL'):
        logging_config['log_level'] = os.getenv('HHFD_LOG_LEVEL')
    if os.getenv('HHFD_LOG_FILE'):
        logging_config['log_file'] = os.getenv('HHFD_LOG_FILE')
    config_dict['LOGGING_CONFIG'] = logging_config

    return config_dict


def read_key_value_file(file_path: str) -> Dict[str, str]:
    """
    Чтение плоского файла конфигурации вида "ключ = значение".

    Пустые строки и строки, начинающиеся с '#', пропускаются; '#' после пробела
    начинает комментарий до конца строки, '#' внутри значения сохраняется.

    Args:
        file_path: Путь к файлу

    Returns:
        Словарь строковых значений в порядке следования ключей
    """
    values = {}
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            lines = f.readlines()
    except OSError as e:
        raise ConfigurationError(f"Не удалось прочитать файл конфигурации {file_path}: {str(e)}") from e

    for line_number, raw_line in enumerate(lines, 1):
        line = raw_line.strip()
        if not line or line.startswith('#'):
            continue
        line = INLINE_COMMENT.split(line, maxsplit=1)[0]
        if '=' not in line:
            raise ConfigurationError(
                f"{file_path}:{line_number}: ожидается строка вида 'ключ = значение', получено '{raw_line.strip()}'"
            )
        key, value = line.split('=', 1)
        key = key.strip()
        if not key:
            raise ConfigurationError(f"{file_path}:{line_number}: пустой ключ")
        if key in values:
            raise ConfigurationError(f"{file_path}:{line_number}: ключ '{key}' задан повторно")
        values[key] = value.strip()

    return values


def write_key_value_file(values: Dict[str, Optional[str]], file_path: str,
                         header: Optional[str] = None) -> None:
    """
    Запись словаря в плоский файл "ключ = значение".

    Ключи со значением None не записываются.

    Args:
        values: Словарь строковых значений
        file_path: Путь для сохранения файла
        header: Комментарий в начале файла
    """
    lines = []
    if header:
        lines.extend(f"# {header_line}" for header_line in header.splitlines())
    for key, value in values.items():
        if value is None:
            continue
        lines.append(f"{key} = {value}")

    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(file_path, 'w', encoding='utf-8') as f:
        f.write('\n'.join(lines) + '\n')
