"""
Пакет вспомогательных утилит: логирование, конфигурация, исключения, файлы.
"""

from .logger import setup_logger, setup_logger_from_config, get_logger
from .config_loader import load_config, read_key_value_file, write_key_value_file
from .file_operations import read_json, write_json, read_dataframe, write_dataframe
from .data_validator import (require_positive, require_in_range, require_integer,
                             require_choice, require_strictly_increasing)
from .error_handler import (HermiteFDError, ConfigurationError, UsageError, IndexCapacityError,
                            StencilError, InsufficientNodesError, SingularStencilError,
                            SolverError, ZeroDiagonalError, IllConditionedSystemError, ErrorMetricError,
                            ProblemDefinitionError, log_exceptions)

__all__ = [
    'setup_logger',
    'setup_logger_from_config',
    'get_logger',
    'load_config',
    'read_key_value_file',
    'write_key_value_file',
    'read_json',
    'write_json',
    'read_dataframe',
    'write_dataframe',
    'require_positive',
    'require_in_range',
    'require_integer',
    'require_choice',
    'require_strictly_increasing',
    'HermiteFDError',
    'ConfigurationError',
    'UsageError',
    'IndexCapacityError',
    'StencilError',
    'InsufficientNodesError',
    'SingularStencilError',
    'SolverError',
    'ZeroDiagonalError',
    'IllConditionedSystemError',
    'ErrorMetricError',
    'ProblemDefinitionError',
    'log_exceptions',
]
