#!/usr/bin/env python3
"""
Командная строка метода конечных разностей Эрмита-HDMR.

Порядок применения настроек: значения по умолчанию, затем файл "ключ = значение"
(--config), затем флаги командной строки.
Коды возврата: 0 - все прогоны успешны, 2 - есть неудачные прогоны, 1 - ошибка конфигурации или ввода-вывода.
"""

import argparse
import os
import re
import sys
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Tuple

from analysis.experiment import ExperimentRunner
from analysis.problems import build_problem, verify_problem
from analysis.report_generator import ReportGenerator
from utils.config_loader import load_config, read_key_value_file, write_key_value_file
from utils.constants import (DEFAULT_RUN_CONFIG, NORMALIZATION_MODES, OUTPUT_FORMATS, PRECONDITIONERS,
                             PROBLEM_KINDS, SOLVERS)
from utils.data_validator import (require_choice, require_in_range, require_integer, require_positive,
                                  require_strictly_increasing)
from utils.error_handler import ConfigurationError, HermiteFDError, UsageError, log_exceptions
from utils.logger import get_logger, setup_logger_from_config

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIGURATION_ERROR = 1
EXIT_FAILED_RUNS = 2

DEFAULT_SETTINGS_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'config.py')

INTEGER_KEYS = ('d', 'N', 'N_b', 'K', 'max_iter', 'repeats', 'seed', 'jobs')
FLOAT_KEYS = ('c', 'beta', 'theta', 'kappa', 'scale', 'ridge', 'tol', 'omega')
OPTIONAL_KEYS = ('problem_file', 'N_b', 'scale', 'max_iter', 'sweep')

# Флаги, имя которых отличается от ключа конфигурации
FLAG_NAMES = {
    'problem_file': '--problem-file',
    'scale': '--lambda',
    'max_iter': '--max-iter',
}


def flag_name(key: str) -> str:
    return FLAG_NAMES.get(key, f'--{key}')


@dataclass(frozen=True)
class RunConfig:
    """Конфигурация запуска."""
    problem: str
    problem_file: Optional[str]
    d: int
    N: int
    N_b: Optional[int]
    K: int
    c: float
    beta: float
    theta: float
    kappa: float
    scale: Optional[float]
    ridge: float
    normalization: str
    solver: str
    tol: float
    max_iter: Optional[int]
    omega: float
    preconditioner: str
    repeats: int
    seed: int
    sweep: Optional[Tuple[int, ...]]
    jobs: int
    output: str
    format: str

    def as_settings(self, N: Optional[int] = None) -> Dict[str, Any]:
        """Словарь параметров серии для ExperimentRunner (N можно заменить значением из sweep)."""
        settings = asdict(self)
        if N is not None:
            settings['N'] = N
        return settings

    def serialize(self) -> Dict[str, Optional[str]]:
        """Строковые значения для файла "ключ = значение"; None не записывается."""
        values = {}
        for key, value in asdict(self).items():
            if value is None:
                values[key] = None
            elif isinstance(value, float):
                values[key] = repr(value)
            elif isinstance(value, tuple):
                values[key] = ','.join(str(item) for item in value)
            else:
                values[key] = str(value)
        return values


class ConfigArgumentParser(argparse.ArgumentParser):
    """Парсер, сообщающий об ошибках исключением UsageError вместо завершения процесса."""

    def error(self, message: str):
        match = re.search(r'argument (\S+?)(?:/\S+)?:', message)
        raise UsageError(message, flag=match.group(1) if match else None)


def _parse_sweep(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(item) for item in text.split(',') if item.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"ожидается список целых через запятую, получено '{text}'")


def build_parser() -> ConfigArgumentParser:
    """Парсер аргументов командной строки."""
    parser = ConfigArgumentParser(description='Метод конечных разностей Эрмита-HDMR для 1/2 Laplace u = phi',
                                  allow_abbrev=False)
    suppress = argparse.SUPPRESS

    problem = parser.add_argument_group('Задача')
    problem.add_argument('--problem', choices=PROBLEM_KINDS, default=suppress, help='Тестовая задача')
    problem.add_argument('--problem-file', dest='problem_file', default=suppress,
                         help='Python-файл с функцией build_problem(d) для задачи custom')
    problem.add_argument('--d', type=int, default=suppress, help='Размерность')
    problem.add_argument('--N', type=int, default=suppress, help='Число внутренних узлов')
    problem.add_argument('--N_b', type=int, default=suppress, help='Число граничных узлов')
    problem.add_argument('--sweep', type=_parse_sweep, default=suppress,
                         help='Список значений N через запятую')

    method = parser.add_argument_group('Метод')
    method.add_argument('--K', type=int, default=suppress, help='Порядок усечения множества индексов')
    method.add_argument('--c', type=float, default=suppress, help='Сдвиг c >= 1 порядкового номера')
    method.add_argument('--beta', type=float, default=suppress, help='Коэффициент сглаживания beta >= 0')
    method.add_argument('--theta', type=float, default=suppress, help='Коэффициент запаса theta > 1')
    method.add_argument('--kappa', type=float, default=suppress, help='Константа радиуса шаблона')
    method.add_argument('--lambda', dest='scale', type=float, default=suppress,
                        help='Фиксированный масштаб lambda (вместо выбора по плотности узлов)')
    method.add_argument('--ridge', type=float, default=suppress, help='Масштаб регуляризации')
    method.add_argument('--normalization', choices=NORMALIZATION_MODES, default=suppress,
                        help='Нормировка функций Эрмита')

    solver = parser.add_argument_group('Решатель')
    solver.add_argument('--solver', choices=SOLVERS, default=suppress, help='Итерационный метод')
    solver.add_argument('--tol', type=float, default=suppress, help='Относительная точность')
    solver.add_argument('--max-iter', dest='max_iter', type=int, default=suppress, help='Максимум итераций')
    solver.add_argument('--omega', type=float, default=suppress, help='Параметр релаксации SOR')
    solver.add_argument('--preconditioner', choices=PRECONDITIONERS, default=suppress,
                        help='Правое предобусловливание BiCGSTAB')
    solver.add_argument('--jacobi', dest='preconditioner', action='store_const', const='jacobi',
                        default=suppress, help='То же, что --preconditioner jacobi')

    run = parser.add_argument_group('Запуск и вывод')
    run.add_argument('--repeats', type=int, default=suppress, help='Число повторов')
    run.add_argument('--seed', type=int, default=suppress, help='Начальное зерно')
    run.add_argument('--jobs', type=int, default=suppress, help='Число параллельных повторов')
    run.add_argument('--output', default=suppress, help='Файл записей')
    run.add_argument('--format', choices=OUTPUT_FORMATS, default=suppress, help='Формат вывода')

    session = parser.add_argument_group('Сеанс')
    session.add_argument('--config', default=None, help='Файл конфигурации "ключ = значение"')
    session.add_argument('--settings', default=None, help='Путь к config.py с настройками проекта')
    session.add_argument('--dump-config', dest='dump_config', default=None,
                         help='Записать итоговую конфигурацию в файл и завершить работу')
    session.add_argument('--dump-matrix', dest='dump_matrix', default=None,
                         help='Записать матрицу первого прогона')
    session.add_argument('--log-level', dest='log_level', default=None, help='Уровень логирования')
    session.add_argument('--log-file', dest='log_file', default=None, help='Файл лога')
    return parser


def _convert_file_value(key: str, text: str) -> Any:
    """Преобразование строкового значения из файла к типу ключа."""
    try:
        if key == 'sweep':
            return _parse_sweep(text)
        if key in INTEGER_KEYS:
            return int(text)
        if key in FLOAT_KEYS:
            return float(text)
    except (ValueError, argparse.ArgumentTypeError) as e:
        raise UsageError(f"Недопустимое значение {key} = '{text}': {str(e)}", flag=flag_name(key)) from e
    return text


def _validate(values: Dict[str, Any]) -> None:
    """Проверка диапазонов; ошибка называет соответствующий флаг."""
    checks = [
        ('problem', lambda v: require_choice('problem', v, PROBLEM_KINDS)),
        ('d', lambda v: require_integer('d', v, minimum=1)),
        ('N', lambda v: require_integer('N', v, minimum=1)),
        ('N_b', lambda v: require_integer('N_b', v, minimum=0)),
        ('K', lambda v: require_integer('K', v, minimum=1)),
        ('c', lambda v: require_in_range('c', v, lower=1.0)),
        ('beta', lambda v: require_positive('beta', v, allow_zero=True)),
        ('theta', lambda v: require_in_range('theta', v, lower=1.0, lower_inclusive=False)),
        ('kappa', lambda v: require_positive('kappa', v)),
        ('scale', lambda v: require_positive('lambda', v)),
        ('ridge', lambda v: require_positive('ridge', v, allow_zero=True)),
        ('normalization', lambda v: require_choice('normalization', v, NORMALIZATION_MODES)),
        ('solver', lambda v: require_choice('solver', v, SOLVERS)),
        ('preconditioner', lambda v: require_choice('preconditioner', v, PRECONDITIONERS)),
        ('tol', lambda v: require_positive('tol', v)),
        ('max_iter', lambda v: require_integer('max_iter', v, minimum=1)),
        ('omega', lambda v: require_in_range('omega', v, lower=0.0, upper=2.0,
                                             lower_inclusive=False, upper_inclusive=False)),
        ('repeats', lambda v: require_integer('repeats', v, minimum=1)),
        ('seed', lambda v: require_integer('seed', v, minimum=0)),
        ('jobs', lambda v: require_integer('jobs', v, minimum=1)),
        ('format', lambda v: require_choice('format', v, OUTPUT_FORMATS)),
    ]
    for key, check in checks:
        if values[key] is None and key in OPTIONAL_KEYS:
            continue
        try:
            check(values[key])
        except ConfigurationError as e:
            raise UsageError(str(e), flag=flag_name(key)) from e

    if values['sweep'] is not None:
        try:
            if not values['sweep']:
                raise ConfigurationError("Список sweep пуст")
            for N in values['sweep']:
                require_integer('sweep', N, minimum=1)
            require_strictly_increasing('sweep', values['sweep'])
        except ConfigurationError as e:
            raise UsageError(str(e), flag='--sweep') from e

    if values['problem'] == 'custom' and not values['problem_file']:
        raise UsageError("Для задачи custom требуется --problem-file", flag='--problem-file')


def project_defaults(project_config: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    """Значения по умолчанию с учетом METHOD_CONFIG, SOLVER_CONFIG и EXPORT_SETTINGS из config.py."""
    project_config = project_config or {}
    method = project_config.get('METHOD_CONFIG', {})
    solver = project_config.get('SOLVER_CONFIG', {})
    export = project_config.get('EXPORT_SETTINGS', {})
    values = dict(DEFAULT_RUN_CONFIG)
    for key in ('kappa', 'theta', 'ridge', 'normalization'):
        values[key] = method.get(key, values[key])
    for key in ('tol', 'omega', 'preconditioner'):
        values[key] = solver.get(key, values[key])
    values['format'] = export.get('default_format', values['format'])
    return values


def config_from_namespace(namespace: argparse.Namespace, config_file: Optional[str] = None,
                          project_config: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Сборка RunConfig: значения по умолчанию, config.py, файл, флаги."""
    values = project_defaults(project_config)

    config_file = config_file or getattr(namespace, 'config', None)
    if config_file:
        for key, text in read_key_value_file(config_file).items():
            if key not in values:
                raise UsageError(f"Неизвестный ключ '{key}' в файле {config_file}", flag=key)
            values[key] = _convert_file_value(key, text)

    for key in DEFAULT_RUN_CONFIG:
        if key in vars(namespace):
            values[key] = getattr(namespace, key)

    _validate(values)
    return RunConfig(**values)


def parse_config(args: List[str], config_file: Optional[str] = None,
                 project_config: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Разбор аргументов командной строки в RunConfig.

    Args:
        args: Аргументы командной строки
        config_file: Файл "ключ = значение" (перекрывается флагами)
        project_config: Настройки проекта из config.py

    Returns:
        Проверенная конфигурация
    """
    return config_from_namespace(build_parser().parse_args(args), config_file, project_config)


@log_exceptions
def execute(config: RunConfig, project_config: Dict[str, Any], matrix_dump: Optional[str] = None) -> int:
    """Выполнение серий по всем N из sweep; возвращает код завершения."""
    problem = build_problem(config.problem, config.d, config.problem_file)
    verify_problem(problem)

    runner = ExperimentRunner(project_config)
    reports = []
    for position, N in enumerate(config.sweep or (config.N,)):
        logger.info(f"Серия {position + 1}: {config.problem}, d={config.d}, N={N}, K={config.K}, "
                    f"beta={config.beta}, повторов {config.repeats}")
        report = runner.run(problem, config.as_settings(N), matrix_dump if position == 0 else None)
        reports.append(report)

    run_id = 0
    for report in reports:
        for record in report.records:
            run_id += 1
            record['run_id'] = run_id

    generator = ReportGenerator(project_config)
    generator.generate_reports(reports, config.output, config.format)
    logger.info('\n' + generator.generate_executive_summary(reports))

    failed = sum(report.failed for report in reports)
    return EXIT_FAILED_RUNS if failed else EXIT_OK


def run(config: RunConfig, project_config: Optional[Dict[str, Any]] = None,
        matrix_dump: Optional[str] = None) -> int:
    """
    Выполнение конфигурации.

    Args:
        config: Конфигурация запуска
        project_config: Настройки проекта из config.py
        matrix_dump: Путь для дампа матрицы первого прогона

    Returns:
        0 - все прогоны успешны, 2 - есть неудачные прогоны, 1 - ошибка конфигурации или ввода-вывода
    """
    try:
        return execute(config, project_config or {}, matrix_dump)
    except HermiteFDError as e:
        logger.error(f"Ошибка конфигурации: {str(e)}")
        return EXIT_CONFIGURATION_ERROR
    except OSError as e:
        logger.error(f"Ошибка ввода-вывода ({getattr(e, 'filename', None) or config.output}): {str(e)}")
        return EXIT_CONFIGURATION_ERROR


def load_project_settings(path: Optional[str]) -> Dict[str, Any]:
    """Настройки проекта; отсутствие config.py по умолчанию не является ошибкой."""
    if path:
        return load_config(path)
    if os.path.isfile(DEFAULT_SETTINGS_PATH):
        return load_config(DEFAULT_SETTINGS_PATH)
    return {}


def main(argv: Optional[List[str]] = None) -> int:
    """Основная функция командной строки."""
    argv = sys.argv[1:] if argv is None else argv
    try:
        namespace = build_parser().parse_args(argv)
        project_config = load_project_settings(namespace.settings)
    except ConfigurationError as e:
        flag = getattr(e, 'flag', None)
        print(f"Ошибка{f' ({flag})' if flag else ''}: {str(e)}", file=sys.stderr)
        return EXIT_CONFIGURATION_ERROR

    logging_config = dict(project_config.get('LOGGING_CONFIG', {}))
    if namespace.log_level:
        logging_config['log_level'] = namespace.log_level
    if namespace.log_file:
        logging_config['log_file'] = namespace.log_file
    setup_logger_from_config(logging_config)

    try:
        config = config_from_namespace(namespace, project_config=project_config)
    except ConfigurationError as e:
        flag = getattr(e, 'flag', None)
        logger.error(f"Ошибка{f' ({flag})' if flag else ''}: {str(e)}")
        return EXIT_CONFIGURATION_ERROR

    if namespace.dump_config:
        try:
            write_key_value_file(config.serialize(), namespace.dump_config,
                                 header="Конфигурация запуска Эрмита-HDMR")
        except OSError as e:
            logger.error(f"Не удалось записать конфигурацию {namespace.dump_config}: {str(e)}")
            return EXIT_CONFIGURATION_ERROR
        logger.info(f"Конфигурация сохранена в {namespace.dump_config}")
        return EXIT_OK

    return run(config, project_config, namespace.dump_matrix)


if __name__ == "__main__":
    sys.exit(main())
