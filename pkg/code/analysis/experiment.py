"""
Серия повторных расчетов на случайных наборах узлов.

Каждый повтор r использует зерно base_seed + r: генерация узлов, шаблоны, сборка,
решение и вычисление AREP. Неудачные прогоны записываются со своим статусом и не
участвуют в квартилях.
"""

import math
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from joblib import Parallel, delayed
from tqdm import tqdm

from analysis.metrics import arep_details, five_number_summary
from analysis.problems import DirichletProblem
from basis.hermite import BasisSpec
from basis.index_sets import enumerate_index_set
from discretization.assembly import assemble, check_conditioning, dump_matrix
from discretization.stencil import MethodParams, StencilBuilder, select_lambda
from geometry.sampling import default_boundary_count, generate_node_set
from solvers.iterative import solve
from utils.constants import (BOUNDARY_RATIO, CONDITION_CHECK_SIZE, DEFAULT_RUN_CONFIG, MAX_NODE_REDRAWS,
                             STATUS_FAILED, STATUS_ILL_CONDITIONED, STATUS_INSUFFICIENT_NODES,
                             STATUS_METRIC_FAILURE, STATUS_NOT_CONVERGED, STATUS_OK,
                             STATUS_SINGULAR_STENCIL, STATUS_ZERO_DIAGONAL, SYSTEM_CONDITION_LIMIT)
from utils.data_validator import require_integer
from utils.error_handler import (ConfigurationError, ErrorMetricError, HermiteFDError,
                                 IllConditionedSystemError, InsufficientNodesError, SingularStencilError,
                                 ZeroDiagonalError)
from utils.logger import get_logger

logger = get_logger(__name__)

SUMMARY_KEYS = ('problem', 'd', 'N', 'N_b', 'K', 'c', 'beta', 'theta', 'solver')

SOLVER_KEYS = ('solver', 'tol', 'max_iter', 'omega', 'preconditioner')

# Статус неудачного прогона по типу исключения (первое совпадение)
FAILURE_STATUSES = (
    (InsufficientNodesError, STATUS_INSUFFICIENT_NODES),
    (SingularStencilError, STATUS_SINGULAR_STENCIL),
    (IllConditionedSystemError, STATUS_ILL_CONDITIONED),
    (ZeroDiagonalError, STATUS_ZERO_DIAGONAL),
    (ErrorMetricError, STATUS_METRIC_FAILURE),
)


def failure_status(error: HermiteFDError) -> str:
    """Статус записи для исключения, прервавшего прогон."""
    for error_type, status in FAILURE_STATUSES:
        if isinstance(error, error_type):
            return status
    return STATUS_FAILED


@dataclass
class ExperimentReport:
    """Записи прогонов и пятичисловая сводка AREP по успешным прогонам."""
    records: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> int:
        return sum(1 for record in self.records if record['status'] != STATUS_OK)


def summarize(records: List[Dict[str, Any]]) -> Dict[str, Any]:
    """Сводка по конфигурации: число прогонов, неудачи, min/q1/median/q3/max AREP успешных."""
    if not records:
        raise ConfigurationError("Нет записей для сводки")
    summary = {key: records[0][key] for key in SUMMARY_KEYS}
    successful = [record['arep_percent'] for record in records if record['status'] == STATUS_OK]
    summary['runs'] = len(records)
    summary['failed'] = len(records) - len(successful)
    summary.update(five_number_summary(successful))
    return summary


class ExperimentRunner:
    """Запуск серии повторов для одной конфигурации метода."""

    def __init__(self, config: Dict[str, Any]):
        """
        Args:
            config: Настройки проекта (словарь из config.py); используются
                PERFORMANCE_SETTINGS, METHOD_CONFIG, SOLVER_CONFIG и SAMPLING_CONFIG
        """
        self.config = config
        performance = config.get('PERFORMANCE_SETTINGS', {})
        sampling = config.get('SAMPLING_CONFIG', {})
        self.method_config = config.get('METHOD_CONFIG', {})
        self.solver_config = config.get('SOLVER_CONFIG', {})
        self.boundary_ratio = sampling.get('boundary_ratio', BOUNDARY_RATIO)
        self.max_redraws = sampling.get('max_redraws', MAX_NODE_REDRAWS)
        require_integer('max_redraws', self.max_redraws, minimum=0)
        self.condition_limit = self.solver_config.get('condition_limit', SYSTEM_CONDITION_LIMIT)
        self.condition_check_size = self.solver_config.get('condition_check_size', CONDITION_CHECK_SIZE)
        self.matrix_precision = config.get('EXPORT_SETTINGS', {}).get('matrix_precision', 17)
        self.show_progress = performance.get('show_progress', False)
        self.stencil_builder = StencilBuilder({
            'n_jobs': performance.get('stencil_jobs', 1),
            'show_progress': self.show_progress,
            'neighbor_algorithm': performance.get('neighbor_algorithm', 'brute'),
        })

    def prepare(self, problem: DirichletProblem, settings: Dict[str, Any]):
        """
        Множество индексов, lambda, базис и параметры метода (общие для всех повторов).

        Returns:
            Кортеж (IndexSet, BasisSpec, MethodParams)
        """
        d, N, K = settings['d'], settings['N'], settings['K']
        if problem.dimension != d:
            raise ConfigurationError(f"Размерность задачи {problem.dimension} не совпадает с d={d}")
        if problem.exact is None:
            raise ConfigurationError(f"Задача {problem.name} не имеет точного решения, AREP не определена")

        index_set = enumerate_index_set(d, settings['c'], K)
        M = len(index_set)
        if M == 0:
            raise ConfigurationError(f"Множество индексов Gamma^{K}(d={d}, c={settings['c']}) пусто")
        if N < M:
            raise ConfigurationError(f"Число внутренних узлов N={N} меньше числа базисных функций M={M}")

        scale = settings.get('scale')
        if scale is None:
            scale = select_lambda(settings['theta'], settings['kappa'], M, N, problem.domain.measure(), d)

        spec = BasisSpec(index_set, scale, settings['beta'], settings['normalization'])
        params = MethodParams(
            scale=scale,
            kappa=settings['kappa'],
            theta=settings['theta'],
            ridge=settings['ridge'],
            min_neighbors=M,
            expansion_factor=self.method_config.get('expansion_factor', MethodParams.expansion_factor),
            max_expansions=self.method_config.get('max_expansions', MethodParams.max_expansions),
            condition_limit=self.method_config.get('condition_limit', MethodParams.condition_limit),
            refinement_steps=self.method_config.get('refinement_steps', MethodParams.refinement_steps),
        )
        logger.info(f"{problem.name}: d={d}, N={N}, K={K}, M={M}, lambda={scale:.6g}, rho={params.radius:.6g}")
        return index_set, spec, params

    def run(self, problem: DirichletProblem, settings: Dict[str, Any],
            matrix_dump: Optional[str] = None) -> ExperimentReport:
        """
        Серия повторов.

        Args:
            problem: Задача с точным решением
            settings: Параметры запуска (ключи DEFAULT_RUN_CONFIG)
            matrix_dump: Путь для дампа матрицы первого прогона

        Returns:
            Отчет с записями в порядке зерен и сводкой
        """
        settings = {**DEFAULT_RUN_CONFIG, **settings}
        index_set, spec, params = self.prepare(problem, settings)
        N_b = settings['N_b']
        if N_b is None:
            N_b = default_boundary_count(settings['d'], settings['N'], self.boundary_ratio)
        settings = {**settings, 'N_b': N_b}

        repeats = range(settings['repeats'])
        if self.show_progress:
            repeats = tqdm(repeats, desc=f"{problem.name} N={settings['N']}", leave=False)

        def run_single(repeat: int) -> Dict[str, Any]:
            dump_path = matrix_dump if repeat == 0 else None
            return self._run_single(problem, settings, spec, params, repeat, dump_path)

        jobs = settings.get('jobs', 1)
        if jobs == 1:
            records = [run_single(repeat) for repeat in repeats]
        else:
            records = Parallel(n_jobs=jobs, prefer='threads')(delayed(run_single)(repeat) for repeat in repeats)

        report = ExperimentReport(records=records, summary=summarize(records))
        if report.failed:
            logger.warning(f"{problem.name}: {report.failed} из {len(records)} прогонов завершились неудачно")
        logger.info(f"{problem.name}, N={settings['N']}: медиана AREP {report.summary['median']:.4g} %")
        return report

    def _run_single(self, problem: DirichletProblem, settings: Dict[str, Any], spec: BasisSpec,
                    params: MethodParams, repeat: int, matrix_dump: Optional[str]) -> Dict[str, Any]:
        """Один прогон с зерном base_seed + repeat."""
        seed = settings['seed'] + repeat
        start = time.perf_counter()
        record = {
            'run_id': repeat,
            'seed': seed,
            'problem': problem.name,
            'd': settings['d'],
            'N': settings['N'],
            'N_b': settings['N_b'],
            'K': settings['K'],
            'c': settings['c'],
            'beta': settings['beta'],
            'theta': settings['theta'],
            'lambda': spec.scale,
            'M': spec.size,
            'arep_percent': math.nan,
            'solver': settings['solver'],
            'iterations': 0,
            'residual': math.nan,
            'status': STATUS_OK,
            'wall_ms': 0.0,
            'excluded_nodes': 0,
            'redraws': 0,
            'condition': math.nan,
            'message': '',
        }

        try:
            nodes, system = self._build_system(problem, settings, spec, params, seed, record)
            if matrix_dump:
                dump_matrix(system, matrix_dump, self.matrix_precision)

            solver_settings = {**self.solver_config, **{key: settings[key] for key in SOLVER_KEYS}}
            report = solve(system, solver_settings)
            record['iterations'] = report.iterations
            record['residual'] = report.final_residual
            if not report.converged:
                record['status'] = STATUS_NOT_CONVERGED

            value, _, excluded = arep_details(report.solution, problem.exact(nodes.interior))
            record['arep_percent'] = value
            record['excluded_nodes'] = excluded
        except ConfigurationError:
            raise
        except HermiteFDError as e:
            record['status'] = failure_status(e)
            record['message'] = str(e)
            logger.warning(f"Прогон seed={seed}: {type(e).__name__}: {str(e)}")

        record['wall_ms'] = (time.perf_counter() - start) * 1000.0
        logger.info(f"Прогон seed={seed}: AREP {record['arep_percent']:.4g} %, статус {record['status']}")
        return record

    def _build_system(self, problem: DirichletProblem, settings: Dict[str, Any], spec: BasisSpec,
                      params: MethodParams, seed: int, record: Dict[str, Any]):
        """
        Узлы, шаблоны и глобальная система.

        Набор узлов с почти вырожденной системой заменяется новым из потока (seed, попытка),
        не более max_redraws раз; число замен и число обусловленности попадают в запись.

        Returns:
            Кортеж (NodeSet, SparseSystem)
        """
        for attempt in range(self.max_redraws + 1):
            node_seed = seed if attempt == 0 else (seed, attempt)
            nodes = generate_node_set(problem.domain, settings['N'], settings['N_b'], node_seed)
            stencils = self.stencil_builder.build_all(nodes, spec, params)
            system = assemble(stencils, nodes, problem.source, problem.boundary)
            try:
                record['condition'] = check_conditioning(system, self.condition_limit, self.condition_check_size)
            except IllConditionedSystemError as e:
                record['condition'] = e.condition
                if attempt == self.max_redraws:
                    raise
                logger.warning(f"Прогон seed={seed}: {str(e)}; набор узлов сгенерирован заново "
                               f"(попытка {attempt + 1} из {self.max_redraws})")
                continue
            record['redraws'] = attempt
            return nodes, system
        raise IllConditionedSystemError(f"Прогон seed={seed}: не удалось получить невырожденную систему")


def run_experiment(problem: DirichletProblem, settings: Dict[str, Any],
                   config: Optional[Dict[str, Any]] = None,
                   matrix_dump: Optional[str] = None) -> ExperimentReport:
    """
    Серия повторов с настройками проекта по умолчанию.

    Args:
        problem: Задача
        settings: Параметры запуска (d, N, N_b, K, c, beta, theta, kappa, параметры решателя,
            repeats, seed)
        config: Настройки проекта (словарь из config.py)
        matrix_dump: Путь для дампа матрицы первого прогона

    Returns:
        Отчет о серии
    """
    return ExperimentRunner(config or {}).run(problem, settings, matrix_dump)
