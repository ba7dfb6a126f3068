"""
Константы проекта.
"""

# Параметры метода по умолчанию
DEFAULT_KAPPA = 2.628          # rho = kappa / lambda
DEFAULT_THETA = 2.0            # коэффициент запаса в формуле выбора lambda, > 1
DEFAULT_SHIFT = 1.0            # сдвиг c в порядковом номере k_m
DEFAULT_RIDGE = 1e-10          # масштаб регуляризации локальной системы
RADIUS_EXPANSION_FACTOR = 1.1
MAX_RADIUS_EXPANSIONS = 50
CONDITION_LIMIT = 1e14
REFINEMENT_STEPS = 3          # шаги уточнения решения локальной системы

# Ограничения перечисления индексов
MEMBER_LIMIT = 10 ** 7

# Итерационные решатели
DEFAULT_TOLERANCE = 1e-10
BREAKDOWN_THRESHOLD = 1e-30
MAX_RESTARTS = 3
DEFAULT_OMEGA = 1.0
ILU_DROP_TOL = 1e-4
ILU_FILL_FACTOR = 10.0

# Обусловленность глобальной системы
SYSTEM_CONDITION_LIMIT = 1e10
CONDITION_CHECK_SIZE = 4000    # больше - проверка по плотной матрице пропускается
MAX_NODE_REDRAWS = 5

# Метрика ошибки
AREP_ZERO_THRESHOLD = 1e-12

# Геометрия
BOUNDARY_TOLERANCE = 1e-12
DUPLICATE_TOLERANCE = 1e-12
BOUNDARY_RATIO = 0.3

# Допустимые значения перечислимых параметров
PROBLEM_KINDS = ("case1", "case2", "case3", "custom")
SOLVERS = ("bicgstab", "sor")
OUTPUT_FORMATS = ("csv", "json")
NORMALIZATION_MODES = ("orthonormal", "paper", "pi_d")   # pi_d - синоним paper
PRECONDITIONERS = ("none", "jacobi", "ilu")

# Схема CSV с записями прогонов (порядок столбцов фиксирован)
CSV_COLUMNS = [
    "run_id", "seed", "problem", "d", "N", "N_b", "K", "c", "beta", "theta",
    "lambda", "M", "arep_percent", "solver", "iterations", "residual", "status", "wall_ms",
]

SUMMARY_COLUMNS = [
    "problem", "d", "N", "N_b", "K", "c", "beta", "theta", "solver",
    "runs", "failed", "min", "q1", "median", "q3", "max",
]

# Статусы прогонов
STATUS_OK = "ok"
STATUS_NOT_CONVERGED = "not_converged"
STATUS_INSUFFICIENT_NODES = "insufficient_nodes"
STATUS_SINGULAR_STENCIL = "singular_stencil"
STATUS_METRIC_FAILURE = "metric_failure"
STATUS_ILL_CONDITIONED = "ill_conditioned"
STATUS_ZERO_DIAGONAL = "zero_diagonal"
STATUS_FAILED = "failed"

# Стандартная конфигурация запуска
DEFAULT_RUN_CONFIG = {
    "problem": "case1",
    "problem_file": None,
    "d": 5,
    "N": 400,
    "N_b": None,
    "K": 4,
    "c": DEFAULT_SHIFT,
    "beta": 0.0,
    "theta": DEFAULT_THETA,
    "kappa": DEFAULT_KAPPA,
    "scale": None,
    "ridge": DEFAULT_RIDGE,
    "normalization": "orthonormal",
    "solver": "bicgstab",
    "tol": DEFAULT_TOLERANCE,
    "max_iter": None,
    "omega": DEFAULT_OMEGA,
    "preconditioner": "ilu",
    "repeats": 10,
    "seed": 0,
    "sweep": None,
    "jobs": 1,
    "output": "results/records.csv",
    "format": "csv",
}
