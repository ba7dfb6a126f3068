# Конфигурация расчетов методом конечных разностей Эрмита-HDMR

# Параметры метода
METHOD_CONFIG = {
    'kappa': 2.628,              # радиус шаблона rho = kappa / lambda
    'theta': 2.0,                # коэффициент запаса при выборе lambda, > 1
    'ridge': 1e-10,              # регуляризация локальной системы (доля tr(G)/M)
    'expansion_factor': 1.1,     # множитель радиуса при нехватке соседей
    'max_expansions': 50,
    'condition_limit': 1e14,     # порог вырожденности локальной системы
    'refinement_steps': 3,
    'normalization': 'orthonormal',
}

# Итерационные решатели
SOLVER_CONFIG = {
    'tol': 1e-10,
    'omega': 1.0,
    'max_restarts': 3,
    'breakdown_threshold': 1e-30,
    'preconditioner': 'ilu',     # none, jacobi или ilu
    'ilu_drop_tol': 1e-4,
    'ilu_fill_factor': 10.0,
    'condition_limit': 1e10,     # порог вырожденности глобальной системы
    'condition_check_size': 4000,
}

# Генерация узлов
SAMPLING_CONFIG = {
    'boundary_ratio': 0.3,       # N_b = max(2d, ceil(0.3 N))
    'max_redraws': 5,            # замены набора узлов с вырожденной системой
}

# Настройки логирования
LOGGING_CONFIG = {
    'log_level': 'INFO',
    'log_file': 'logs/hhfd.log',
    'log_format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    'max_log_size': 10485760,  # 10 MB
    'backup_count': 5
}

# Настройки производительности
PERFORMANCE_SETTINGS = {
    'stencil_jobs': 1,           # процессы joblib при построении шаблонов
    'neighbor_algorithm': 'brute',
    'show_progress': True,
}

# Настройки экспорта
EXPORT_SETTINGS = {
    'default_format': 'csv',
    'encoding': 'utf-8',
    'matrix_precision': 17,
}

# Серии для run_all_cases.py (настольный масштаб)
BENCHMARK_CASES = [
    {'name': 'case1_exact', 'problem': 'case1', 'd': 5, 'N': 400, 'N_b': 120, 'K': 4, 'beta': 0.0},
    {'name': 'case1_exact_smoothed', 'problem': 'case1', 'd': 5, 'N': 400, 'N_b': 120, 'K': 4, 'beta': 1.0},
    {'name': 'case2_d5', 'problem': 'case2', 'd': 5, 'N': 800, 'K': 6, 'beta': 1.0},
    {'name': 'case3_convergence', 'problem': 'case3', 'd': 2, 'sweep': '200,400,800,1600', 'K': 6, 'beta': 0.0},
    {'name': 'case3_smoothing_off', 'problem': 'case3', 'd': 3, 'N': 800, 'K': 6, 'beta': 0.0},
    {'name': 'case3_smoothing_on', 'problem': 'case3', 'd': 3, 'N': 800, 'K': 6, 'beta': 1.0},
    {'name': 'case1_high_dimension', 'problem': 'case1', 'd': 20, 'N': 3000, 'K': 4, 'repeats': 1},
]
