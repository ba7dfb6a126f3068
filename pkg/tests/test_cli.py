import pandas as pd
import pytest

import main
from utils.config_loader import write_key_value_file
from utils.constants import CSV_COLUMNS
from utils.error_handler import UsageError
from utils.file_operations import read_json

SMALL_RUN = ['--problem', 'case1', '--d', '2', '--N', '60', '--K', '4', '--repeats', '2']


def write_settings(tmp_path, body=''):
    """Минимальный config.py без прогресс-баров."""
    path = tmp_path / 'settings.py'
    path.write_text("PERFORMANCE_SETTINGS = {'show_progress': False}\n" + body, encoding='utf-8')
    return str(path)


def run_main(tmp_path, args, settings_body=''):
    session = ['--settings', write_settings(tmp_path, settings_body), '--log-file', str(tmp_path / 'run.log')]
    return main.main(args + session)


class TestParseConfig:
    def test_defaults_are_filled(self):
        config = main.parse_config(['--problem', 'case1', '--d', '5', '--N', '400', '--K', '4'])
        assert (config.problem, config.d, config.N, config.K) == ('case1', 5, 400, 4)
        assert (config.c, config.beta, config.theta, config.kappa) == (1.0, 0.0, 2.0, 2.628)
        assert (config.repeats, config.solver, config.tol, config.format) == (10, 'bicgstab', 1e-10, 'csv')
        assert config.N_b is None and config.sweep is None

    def test_theta_must_exceed_one(self):
        with pytest.raises(UsageError) as excinfo:
            main.parse_config(['--theta', '1.0'])
        assert excinfo.value.flag == '--theta'

    @pytest.mark.parametrize('args, flag', [
        (['--c', '0.5'], '--c'),
        (['--omega', '2.0'], '--omega'),
        (['--tol', '0'], '--tol'),
        (['--lambda', '-1'], '--lambda'),
        (['--d', 'five'], '--d'),
        (['--solver', 'gmres'], '--solver'),
        (['--sweep', '400,200'], '--sweep'),
    ])
    def test_flag_is_named(self, args, flag):
        with pytest.raises(UsageError) as excinfo:
            main.parse_config(args)
        assert excinfo.value.flag == flag

    def test_unknown_flag(self):
        with pytest.raises(UsageError):
            main.parse_config(['--bogus', '1'])

    def test_oversized_basis_is_accepted_at_parse(self):
        config = main.parse_config(['--N', '100', '--K', '40', '--d', '10'])
        assert (config.N, config.K, config.d) == (100, 40, 10)

    def test_custom_problem_requires_file(self):
        with pytest.raises(UsageError) as excinfo:
            main.parse_config(['--problem', 'custom'])
        assert excinfo.value.flag == '--problem-file'

    def test_sweep(self):
        assert main.parse_config(['--sweep', '200,400,800']).sweep == (200, 400, 800)

    def test_file_values_are_overridden_by_flags(self, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text("# серия\nK = 6\nbeta = 1.5\npreconditioner = jacobi\nsweep = 100,200\n", encoding='utf-8')
        config = main.parse_config(['--K', '8'], config_file=str(path))
        assert (config.K, config.beta, config.preconditioner, config.sweep) == (8, 1.5, 'jacobi', (100, 200))

    def test_unknown_file_key(self, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text("gamma = 2\n", encoding='utf-8')
        with pytest.raises(UsageError):
            main.parse_config([], config_file=str(path))

    def test_project_defaults(self):
        config = main.parse_config([], project_config={'METHOD_CONFIG': {'kappa': 3.0},
                                                       'EXPORT_SETTINGS': {'default_format': 'json'}})
        assert (config.kappa, config.format) == (3.0, 'json')

    def test_dump_round_trip(self, tmp_path):
        config = main.parse_config(['--problem', 'case3', '--d', '3', '--sweep', '100,200', '--beta', '0.25',
                                    '--theta', '2.5', '--lambda', '7.125', '--jacobi', '--output', 'out/r.json',
                                    '--format', 'json'])
        path = str(tmp_path / 'dump.cfg')
        write_key_value_file(config.serialize(), path)
        assert main.parse_config([], config_file=path) == config

    def test_dump_config_flag(self, tmp_path):
        path = tmp_path / 'dumped.cfg'
        assert run_main(tmp_path, ['--K', '6', '--dump-config', str(path)]) == main.EXIT_OK
        assert main.parse_config([], config_file=str(path)).K == 6

    def test_hash_inside_value_is_kept(self, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text("output = out#1.csv   # основной прогон\nK = 6 # базис\n", encoding='utf-8')
        config = main.parse_config([], config_file=str(path))
        assert (config.output, config.K) == ('out#1.csv', 6)

    def test_preconditioner_flags(self):
        assert main.parse_config([]).preconditioner == 'ilu'
        assert main.parse_config(['--preconditioner', 'none']).preconditioner == 'none'
        assert main.parse_config(['--jacobi']).preconditioner == 'jacobi'
        with pytest.raises(UsageError):
            main.parse_config(['--preconditioner', 'gauss'])

    @pytest.mark.parametrize('mode', ['orthonormal', 'paper', 'pi_d'])
    def test_normalization_modes(self, mode):
        assert main.parse_config(['--normalization', mode]).normalization == mode


class TestRun:
    def test_csv_output(self, tmp_path):
        output = tmp_path / 'results' / 'records.csv'
        assert run_main(tmp_path, SMALL_RUN + ['--output', str(output)]) == main.EXIT_OK
        with open(output, encoding='utf-8') as f:
            assert f.readline().rstrip('\n') == ','.join(CSV_COLUMNS)
        records = pd.read_csv(output)
        assert len(records) == 2
        assert list(records['status']) == ['ok', 'ok']
        summary = pd.read_csv(tmp_path / 'results' / 'records_summary.csv')
        assert len(summary) == 1
        assert summary.loc[0, 'runs'] == 2

    def test_sweep_counts(self, tmp_path):
        output = tmp_path / 'sweep.csv'
        args = ['--problem', 'case1', '--d', '2', '--sweep', '60,80', '--K', '4', '--repeats', '2']
        assert run_main(tmp_path, args + ['--output', str(output)]) == main.EXIT_OK
        records = pd.read_csv(output)
        assert list(records['run_id']) == [1, 2, 3, 4]
        assert list(records['N']) == [60, 60, 80, 80]
        assert len(pd.read_csv(tmp_path / 'sweep_summary.csv')) == 2

    def test_json_output(self, tmp_path):
        output = tmp_path / 'records.json'
        assert run_main(tmp_path, SMALL_RUN + ['--output', str(output), '--format', 'json']) == main.EXIT_OK
        document = read_json(str(output))
        assert set(document) == {'records', 'summaries'}
        assert len(document['records']) == 2
        assert list(document['records'][0]) == CSV_COLUMNS
        for key in ('min', 'q1', 'median', 'q3', 'max'):
            assert key in document['summaries'][0]

    def test_identical_runs_produce_identical_records(self, tmp_path):
        first, second = tmp_path / 'first.csv', tmp_path / 'second.csv'
        assert run_main(tmp_path, SMALL_RUN + ['--output', str(first)]) == main.EXIT_OK
        assert run_main(tmp_path, SMALL_RUN + ['--output', str(second)]) == main.EXIT_OK
        pd.testing.assert_frame_equal(pd.read_csv(first).drop(columns='wall_ms'),
                                      pd.read_csv(second).drop(columns='wall_ms'))

    def test_matrix_dump(self, tmp_path):
        matrix = tmp_path / 'matrix.txt'
        args = SMALL_RUN + ['--output', str(tmp_path / 'r.csv'), '--dump-matrix', str(matrix)]
        assert run_main(tmp_path, args) == main.EXIT_OK
        with open(matrix, encoding='utf-8') as f:
            assert f.readline().split()[:2] == ['60', '60']

    def test_configuration_error_exit_code(self, tmp_path):
        args = ['--N', '100', '--K', '40', '--d', '10', '--output', str(tmp_path / 'r.csv')]
        assert run_main(tmp_path, args) == main.EXIT_CONFIGURATION_ERROR

    def test_usage_error_exit_code(self, tmp_path):
        assert run_main(tmp_path, ['--theta', '0.5']) == main.EXIT_CONFIGURATION_ERROR

    def test_missing_problem_file(self, tmp_path):
        args = ['--problem', 'custom', '--problem-file', str(tmp_path / 'absent.py'),
                '--output', str(tmp_path / 'r.csv')]
        assert run_main(tmp_path, args) == main.EXIT_CONFIGURATION_ERROR

    def test_failed_runs_exit_code(self, tmp_path):
        output = tmp_path / 'failed.csv'
        args = SMALL_RUN + ['--lambda', '1000', '--output', str(output)]
        code = run_main(tmp_path, args, settings_body="METHOD_CONFIG = {'max_expansions': 0}\n")
        assert code == main.EXIT_FAILED_RUNS
        assert list(pd.read_csv(output)['status']) == ['insufficient_nodes'] * 2
