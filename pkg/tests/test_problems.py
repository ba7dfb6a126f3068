import math
import textwrap

import numpy as np
import pytest

from analysis.metrics import arep, arep_details, five_number_summary
from analysis.problems import (DirichletProblem, build_problem, case1, case2, case3, finite_difference_laplacian,
                               load_custom_problem, verify_problem)
from geometry.domains import Domain
from utils.error_handler import ErrorMetricError, ProblemDefinitionError


class TestCases:
    def test_case1_values(self):
        problem = case1(30)
        assert problem.domain.kind == 'ball'
        assert problem.exact(np.zeros((1, 30)))[0] == pytest.approx(1.0 / 30.0)
        np.testing.assert_array_equal(problem.source(np.zeros((4, 30))), -1.0)

    def test_case1_boundary_matches_exact(self):
        rng = np.random.default_rng(0)
        directions = rng.standard_normal((20, 6))
        sphere = directions / np.linalg.norm(directions, axis=1)[:, None]
        problem = case1(6)
        np.testing.assert_allclose(problem.boundary(sphere), problem.exact(sphere), atol=1e-14)

    def test_case2_values(self):
        problem = case2(4)
        x = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [0.5, -1.0, 0.0, 0.25]])
        np.testing.assert_allclose(problem.exact(x), [1.0 / 6.0, 0.0, (0.0625 + 1.0 + 0.00390625) / 6.0])
        np.testing.assert_allclose(problem.source(x), [1.0, 0.0, 0.25 + 1.0 + 0.0625])
        assert problem.domain.lower == (-1.0,) * 4

    def test_case3_values(self):
        problem = case3(2)
        assert problem.exact(np.zeros((1, 2)))[0] == pytest.approx(1.0)
        assert problem.source(np.zeros((1, 2)))[0] == pytest.approx(-2.0)
        assert problem.domain.upper == (3.0, 3.0)

    @pytest.mark.parametrize('factory, d', [(case1, 5), (case1, 30), (case2, 5), (case3, 2), (case3, 6)])
    def test_source_is_half_laplacian(self, factory, d):
        assert verify_problem(factory(d)) <= 1e-4

    def test_printed_case3_source_is_rejected(self):
        reference = case3(3)

        def misprinted(x):
            s = np.sum(x, axis=1)
            r2 = np.sum(x ** 2, axis=1)
            return (2.0 * r2 - 3) * np.exp(-r2) - 3 * s / (4.0 * (4.0 + s ** 2) ** 2)

        problem = DirichletProblem('misprint', reference.domain, misprinted, reference.boundary, reference.exact)
        with pytest.raises(ProblemDefinitionError):
            verify_problem(problem)

    def test_finite_difference_laplacian(self):
        points = np.array([[0.3, -0.2], [1.0, 2.0]])
        values = finite_difference_laplacian(lambda x: np.sum(x ** 2, axis=1), points)
        np.testing.assert_allclose(values, 4.0, rtol=1e-6)

    def test_build_problem(self):
        assert build_problem('case2', 3).name == 'case2'
        with pytest.raises(ProblemDefinitionError):
            build_problem('case4', 3)


class TestCustomProblem:
    def write(self, tmp_path, body):
        path = tmp_path / 'problem.py'
        path.write_text(textwrap.dedent(body), encoding='utf-8')
        return str(path)

    def test_loads_build_problem(self, tmp_path):
        path = self.write(tmp_path, """
            import numpy as np

            from analysis.problems import DirichletProblem
            from geometry.domains import Domain


            def build_problem(d):
                def exact(x):
                    return np.sum(x ** 2, axis=1) + 1.0

                def source(x):
                    return np.full(x.shape[0], float(d))

                return DirichletProblem('paraboloid', Domain.cube(d, 0.0, 1.0), source, exact, exact)
            """)
        problem = build_problem('custom', 3, path)
        assert problem.name == 'paraboloid'
        assert problem.dimension == 3
        verify_problem(problem)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ProblemDefinitionError):
            load_custom_problem(str(tmp_path / 'absent.py'), 2)

    def test_missing_factory(self, tmp_path):
        path = self.write(tmp_path, "VALUE = 1\n")
        with pytest.raises(ProblemDefinitionError):
            load_custom_problem(path, 2)

    def test_wrong_return_type(self, tmp_path):
        path = self.write(tmp_path, "def build_problem(d):\n    return None\n")
        with pytest.raises(ProblemDefinitionError):
            load_custom_problem(path, 2)

    def test_syntax_error(self, tmp_path):
        path = self.write(tmp_path, "def build_problem(d)\n")
        with pytest.raises(ProblemDefinitionError):
            load_custom_problem(path, 2)


class TestArep:
    def test_exact_solution(self):
        exact = np.array([1.0, -2.0, 0.5])
        assert arep_details(exact.copy(), exact) == (0.0, 3, 0)

    def test_uniform_relative_error(self):
        exact = np.array([1.0, -2.0, 0.5, 4.0])
        value, _, _ = arep_details(1.01 * exact, exact)
        assert value == pytest.approx(1.0)

    def test_mixed_errors(self):
        value, _, _ = arep_details(np.array([3.0, 1.02]), np.array([3.0, 1.0]))
        assert value == pytest.approx(1.0)

    def test_near_zero_nodes_excluded(self):
        exact = np.array([0.0, 1e-13, 2.0, -4.0])
        value, kept, excluded = arep_details(np.array([5.0, 5.0, 2.2, -4.0]), exact)
        assert value == pytest.approx(5.0)
        assert (kept, excluded) == (2, 2)
        assert kept + excluded == len(exact)

    def test_all_excluded(self):
        with pytest.raises(ErrorMetricError):
            arep_details(np.ones(3), np.zeros(3))

    def test_shape_mismatch(self):
        with pytest.raises(ErrorMetricError):
            arep_details(np.ones(3), np.ones(4))

    def test_arep_uses_exact_solution(self):
        problem = case3(2)
        interior = np.array([[0.0, 0.0], [1.0, -0.5]])
        solution = problem.exact(interior) * 0.98
        assert arep(solution, problem, interior) == pytest.approx(2.0)

    def test_arep_requires_exact(self):
        problem = DirichletProblem('unknown', Domain.ball(2), lambda x: x[:, 0], lambda x: x[:, 0])
        with pytest.raises(ProblemDefinitionError):
            arep(np.ones(2), problem, np.zeros((2, 2)))


class TestFiveNumberSummary:
    def test_order_statistics(self):
        assert five_number_summary([5, 1, 4, 2, 3]) == {'min': 1.0, 'q1': 2.0, 'median': 3.0, 'q3': 4.0, 'max': 5.0}

    def test_single_value(self):
        assert set(five_number_summary([0.7]).values()) == {0.7}

    def test_empty(self):
        assert all(math.isnan(value) for value in five_number_summary([]).values())
