import math

import numpy as np
import pytest

from basis.hermite import BasisSpec, basis_matrix
from basis.index_sets import MultiIndex, enumerate_index_set
from discretization.stencil import (MethodParams, NeighborSearch, StencilBuilder, build_laplacian_row,
                                    find_neighbors, select_lambda, smooth_coefficient_scale)
from geometry.domains import Domain
from geometry.sampling import NodeSet, generate_node_set, sample_interior
from utils.error_handler import ConfigurationError, InsufficientNodesError, SingularStencilError


def disk_method(nodes, smoothing=0.0):
    """Базис Gamma^4(2, 1) и lambda, выбранная по плотности узлов в единичном круге."""
    index_set = enumerate_index_set(2, 1.0, 4)
    scale = select_lambda(2.0, 2.628, len(index_set), nodes.n_interior, math.pi, 2)
    spec = BasisSpec(index_set, scale, smoothing)
    params = MethodParams(scale=scale, min_neighbors=len(index_set))
    return spec, params


def apply_row(stencil, nodes, func):
    return stencil.weights @ func(nodes.points[stencil.neighbor_indices])


class TestSelectLambda:
    def test_unit_ratio(self):
        assert select_lambda(2.0, 2.628, 1, 2, 1.0 / math.gamma(2.5), 3) == pytest.approx(2.628 * math.sqrt(math.pi))

    def test_disk_example(self):
        value = select_lambda(2.0, 2.628, 10, 1000, math.pi, 2)
        assert value == pytest.approx(2.628 * math.sqrt(math.pi) * math.sqrt(1000 / (20 * math.pi)))
        assert value == pytest.approx(18.58, abs=0.01)

    def test_grows_with_node_count(self):
        small = select_lambda(2.0, 2.628, 61, 1000, 1.0, 30)
        large = select_lambda(2.0, 2.628, 61, 100000, 1.0, 30)
        assert large > small

    @pytest.mark.parametrize('theta', [1.0, 0.5])
    def test_theta_must_exceed_one(self, theta):
        with pytest.raises(ConfigurationError):
            select_lambda(theta, 2.628, 10, 1000, math.pi, 2)


class TestSmoothing:
    def test_no_smoothing(self):
        assert smooth_coefficient_scale(MultiIndex.from_dense((3, 1)), 1.0, 0.0) == 1.0

    def test_order_six(self):
        assert smooth_coefficient_scale(MultiIndex.from_dense((2, 1)), 1.0, 1.0) == pytest.approx(1.0 / 6.0)

    def test_zero_index(self):
        assert smooth_coefficient_scale(MultiIndex(4), 1.0, 3.5) == 1.0

    def test_negative_beta(self):
        with pytest.raises(ConfigurationError):
            smooth_coefficient_scale(MultiIndex(2), 1.0, -0.5)


class TestNeighbors:
    def test_expected_count_at_origin(self):
        interior = sample_interior(Domain.ball(2), 1000, seed=1)
        nodes = NodeSet(interior=interior, boundary=np.empty((0, 2)))
        indices = find_neighbors(nodes, np.zeros(2), 0.2)
        assert 20 <= len(indices) <= 60

    def test_ball_is_exact(self, disk_nodes):
        reference = disk_nodes.interior[17]
        indices = find_neighbors(disk_nodes, reference, 0.15)
        distances = np.linalg.norm(disk_nodes.points - reference, axis=1)
        np.testing.assert_array_equal(indices, np.flatnonzero(distances <= 0.15))
        assert 17 in indices

    def test_radius_expansion(self):
        nodes = NodeSet(interior=np.array([[0.0], [0.5], [1.0]]), boundary=np.empty((0, 1)))
        indices, radius, expansions = NeighborSearch(nodes).find(np.zeros(1), 0.3, 2)
        assert list(indices) == [0, 1]
        assert expansions == 6
        assert radius == pytest.approx(0.3 * 1.1 ** 6)

    def test_insufficient_nodes(self):
        nodes = NodeSet(interior=np.array([[0.0, 0.0], [0.1, 0.0]]), boundary=np.empty((0, 2)))
        with pytest.raises(InsufficientNodesError):
            NeighborSearch(nodes).find(np.zeros(2), 0.2, 3, max_expansions=2)


class TestLaplacianRow:
    def test_second_order_consistency(self, disk_nodes):
        spec, params = disk_method(disk_nodes)
        stencils = StencilBuilder({}).build_all(disk_nodes, spec, params)
        assert len(stencils) == disk_nodes.n_interior
        for stencil in stencils:
            center = disk_nodes.interior[stencil.reference_index]
            scale = np.sum(np.abs(stencil.weights))
            assert stencil.neighbor_count >= spec.size
            assert abs(apply_row(stencil, disk_nodes, lambda x: np.ones(len(x)))) <= 1e-6 * scale
            for j in range(2):
                linear = apply_row(stencil, disk_nodes, lambda x: x[:, j] - center[j])
                square = apply_row(stencil, disk_nodes, lambda x: (x[:, j] - center[j]) ** 2)
                assert abs(linear) <= 1e-6 * scale
                assert abs(square - 1.0) <= 1e-6 * scale

    def test_in_span_quadratic(self, disk_nodes):
        spec, params = disk_method(disk_nodes)

        def u(x):
            return 3.0 * x[:, 0] ** 2 - 0.5 * x[:, 1] ** 2 + 2.0 * x[:, 0] - x[:, 1] + 4.0

        for reference in (0, 100, 250, 499):
            stencil = build_laplacian_row(disk_nodes, reference, spec, params)
            assert apply_row(stencil, disk_nodes, u) == pytest.approx(2.5, rel=1e-7)

    def test_locality(self, disk_nodes):
        spec, params = disk_method(disk_nodes)
        stencil = build_laplacian_row(disk_nodes, 42, spec, params)
        distances = np.linalg.norm(disk_nodes.points[stencil.neighbor_indices] - disk_nodes.interior[42], axis=1)
        assert np.all(distances <= stencil.radius)
        assert len(stencil.weights) == stencil.neighbor_count
        assert np.all(np.diff(stencil.neighbor_indices) > 0)

    def test_smoothing_invariance(self, disk_nodes):
        plain_spec, params = disk_method(disk_nodes)
        smooth_spec, _ = disk_method(disk_nodes, smoothing=2.0)

        def u(x):
            return x[:, 0] ** 2 + x[:, 1] ** 2 - x[:, 0]

        for reference in (3, 77, 311):
            plain = build_laplacian_row(disk_nodes, reference, plain_spec, params)
            smooth = build_laplacian_row(disk_nodes, reference, smooth_spec, params)
            np.testing.assert_array_equal(plain.neighbor_indices, smooth.neighbor_indices)
            scale = np.sum(np.abs(plain.weights))
            assert abs(apply_row(plain, disk_nodes, u) - apply_row(smooth, disk_nodes, u)) <= 1e-8 * scale

    def test_translation_invariance(self, disk_nodes):
        spec, params = disk_method(disk_nodes)
        shift = np.array([0.5, -0.25])
        moved = NodeSet(interior=disk_nodes.interior + shift, boundary=disk_nodes.boundary + shift)
        for reference in (5, 200):
            original = build_laplacian_row(disk_nodes, reference, spec, params)
            shifted = build_laplacian_row(moved, reference, spec, params)
            np.testing.assert_array_equal(original.neighbor_indices, shifted.neighbor_indices)
            scale = np.max(np.abs(original.weights))
            np.testing.assert_allclose(shifted.weights, original.weights, rtol=1e-8, atol=1e-8 * scale)

    def test_determinism(self, disk_nodes):
        spec, params = disk_method(disk_nodes)
        first = build_laplacian_row(disk_nodes, 9, spec, params)
        second = build_laplacian_row(disk_nodes, 9, spec, params)
        np.testing.assert_array_equal(first.weights, second.weights)

    def test_one_dimensional_second_difference(self):
        nodes = NodeSet(interior=np.array([[0.0]]), boundary=np.array([[-0.5], [0.5]]))
        spec = BasisSpec(enumerate_index_set(1, 1.0, 4), scale=1.0)
        params = MethodParams(scale=1.0)
        stencil = build_laplacian_row(nodes, 0, spec, params)
        # три узла и три функции: веса совпадают с 1/2 центральной второй разности
        np.testing.assert_allclose(stencil.weights, [-4.0, 2.0, 2.0], rtol=1e-8)

    def test_singular_configuration(self):
        points = np.column_stack([np.linspace(-0.05, 0.05, 11), np.zeros(11)])
        nodes = NodeSet(interior=points, boundary=np.empty((0, 2)))
        spec = BasisSpec(enumerate_index_set(2, 1.0, 4), scale=1.0)
        params = MethodParams(scale=1.0, ridge=0.0)
        with pytest.raises(SingularStencilError):
            build_laplacian_row(nodes, 5, spec, params)

    def test_insufficient_neighbors_propagates(self):
        nodes = generate_node_set(Domain.ball(2), 4, 0, seed=0)
        spec = BasisSpec(enumerate_index_set(2, 1.0, 4), scale=1.0)
        with pytest.raises(InsufficientNodesError) as excinfo:
            build_laplacian_row(nodes, 0, spec, MethodParams(scale=1.0))
        assert excinfo.value.reference_index == 0

    @pytest.mark.parametrize('kwargs', [{'scale': 0.0}, {'scale': 1.0, 'theta': 1.0},
                                        {'scale': 1.0, 'ridge': -1.0}, {'scale': 1.0, 'expansion_factor': 1.0}])
    def test_invalid_params(self, kwargs):
        with pytest.raises(ConfigurationError):
            MethodParams(**kwargs)

    def test_refinement_disabled_returns_regularized_solution(self, disk_nodes):
        spec, _ = disk_method(disk_nodes)
        params = MethodParams(scale=spec.scale, ridge=1e-3, min_neighbors=spec.size, refinement_steps=0)
        stencil = build_laplacian_row(disk_nodes, 11, spec, params)

        reference = disk_nodes.interior[11]
        neighbors = disk_nodes.points[stencil.neighbor_indices]
        values, _ = basis_matrix(spec, neighbors, reference)
        _, laplacians = basis_matrix(spec, reference[None, :], reference)
        gauss = np.exp(-spec.scale ** 2 * np.sum((neighbors - reference) ** 2, axis=1))
        gram = values.T @ (gauss[:, None] * values)
        regularized = gram + 1e-3 * np.trace(gram) / spec.size * np.eye(spec.size)
        expected = gauss * (values @ np.linalg.solve(regularized, 0.5 * laplacians[0]))
        np.testing.assert_allclose(stencil.weights, expected, rtol=1e-8, atol=1e-12 * np.max(np.abs(expected)))

    def test_refinement_recovers_unregularized_consistency(self, disk_nodes):
        spec, _ = disk_method(disk_nodes)
        plain = MethodParams(scale=spec.scale, ridge=1e-3, min_neighbors=spec.size, refinement_steps=0)
        refined = MethodParams(scale=spec.scale, ridge=1e-3, min_neighbors=spec.size, refinement_steps=3)

        def u(x):
            return x[:, 0] ** 2 + 2.0 * x[:, 1] ** 2

        errors = [abs(apply_row(build_laplacian_row(disk_nodes, 40, spec, params), disk_nodes, u) - 1.5)
                  for params in (plain, refined)]
        assert errors[1] < errors[0]


@pytest.mark.parametrize('seed', range(20))
def test_consistency_on_random_node_sets(seed):
    d = (2, 3, 5)[seed % 3]
    domain = Domain.ball(d)
    nodes = generate_node_set(domain, 500, seed=seed)
    index_set = enumerate_index_set(d, 1.0, 4)
    scale = select_lambda(2.0, 2.628, len(index_set), nodes.n_interior, domain.measure(), d)
    spec = BasisSpec(index_set, scale)
    params = MethodParams(scale=scale, min_neighbors=len(index_set))
    coefficients = np.linspace(-1.0, 2.0, d)

    for stencil in StencilBuilder({}).build_all(nodes, spec, params):
        center = nodes.interior[stencil.reference_index]
        shifted = nodes.points[stencil.neighbor_indices] - center
        norm = np.sum(np.abs(stencil.weights))
        assert abs(np.sum(stencil.weights)) <= 1e-8 * norm
        for j in range(d):
            linear = shifted[:, j]
            assert abs(stencil.weights @ linear) <= 1e-8 * norm * np.max(np.abs(linear))

        values = nodes.points[stencil.neighbor_indices]
        quadratic = values ** 2 @ coefficients + values @ coefficients + 0.5
        assert stencil.weights @ quadratic == pytest.approx(np.sum(coefficients), rel=1e-6)
