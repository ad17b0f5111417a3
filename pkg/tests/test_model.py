import math

import numpy as np
import pytest

from ulln import (
    Dataset,
    GenerativeConfig,
    empirical_risk,
    make_covariance,
    per_example_loss,
    population_risk,
    risk_gradient,
    risk_laplacian,
    sigmoid,
    softplus,
)
from ulln.model import _mixture_loss

LOG2 = math.log(2.0)


def random_dataset(rng, n, p):
    return Dataset(rng.standard_normal((n, p)), rng.integers(0, 2, n))


class TestSigmoid:
    def test_symmetry_point(self):
        assert sigmoid(0.0) == 0.5

    def test_sum_is_one(self):
        assert sigmoid(3.7) + sigmoid(-3.7) == pytest.approx(1.0, abs=1e-16)

    def test_no_overflow_at_500(self):
        with np.errstate(over="raise"):
            value = sigmoid(500.0)
        assert value <= 1.0
        assert 0.0 <= 1.0 - value < 1e-200
        with np.errstate(over="raise"):
            low = sigmoid(-745.0)
        assert 0.0 <= low < 1e-200

    def test_strictly_monotone(self):
        # spacing kept coarse enough that increments stay above double resolution
        t = np.linspace(-30, 30, 201)
        values = sigmoid(t)
        assert np.all(np.diff(values) > 0)


class TestPerExampleLoss:
    def test_score_zero(self):
        assert per_example_loss(1, 0.0) == pytest.approx(LOG2, abs=1e-15)
        assert per_example_loss(0, 0.0) == pytest.approx(LOG2, abs=1e-15)

    def test_against_log1p_oracle(self):
        assert per_example_loss(0, 2.0) == pytest.approx(math.log1p(math.exp(2.0)), abs=1e-12)

    def test_extreme_score_is_finite(self):
        value = per_example_loss(1, -800.0)
        assert value == pytest.approx(800.0, abs=1e-9)
        assert np.isfinite(value)

    def test_bounded_by_log2_plus_score(self):
        rng = np.random.default_rng(1)
        scores = rng.uniform(-200, 200, 500)
        for y in (0, 1):
            losses = per_example_loss(y, scores)
            assert np.all(losses >= 0)
            assert np.all(losses <= LOG2 + np.abs(scores) + 1e-12)

    def test_matches_naive_form_in_safe_range(self):
        # |score| <= 10 keeps the naive oracle itself free of cancellation
        rng = np.random.default_rng(2)
        scores = rng.uniform(-10, 10, 100)
        for y in (0, 1):
            naive = -y * np.log(sigmoid(scores)) - (1 - y) * np.log(1 - sigmoid(scores))
            assert per_example_loss(y, scores) == pytest.approx(naive, rel=1e-9)


class TestEmpiricalRisk:
    def test_zero_theta_gives_log2(self):
        rng = np.random.default_rng(3)
        for n, p in [(1, 1), (7, 3), (20, 5)]:
            data = random_dataset(rng, n, p)
            assert empirical_risk(data, np.zeros(p)) == pytest.approx(LOG2, abs=1e-15)

    def test_single_point_oracle(self):
        data = Dataset(np.array([[2.0]]), np.array([1]))
        assert empirical_risk(data, np.array([1.0])) == pytest.approx(math.log1p(math.exp(-2.0)), abs=1e-12)

    def test_duplicated_rows_average_out(self):
        rng = np.random.default_rng(4)
        row = rng.standard_normal((1, 4))
        theta = rng.standard_normal(4)
        single = Dataset(row, np.array([1]))
        stacked = Dataset(np.repeat(row, 5, axis=0), np.ones(5, dtype=int))
        assert empirical_risk(stacked, theta) == pytest.approx(empirical_risk(single, theta), rel=1e-14)

    def test_dimension_mismatch(self):
        data = Dataset(np.eye(3), np.array([0, 1, 0]))
        with pytest.raises(ValueError):
            empirical_risk(data, np.zeros(4))

    def test_convex_along_segments(self):
        rng = np.random.default_rng(5)
        data = random_dataset(rng, 12, 4)
        for _ in range(20):
            a, b = rng.standard_normal((2, 4))
            mid = empirical_risk(data, 0.5 * a + 0.5 * b)
            assert mid <= 0.5 * empirical_risk(data, a) + 0.5 * empirical_risk(data, b) + 1e-12


class TestRiskGradient:
    def test_single_row_at_zero(self):
        x = np.array([[1.5, -2.0, 0.5]])
        data = Dataset(x, np.array([1]))
        np.testing.assert_allclose(risk_gradient(data, np.zeros(3)), -x[0] / 2.0, rtol=1e-15)

    def test_label_cancellation(self):
        x = np.array([1.0, 2.0])
        data = Dataset(np.vstack([x, x]), np.array([1, 0]))
        np.testing.assert_allclose(risk_gradient(data, np.zeros(2)), 0.0, atol=1e-16)

    def test_finite_differences(self):
        rng = np.random.default_rng(6)
        data = random_dataset(rng, 5, 3)
        theta = rng.standard_normal(3) * 0.7
        grad = risk_gradient(data, theta)
        h = 1e-5
        fd = np.array(
            [
                (empirical_risk(data, theta + h * e) - empirical_risk(data, theta - h * e)) / (2 * h)
                for e in np.eye(3)
            ]
        )
        assert np.max(np.abs(grad - fd)) / np.max(np.abs(fd)) < 1e-6

    def test_dimension_mismatch(self):
        data = Dataset(np.eye(2), np.array([0, 1]))
        with pytest.raises(ValueError):
            risk_gradient(data, np.zeros(3))


class TestRiskLaplacian:
    def test_value_at_zero(self):
        rng = np.random.default_rng(7)
        data = random_dataset(rng, 6, 3)
        expected = np.mean(np.sum(data.inputs**2, axis=1)) / 4.0
        assert risk_laplacian(data, np.zeros(3)) == pytest.approx(expected, rel=1e-14)

    def test_zero_inputs(self):
        data = Dataset(np.zeros((4, 2)), np.array([0, 1, 0, 1]))
        assert risk_laplacian(data, np.ones(2)) == 0.0

    def test_matches_hessian_trace(self):
        rng = np.random.default_rng(8)
        data = random_dataset(rng, 4, 2)
        theta = rng.standard_normal(2) * 0.4
        lap = risk_laplacian(data, theta)
        h = 1e-4
        trace = sum(
            (empirical_risk(data, theta + h * e) - 2 * empirical_risk(data, theta) + empirical_risk(data, theta - h * e))
            / h**2
            for e in np.eye(2)
        )
        assert abs(lap - trace) / abs(trace) < 1e-4
        assert lap >= 0


class TestPopulationRisk:
    def test_zero_theta_is_log2(self):
        gen = GenerativeConfig(
            p=3, n=5, cov=make_covariance("reciprocal", 3), beta=2.0,
            theta_star=np.array([1.0, 0.0, 0.0]), seed=0,
        )
        est = population_risk(gen, np.zeros(3), budget=500, seed=1)
        assert est.mean == pytest.approx(LOG2, abs=1e-14)
        assert est.std_error <= 1e-15

    def test_quadrature_matches_monte_carlo(self):
        gen = GenerativeConfig(
            p=1, n=5, cov=make_covariance("identity", 1), beta=1.0,
            theta_star=np.array([1.0]), seed=0,
        )
        theta = np.array([1.0])
        quad = population_risk(gen, theta, budget=10, seed=0)
        assert quad.method == "quadrature"
        assert quad.std_error == 0.0
        # independent Monte Carlo oracle with the same label mixture
        rng = np.random.default_rng(42)
        x = rng.standard_normal((400_000, 1))
        losses = _mixture_loss(x @ theta, sigmoid(1.0 * (x @ np.array([1.0]))))
        mc_mean = losses.mean()
        mc_se = losses.std(ddof=1) / math.sqrt(losses.size)
        assert abs(quad.mean - mc_mean) <= 3 * mc_se

    def test_std_error_scaling_with_budget(self):
        gen = GenerativeConfig(
            p=3, n=5, cov=make_covariance("reciprocal", 3), beta=1.0,
            theta_star=np.array([0.6, -0.6, 0.5]), seed=0,
        )
        theta = np.array([0.3, 0.2, -0.4])
        base = population_risk(gen, theta, budget=20_000, seed=5)
        doubled = population_risk(gen, theta, budget=40_000, seed=6)
        quadrupled = population_risk(gen, theta, budget=80_000, seed=7)
        assert base.method == "monte_carlo"
        # sample-std / sqrt(budget): doubling shrinks by ~1/sqrt(2), quadrupling halves
        assert doubled.std_error / base.std_error == pytest.approx(1 / math.sqrt(2), rel=0.2)
        assert quadrupled.std_error / base.std_error == pytest.approx(0.5, rel=0.2)

    def test_invalid_budget(self):
        gen = GenerativeConfig(
            p=3, n=5, cov=make_covariance("reciprocal", 3), beta=1.0,
            theta_star=np.array([1.0, 0.0, 0.0]), seed=0,
        )
        with pytest.raises(ValueError):
            population_risk(gen, np.zeros(3), budget=0, seed=1)


class TestDatasetValidation:
    def test_rejects_bad_labels(self):
        with pytest.raises(ValueError):
            Dataset(np.eye(2), np.array([0, 2]))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Dataset(np.array([[np.inf, 0.0]]), np.array([1]))

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            Dataset(np.eye(3), np.array([0, 1]))


def test_softplus_extremes():
    assert softplus(0.0) == pytest.approx(LOG2, abs=1e-16)
    assert softplus(800.0) == 800.0
    assert softplus(-800.0) == 0.0
