import numpy as np
import pytest

from ulln import Dataset, SolverOptions, empirical_risk, fit_constrained, project_to_ball
from ulln.experiments import prediction_precision


class TestProjectToBall:
    def test_interior_point_unchanged(self):
        v = np.array([0.3, -0.4])
        np.testing.assert_array_equal(project_to_ball(v, 1.0), v)

    def test_radial_scaling(self):
        np.testing.assert_allclose(project_to_ball(np.array([3.0, 4.0]), 1.0), [0.6, 0.8], rtol=1e-15)

    def test_zero_radius(self):
        np.testing.assert_array_equal(project_to_ball(np.array([1.0, 2.0]), 0.0), [0.0, 0.0])

    def test_negative_radius(self):
        with pytest.raises(ValueError):
            project_to_ball(np.array([1.0]), -0.1)


def grid_min_risk(data, radius, resolution=20001):
    """1-D brute-force oracle: minimum empirical risk over the interval."""
    thetas = np.linspace(-radius, radius, resolution)
    scores = data.inputs @ thetas[None, :]
    y = data.labels[:, None]
    losses = y * (np.maximum(-scores, 0) + np.log1p(np.exp(-np.abs(scores)))) + (1 - y) * (
        np.maximum(scores, 0) + np.log1p(np.exp(-np.abs(scores)))
    )
    risks = losses.mean(axis=0)
    idx = int(np.argmin(risks))
    return thetas[idx], risks[idx]


class TestFitConstrained:
    def test_boundary_solution(self):
        data = Dataset(np.array([[1.0], [-1.0]]), np.array([1, 0]))
        fit = fit_constrained(data, 1.0)
        assert fit.theta_hat[0] == pytest.approx(1.0, abs=1e-6)
        assert fit.on_boundary
        assert fit.converged
        theta_grid, risk_grid = grid_min_risk(data, 1.0)
        assert theta_grid == pytest.approx(1.0, abs=1e-4)
        assert fit.risk <= risk_grid + 1e-10

    def test_symmetric_solution_at_zero(self):
        data = Dataset(np.array([[1.0], [1.0]]), np.array([1, 0]))
        fit = fit_constrained(data, 1.0)
        assert fit.theta_hat[0] == pytest.approx(0.0, abs=1e-6)
        assert fit.converged

    def test_separable_instance_perfect_training_precision(self):
        rng = np.random.default_rng(11)
        n, p = 20, 50
        x = rng.standard_normal((n, p))
        theta_star = rng.standard_normal(p)
        theta_star /= np.linalg.norm(theta_star)
        from ulln import sigmoid

        probs = sigmoid(1e3 * (x @ theta_star))
        y = (rng.random(n) < probs).astype(int)
        data = Dataset(x, y)

        # perceptron oracle certifies linear separability first
        w = np.zeros(p)
        for _ in range(1000):
            margins = (2 * y - 1) * (x @ w)
            wrong = np.where(margins <= 0)[0]
            if wrong.size == 0:
                break
            i = wrong[0]
            w += (2 * y[i] - 1) * x[i]
        assert np.all((2 * y - 1) * (x @ w) > 0), "oracle says instance is not separable"

        fit = fit_constrained(data, 1.0)
        assert prediction_precision(fit.theta_hat, data) == 1.0

    def test_zero_radius_shortcut(self):
        data = Dataset(np.array([[2.0, 1.0]]), np.array([1]))
        fit = fit_constrained(data, 0.0)
        np.testing.assert_array_equal(fit.theta_hat, [0.0, 0.0])
        assert fit.converged and fit.iterations == 0

    def test_feasible_and_risk_matches_theta(self):
        rng = np.random.default_rng(12)
        data = Dataset(rng.standard_normal((30, 6)), rng.integers(0, 2, 30))
        fit = fit_constrained(data, 0.7)
        assert np.linalg.norm(fit.theta_hat) <= 0.7 + 1e-12
        assert fit.risk == pytest.approx(empirical_risk(data, fit.theta_hat), rel=1e-14)

    def test_monotone_descent_along_iteration_budget(self):
        rng = np.random.default_rng(13)
        data = Dataset(rng.standard_normal((40, 8)), rng.integers(0, 2, 40))
        risks = []
        for iters in (1, 2, 5, 10, 25, 60, 140):
            fit = fit_constrained(data, 1.0, SolverOptions(max_iters=iters, grad_map_tol=1e-14))
            assert np.linalg.norm(fit.theta_hat) <= 1.0 + 1e-12
            risks.append(fit.risk)
        assert all(b <= a + 1e-12 for a, b in zip(risks, risks[1:]))

    def test_grid_oracle_risk_agreement(self):
        rng = np.random.default_rng(14)
        for trial in range(5):
            data = Dataset(rng.standard_normal((15, 1)) * 2.0, rng.integers(0, 2, 15))
            fit = fit_constrained(data, 1.0)
            _, risk_grid = grid_min_risk(data, 1.0)
            assert abs(fit.risk - risk_grid) < 1e-5

    def test_non_convergence_is_flagged_not_raised(self):
        rng = np.random.default_rng(15)
        data = Dataset(rng.standard_normal((25, 4)), rng.integers(0, 2, 25))
        fit = fit_constrained(data, 1.0, SolverOptions(max_iters=2, grad_map_tol=1e-14))
        assert not fit.converged
        assert fit.iterations == 2


class TestSolverOptions:
    def test_field_validation(self):
        with pytest.raises(ValueError):
            SolverOptions(max_iters=0)
        with pytest.raises(ValueError):
            SolverOptions(grad_map_tol=0.0)
        with pytest.raises(ValueError):
            SolverOptions(backtrack_factor=1.0)
        with pytest.raises(ValueError):
            SolverOptions(armijo_const=0.0)
        with pytest.raises(ValueError):
            SolverOptions(initial_step=-1.0)
