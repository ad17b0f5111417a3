"""Projected gradient descent with Armijo backtracking for the
ball-constrained empirical risk minimization problem.

Stationarity is certified through the gradient mapping
    ||theta - P_B[R](theta - s * grad)|| / s
rather than the raw gradient, since minimizers typically sit on the
boundary of the ball.  The objective is non-increasing across accepted
iterates and every iterate is feasible.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Dataset, per_example_loss, sigmoid

BOUNDARY_TOL = 1e-8
_STEP_GROWTH = 2.0
_MAX_BACKTRACKS = 80


@dataclass(frozen=True)
class SolverOptions:
    max_iters: int = 20000
    grad_map_tol: float = 1e-8
    initial_step: float | None = None  # None: auto 4n/||X||_F^2
    backtrack_factor: float = 0.5
    armijo_const: float = 1e-4

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.grad_map_tol <= 0:
            raise ValueError("grad_map_tol must be > 0")
        if self.initial_step is not None and self.initial_step <= 0:
            raise ValueError("initial_step must be > 0")
        if not 0 < self.backtrack_factor < 1:
            raise ValueError("backtrack_factor must lie in (0, 1)")
        if not 0 < self.armijo_const < 1:
            raise ValueError("armijo_const must lie in (0, 1)")


@dataclass(frozen=True)
class FitResult:
    theta_hat: np.ndarray
    risk: float
    iterations: int
    converged: bool
    on_boundary: bool
    grad_map_norm: float


def project_to_ball(v: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection onto {theta : ||theta|| <= radius}."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm <= radius:
        return v.copy()
    if radius == 0.0:
        return np.zeros_like(v)
    return (radius / norm) * v


def fit_constrained(data: Dataset, radius: float, opts: SolverOptions | None = None) -> FitResult:
    """Minimize the empirical risk over the ball of the given radius.

    Runs projected gradient descent from the origin with Armijo
    backtracking (sufficient decrease against <grad, step>), doubling the
    step after clean acceptances.  Stops once the gradient-mapping norm at
    the accepted step size drops below ``opts.grad_map_tol``; reports
    ``converged=False`` after ``opts.max_iters`` otherwise.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    opts = opts or SolverOptions()
    x, y = data.inputs, data.labels
    n = data.n

    def risk_of(scores):
        return float(np.mean(per_example_loss(y, scores)))

    if radius == 0.0:
        theta = np.zeros(data.p)
        return FitResult(theta, risk_of(np.zeros(n)), 0, True, True, 0.0)

    theta = np.zeros(data.p)
    scores = np.zeros(n)
    risk = risk_of(scores)
    grad = x.T @ (sigmoid(scores) - y) / n

    step = opts.initial_step
    if step is None:
        # inverse of the global Lipschitz bound ||X||_F^2 / (4n) for the risk gradient
        step = 4.0 * n / float(np.einsum("ij,ij->", x, x))

    converged = False
    grad_map_norm = float("inf")
    iterations = 0

    for iterations in range(1, opts.max_iters + 1):
        backtracked = False
        for _ in range(_MAX_BACKTRACKS):
            candidate = project_to_ball(theta - step * grad, radius)
            direction = candidate - theta
            decrease = float(grad @ direction)  # <= 0 by the projection property
            cand_scores = x @ candidate
            cand_risk = risk_of(cand_scores)
            if cand_risk <= risk + opts.armijo_const * decrease:
                break
            step *= opts.backtrack_factor
            backtracked = True
        else:
            break  # step underflowed; report best iterate without a certificate

        grad_map_norm = float(np.linalg.norm(direction)) / step
        theta, scores, risk = candidate, cand_scores, cand_risk
        grad = x.T @ (sigmoid(scores) - y) / n
        if grad_map_norm <= opts.grad_map_tol:
            converged = True
            break
        if not backtracked:
            step *= _STEP_GROWTH

    on_boundary = float(np.linalg.norm(theta)) >= radius - BOUNDARY_TOL
    return FitResult(theta, risk, iterations, converged, on_boundary, grad_map_norm)
