"""Lower-bound estimation of sup over the ball of |R_n(theta) - R(theta)|.

The sup is estimated from below by multistart projected ascent on both
signed gaps +/-(R_n - Rhat); for p <= 2 an exhaustive grid oracle with a
deterministic quadrature population risk is available for cross-checks.
No exactness is claimed for p > 2 — a lower bound is what is needed to
sanity-check the upper bounds.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datagen import GenerativeConfig, make_rng, derive_seed
from .model import (
    Dataset,
    QUADRATURE_NODES_PER_AXIS,
    _mixture_loss,
    empirical_risk,
    risk_gradient,
    sigmoid,
    softplus,
)
from .quadrature import gauss_hermite_tensor
from .solver import project_to_ball

ASCENT_ITERS = 120
ASCENT_STEP = 0.1  # step at iteration k is ASCENT_STEP / sqrt(k)


@dataclass(frozen=True)
class DeviationEstimate:
    sup_value: float
    arg_theta: np.ndarray
    method: str  # "multistart_ascent" | "random_search" | "grid"
    starts: int
    pop_risk_stderr: float


class _QuadraturePopulationRisk:
    """Deterministic population risk for p <= 2 via tensorized Gauss-Hermite."""

    def __init__(self, gen: GenerativeConfig):
        z_nodes, self.weights = gauss_hermite_tensor(QUADRATURE_NODES_PER_AXIS, gen.p)
        self.x_nodes = gen.cov.transform(z_nodes)
        self.label_probs = sigmoid(gen.beta * (self.x_nodes @ gen.concrete_theta_star()))
        self.stderr = 0.0

    def value(self, theta: np.ndarray) -> float:
        return float(self.weights @ _mixture_loss(self.x_nodes @ theta, self.label_probs))

    def value_many(self, thetas: np.ndarray) -> np.ndarray:
        scores = self.x_nodes @ thetas.T  # (nodes, m)
        losses = self.label_probs[:, None] * softplus(-scores) + (1.0 - self.label_probs[:, None]) * softplus(scores)
        return self.weights @ losses

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        residual = sigmoid(self.x_nodes @ theta) - self.label_probs
        return self.x_nodes.T @ (self.weights * residual)

    def stderr_at(self, theta: np.ndarray) -> float:
        return 0.0


class _SampledPopulationRisk:
    """Frozen Monte Carlo reference sample with the exact label mixture.

    The sample is drawn once and reused for every evaluation so that the
    ascent climbs a fixed surface instead of chasing resampling noise.
    """

    def __init__(self, gen: GenerativeConfig, budget: int, seed: int):
        if budget < 1:
            raise ValueError("budget must be a positive integer")
        rng = make_rng(seed)
        z = rng.standard_normal((budget, gen.p))
        self.x = gen.cov.transform(z)
        self.label_probs = sigmoid(gen.beta * (self.x @ gen.concrete_theta_star()))
        self.budget = budget

    def value(self, theta: np.ndarray) -> float:
        return float(np.mean(_mixture_loss(self.x @ theta, self.label_probs)))

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        residual = sigmoid(self.x @ theta) - self.label_probs
        return self.x.T @ residual / self.budget

    def stderr_at(self, theta: np.ndarray) -> float:
        losses = _mixture_loss(self.x @ theta, self.label_probs)
        if self.budget == 1:
            return float("inf")
        return float(np.std(losses, ddof=1) / np.sqrt(self.budget))


def _make_population_risk(gen: GenerativeConfig, budget: int, seed: int):
    if gen.p <= 2:
        return _QuadraturePopulationRisk(gen)
    return _SampledPopulationRisk(gen, budget, seed)


def _uniform_ball(p: int, radius: float, count: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((count, p))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    radii = radius * rng.random(count) ** (1.0 / p)
    return g * radii[:, None]


def sup_deviation_search(
    data: Dataset,
    gen: GenerativeConfig,
    radius: float,
    starts: int,
    budget: int,
    seed: int,
    ascent_iters: int = ASCENT_ITERS,
) -> DeviationEstimate:
    """Multistart projected ascent on +/-(R_n - Rhat) over the ball.

    Start points are `starts` uniform draws from the ball plus the origin
    and +/-theta_star (projected to the ball) when available.  The best
    absolute gap over every iterate visited is returned; it lower-bounds
    the true sup up to the Monte Carlo error of Rhat.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if starts < 1:
        raise ValueError("starts must be a positive integer")
    if gen.p != data.p:
        raise ValueError("generative config dimension does not match data")

    pop = _make_population_risk(gen, budget, derive_seed(seed, 0x9E3779B9))

    if radius == 0.0:
        theta0 = np.zeros(data.p)
        gap = abs(empirical_risk(data, theta0) - pop.value(theta0))
        return DeviationEstimate(gap, theta0, "multistart_ascent", starts, pop.stderr_at(theta0))

    rng = make_rng(derive_seed(seed, 0x51ED270))
    start_points = [np.zeros(data.p)]
    if not isinstance(gen.theta_star, str):
        anchor = project_to_ball(gen.concrete_theta_star(), radius)
        start_points.extend([anchor, -anchor])
    start_points.extend(_uniform_ball(data.p, radius, starts, rng))

    best_value = -np.inf
    best_theta = np.zeros(data.p)

    for start in start_points:
        for sign in (1.0, -1.0):
            theta = np.asarray(start, dtype=float).copy()
            for k in range(1, ascent_iters + 1):
                gap = empirical_risk(data, theta) - pop.value(theta)
                if abs(gap) > best_value:
                    best_value = abs(gap)
                    best_theta = theta.copy()
                ascent = sign * (risk_gradient(data, theta) - pop.gradient(theta))
                theta = project_to_ball(theta + (ASCENT_STEP / np.sqrt(k)) * ascent, radius)
            gap = empirical_risk(data, theta) - pop.value(theta)
            if abs(gap) > best_value:
                best_value = abs(gap)
                best_theta = theta.copy()

    return DeviationEstimate(
        float(best_value), best_theta, "multistart_ascent", starts, pop.stderr_at(best_theta)
    )


def sup_deviation_grid(
    data: Dataset,
    gen: GenerativeConfig,
    radius: float,
    resolution: int,
) -> DeviationEstimate:
    """Exhaustive grid oracle over the bounding box of the ball (p <= 2 only)."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if gen.p != data.p:
        raise ValueError("generative config dimension does not match data")
    if data.p > 2:
        raise ValueError("grid oracle supports p <= 2 only")

    if radius == 0.0:
        theta0 = np.zeros(data.p)
        pop = _QuadraturePopulationRisk(gen)
        gap = abs(empirical_risk(data, theta0) - pop.value(theta0))
        return DeviationEstimate(gap, theta0, "grid", 1, 0.0)

    pop = _QuadraturePopulationRisk(gen)
    axis = np.linspace(-radius, radius, resolution)
    if data.p == 1:
        thetas = axis[:, None]
    else:
        g1, g2 = np.meshgrid(axis, axis, indexing="ij")
        thetas = np.stack([g1.ravel(), g2.ravel()], axis=1)
        thetas = thetas[np.einsum("ij,ij->i", thetas, thetas) <= radius**2]

    best_value = -np.inf
    best_theta = np.zeros(data.p)
    chunk = max(1, int(2**22 // max(pop.x_nodes.shape[0], 1)))
    for lo in range(0, thetas.shape[0], chunk):
        block = thetas[lo : lo + chunk]
        scores = data.inputs @ block.T  # (n, m)
        y = data.labels[:, None]
        emp = np.mean(y * softplus(-scores) + (1 - y) * softplus(scores), axis=0)
        gaps = np.abs(emp - pop.value_many(block))
        idx = int(np.argmax(gaps))
        if gaps[idx] > best_value:
            best_value = float(gaps[idx])
            best_theta = block[idx].copy()

    return DeviationEstimate(best_value, best_theta, "grid", thetas.shape[0], 0.0)
