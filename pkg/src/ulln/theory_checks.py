"""Numerical verification of the Gaussian-analysis identities behind the
uniform concentration bound.

Checks covered:

* Stein/Hermite integration-by-parts identities over a fixed catalog of
  test functions (polynomials, the logistic link, its derivative, and an
  affine-composed link);
* the heat-semigroup smoothing identity
      int_0^t s^{-1} E[f(sqrt(s) z)(z^2 - 1)] ds = 2(E[f(sqrt(t) z)] - f(0)),
  integrated after the substitution s = exp(-2r) that removes the 1/s
  singularity;
* the second-order (Ito) expansion of the smoothed logistic loss;
* the Kullback-Leibler divergence of shifted isotropic Gaussians;
* the moment bound for the subgaussian width envelope of the loss;
* the absolute third-Hermite moment E|z^3 - 3z|, integrated piecewise
  across its kinks at 0 and +/-sqrt(3);
* the centered, time-integrated Laplacian gap functional and the
  expected-supremum bound 2R sqrt(tr(Sigma)/n) it satisfies.

Every Monte Carlo assertion uses a 3-standard-error tolerance and a
stream seeded from the check name, so the suite is deterministic.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .bounds import BoundParams
from .datagen import CovarianceSpec, make_covariance, make_rng
from .model import Dataset, per_example_loss, sigmoid, sigmoid_derivative
from .quadrature import (
    gauss_hermite,
    gauss_hermite_tensor,
    legendre_interval,
    legendre_panels,
)
from .solver import project_to_ball

HERMITE_NODES = 128
LOG2 = math.log(2.0)


def _seed_from_name(name: str) -> int:
    digest = hashlib.blake2s(name.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class GaussianSmoothing:
    """Law N(center, time * I): a Brownian motion at `time` started at `center`."""

    center: np.ndarray
    time: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(-1)
        object.__setattr__(self, "center", center)
        if self.time <= 0:
            raise ValueError("time must be > 0")

    @property
    def p(self) -> int:
        return self.center.size


@dataclass(frozen=True)
class CheckReport:
    name: str
    lhs: float
    rhs: float
    abs_residual: float
    tolerance: float
    passed: bool


def _equality_report(name: str, lhs: float, rhs: float, tolerance: float) -> CheckReport:
    residual = abs(lhs - rhs)
    return CheckReport(name, float(lhs), float(rhs), float(residual), float(tolerance), residual <= tolerance)


def _hinge_report(name: str, lhs: float, rhs: float, residual: float) -> CheckReport:
    """Inequality-style check: residual is the (already margin-adjusted)
    constraint violation, so passing means residual == 0."""
    residual = float(max(0.0, residual))
    return CheckReport(name, float(lhs), float(rhs), residual, 0.0, residual <= 0.0)


# ---------------------------------------------------------------------------
# test-function catalog

def _sigmoid_second(t):
    s1 = sigmoid_derivative(t)
    return s1 * (1.0 - 2.0 * sigmoid(t))


def _sigmoid_third(t):
    s1 = sigmoid_derivative(t)
    return s1 * (1.0 - 2.0 * sigmoid(t)) ** 2 - 2.0 * s1**2


_AFFINE_SHIFT, _AFFINE_SCALE = 0.3, 0.75


@dataclass(frozen=True)
class CatalogFunction:
    f: Callable
    d1: Callable
    d2: Callable


CATALOG: dict[str, CatalogFunction] = {
    "poly2": CatalogFunction(lambda x: x**2, lambda x: 2.0 * x, lambda x: 2.0 * np.ones_like(x)),
    "poly3": CatalogFunction(lambda x: x**3, lambda x: 3.0 * x**2, lambda x: 6.0 * x),
    "poly4": CatalogFunction(lambda x: x**4, lambda x: 4.0 * x**3, lambda x: 12.0 * x**2),
    "sigmoid": CatalogFunction(sigmoid, sigmoid_derivative, _sigmoid_second),
    "sigmoid_bump": CatalogFunction(sigmoid_derivative, _sigmoid_second, _sigmoid_third),
    "sigmoid_affine": CatalogFunction(
        lambda x: sigmoid(_AFFINE_SHIFT + _AFFINE_SCALE * x),
        lambda x: _AFFINE_SCALE * sigmoid_derivative(_AFFINE_SHIFT + _AFFINE_SCALE * x),
        lambda x: _AFFINE_SCALE**2 * _sigmoid_second(_AFFINE_SHIFT + _AFFINE_SCALE * x),
    ),
}


def _hermite_poly(degree: int, x: np.ndarray) -> np.ndarray:
    if degree == 0:
        return np.ones_like(x)
    if degree == 1:
        return x
    if degree == 2:
        return x**2 - 1.0
    if degree == 3:
        return x**3 - 3.0 * x
    raise ValueError("Hermite degree supported up to 3")


def _catalog_entry(name) -> tuple[CatalogFunction, str]:
    if isinstance(name, CatalogFunction):
        return name, "custom"
    try:
        return CATALOG[name], name
    except KeyError:
        raise ValueError(f"unknown catalog function: {name!r}") from None


def hermite_identity_residual(name, d: int, order: str = "first") -> CheckReport:
    """Gauss-Hermite check of E[f^(k)(z) H_d(z)] = E[f(z) H_{d+k}(z)].

    ``name`` is a catalog id, or a CatalogFunction for ad-hoc payloads.
    """
    fn, name = _catalog_entry(name)
    if order == "first":
        if d not in (0, 1, 2):
            raise ValueError("first-order identity requires d in {0, 1, 2}")
        derivative, shift = fn.d1, 1
    elif order == "second":
        if d not in (0, 1):
            raise ValueError("second-order identity requires d in {0, 1}")
        derivative, shift = fn.d2, 2
    else:
        raise ValueError("order must be 'first' or 'second'")
    z, w = gauss_hermite(HERMITE_NODES)
    lhs = float(w @ (np.asarray(derivative(z)) * _hermite_poly(d, z)))
    rhs = float(w @ (np.asarray(fn.f(z)) * _hermite_poly(d + shift, z)))
    return _equality_report(f"hermite:{name}:d{d}:{order}", lhs, rhs, 1e-10)


SMOOTHING_TAIL_LENGTH = 16.0  # integrand decays like exp(-2(r - r0)); tail < 1e-12


def smoothing_identity_residual(name, t: float) -> CheckReport:
    """Check the heat-semigroup identity for a catalog function at time t.

    The s-integral is evaluated after the substitution s = exp(-2r), under
    which the 1/s factor cancels and the domain becomes the half line
    [log(1/sqrt(t)), inf); the tail is truncated where it falls below
    1e-12 and the rest is integrated by composite Gauss-Legendre panels.
    ``name`` is a catalog id, or a CatalogFunction for ad-hoc payloads.
    """
    fn, name = _catalog_entry(name)
    if not 0.0 < t <= 1.0:
        raise ValueError("t must lie in (0, 1]")
    z, w = gauss_hermite(HERMITE_NODES)
    h2 = z**2 - 1.0

    r0 = math.log(1.0 / math.sqrt(t))
    r_nodes, r_weights = legendre_panels(r0, r0 + SMOOTHING_TAIL_LENGTH, panels=16, n=24)
    # inner expectation for every r node at once: rows scale exp(-r)
    scaled = np.exp(-r_nodes)[:, None] * z[None, :]
    inner = np.asarray(fn.f(scaled)) * h2[None, :] @ w
    lhs = 2.0 * float(r_weights @ inner)
    rhs = 2.0 * (float(w @ np.asarray(fn.f(math.sqrt(t) * z))) - float(np.asarray(fn.f(np.zeros(1)))[0]))
    return _equality_report(f"smoothing:{name}:t{t:g}", lhs, rhs, 1e-8)


_ITO_AXIS_NODES = {1: 160, 2: 80, 3: 44}


def ito_expansion_residual(
    data: Dataset,
    smoothing: GaussianSmoothing,
    mc_samples: int = 0,
    seed: int | None = None,
    payload: str = "logistic",
) -> CheckReport:
    """Check E[f(W_t)] = f(theta) + (1/2) int_0^t E[Laplacian f(W_s)] ds.

    The left side integrates the payload against N(theta, t I) with a
    tensorized Gauss-Hermite rule (p <= 3); the right side integrates the
    pointwise Laplacian over s with adaptive quadrature.  With
    ``mc_samples > 0`` the left side is estimated by Monte Carlo instead
    and the tolerance widens to three standard errors.
    """
    theta, t = smoothing.center, smoothing.time
    p = smoothing.p
    if p > 3:
        raise ValueError("quadrature check supports p <= 3 only")
    if payload == "logistic":
        if data.n != 1:
            raise ValueError("the logistic payload expects a single-row dataset")
        if data.p != p:
            raise ValueError("data dimension does not match the smoothing center")
        x_row = data.inputs[0]
        y = float(data.labels[0])
        x_norm_sq = float(x_row @ x_row)
        x_norm = math.sqrt(x_norm_sq)
        mu = float(x_row @ theta)

        def f_of(w_points):  # (m, p) -> (m,)
            return per_example_loss(y, w_points @ x_row)

        f_at_theta = float(per_example_loss(y, mu))
        z1, w1 = gauss_hermite(HERMITE_NODES)

        def laplacian_mean(s):
            if x_norm_sq == 0.0:
                return 0.0
            return x_norm_sq * float(w1 @ sigmoid_derivative(mu + math.sqrt(s) * x_norm * z1))

        integral, _ = integrate.quad(laplacian_mean, 0.0, t, epsabs=1e-12, epsrel=1e-12, limit=200)
        rhs = f_at_theta + 0.5 * integral
    elif payload == "quadratic":
        def f_of(w_points):
            return np.einsum("ij,ij->i", w_points, w_points)

        rhs = float(theta @ theta) + p * t  # Laplacian is the constant 2p
    else:
        raise ValueError("payload must be 'logistic' or 'quadratic'")

    suffix = ""
    if mc_samples > 0:
        rng = make_rng(_seed_from_name(f"ito:{payload}") if seed is None else seed)
        draws = theta[None, :] + math.sqrt(t) * rng.standard_normal((mc_samples, p))
        values = f_of(draws)
        lhs = float(np.mean(values))
        stderr = float(np.std(values, ddof=1) / math.sqrt(mc_samples))
        tolerance = max(1e-6, 3.0 * stderr)
        suffix = ":mc"
    else:
        nodes, weights = gauss_hermite_tensor(_ITO_AXIS_NODES[p], p)
        w_points = theta[None, :] + math.sqrt(t) * nodes
        lhs = float(weights @ f_of(w_points))
        tolerance = 1e-6

    return _equality_report(f"ito:{payload}:p{p}:t{t:g}{suffix}", lhs, rhs, tolerance)


def kl_gaussian_shift(theta: np.ndarray, t: float) -> CheckReport:
    """Closed form ||theta||^2/(2t) against the generic Gaussian KL formula."""
    if t <= 0:
        raise ValueError("t must be > 0")
    theta = np.asarray(theta, dtype=float).reshape(-1)
    p = theta.size
    closed = float(theta @ theta) / (2.0 * t)

    cov = t * np.eye(p)
    diff = theta
    _, logdet = np.linalg.slogdet(cov)
    direct = 0.5 * (
        float(np.trace(np.linalg.solve(cov, cov)))
        - p
        + float(diff @ np.linalg.solve(cov, diff))
        + logdet
        - logdet
    )
    return _equality_report(f"kl_shift:p{p}:t{t:g}", direct, closed, 1e-12)


def envelope_moment_check(
    params: BoundParams,
    smoothing: GaussianSmoothing,
    cov: CovarianceSpec,
    mc_samples: int,
    seed: int | None = None,
    label: str = "",
) -> CheckReport:
    """Monte Carlo check of the smoothed subgaussian-envelope moment bound.

    Estimates E[eta^2(W_t)] for
        eta^2(w) = (72/e) (log 2 + (1 + sqrt(3) K) ||Lambda^{1/2} U^T w||)^2
    and asserts, with a 3-standard-error margin, that it stays below
        (144/e) (1 + (1 + sqrt(3) K)^2 (t tr(Sigma) + ||Sigma|| R^2))
    for centers inside the radius-R ball.  The second moment of
    ||Lambda^{1/2} U^T W_t|| is verified against t tr(Sigma) + <Sigma
    theta, theta> along the way; a violation of either part fails the check.
    """
    if mc_samples < 2:
        raise ValueError("mc_samples must be >= 2")
    theta, t = smoothing.center, smoothing.time
    if cov.p != smoothing.p:
        raise ValueError("covariance dimension does not match the smoothing center")
    if float(np.linalg.norm(theta)) > params.R + 1e-12:
        raise ValueError("smoothing center must lie inside the radius-R ball")

    c = 1.0 + math.sqrt(3.0) * params.K
    rng = make_rng(_seed_from_name("envelope") if seed is None else seed)
    draws = theta[None, :] + math.sqrt(t) * rng.standard_normal((mc_samples, cov.p))
    norms = np.linalg.norm(cov.whiten_directions(draws), axis=1)

    eta_sq = (72.0 / math.e) * (LOG2 + c * norms) ** 2
    mean_eta = float(np.mean(eta_sq))
    se_eta = float(np.std(eta_sq, ddof=1) / math.sqrt(mc_samples))
    bound = (144.0 / math.e) * (1.0 + c**2 * (t * cov.trace + cov.spectral_norm * params.R**2))

    second = norms**2
    mean_second = float(np.mean(second))
    se_second = float(np.std(second, ddof=1) / math.sqrt(mc_samples))
    expected_second = t * cov.trace + float(cov.whiten_directions(theta) @ cov.whiten_directions(theta))

    violation = max(
        mean_eta + 3.0 * se_eta - bound,
        abs(mean_second - expected_second) - 3.0 * se_second,
    )
    suffix = f":{label}" if label else ""
    return _hinge_report(f"envelope:p{cov.p}:t{t:g}{suffix}", mean_eta, bound, violation)


HERMITE3_CLOSED_FORM = (1.0 + 4.0 * math.exp(-1.5)) * math.sqrt(2.0 / math.pi)
HERMITE3_STRICT_BOUND = 2.0 * math.sqrt(2.0 / math.pi)
_ABS_MOMENT_CUTOFF = 12.0  # (x^2-1)*phi(x) beyond 12 is ~1e-30


def hermite3_abs_moment(nodes: int = 128) -> CheckReport:
    """E|z^3 - 3z| by piecewise quadrature against its closed form.

    |x^3 - 3x| has kinks at 0 and +/-sqrt(3), so the integral is assembled
    from Gauss-Legendre rules on [0, sqrt(3)] and [sqrt(3), cutoff] (the
    integrand is even).  Passing also requires the strict inequality
    E|z^3 - 3z| < 2 sqrt(2/pi) used downstream.
    """
    root = math.sqrt(3.0)

    def density(x):
        return np.exp(-0.5 * x**2) / math.sqrt(2.0 * math.pi)

    total = 0.0
    for a, b in ((0.0, root), (root, _ABS_MOMENT_CUTOFF)):
        x, w = legendre_interval(a, b, nodes)
        total += float(w @ (np.abs(x**3 - 3.0 * x) * density(x)))
    value = 2.0 * total

    residual = max(abs(value - HERMITE3_CLOSED_FORM), max(0.0, value - HERMITE3_STRICT_BOUND))
    return CheckReport(
        "hermite3_abs_moment", value, HERMITE3_CLOSED_FORM, residual, 1e-10, residual <= 1e-10
    )


# ---------------------------------------------------------------------------
# centered Laplacian gap functional and its expected-supremum bound


class _GapSurface:
    """Value/gradient of the centered time-integrated Laplacian gap.

    The surface is built from fixed data rows (weight +1/(2n)) and a
    frozen reference sample (weight -1/(2m)); both enter through the same
    inner 1-D Gauss-Hermite expectation, with the s-integral on a fixed
    composite Gauss-Legendre grid.
    """

    def __init__(self, z_rows: np.ndarray, ref_rows: np.ndarray, t: float, cov: CovarianceSpec,
                 s_panels: int = 8, s_nodes: int = 12, hermite_nodes: int = 48):
        n, m = z_rows.shape[0], ref_rows.shape[0]
        rows = np.vstack([z_rows, ref_rows])
        self.coef = np.concatenate([np.full(n, 0.5 / n), np.full(m, -0.5 / m)])
        self.directions = cov.transform(rows)  # rows U Lambda^{1/2} z_i
        self.lambda_sq = (rows**2) @ cov.eigenvalues  # <Lambda z_i, z_i>
        self.s_nodes, self.s_weights = legendre_panels(0.0, t, s_panels, s_nodes)
        self.z_nodes, self.z_weights = gauss_hermite(hermite_nodes)
        # scale[i, s] = sqrt(s * lambda_sq_i)
        self.scale = np.sqrt(self.s_nodes[None, :] * self.lambda_sq[:, None])

    def _row_integrals(self, theta: np.ndarray, kernel) -> np.ndarray:
        mu = self.directions @ theta  # (rows,)
        args = mu[:, None, None] + self.scale[:, :, None] * self.z_nodes[None, None, :]
        inner = kernel(args) @ self.z_weights  # (rows, s)
        return inner @ self.s_weights  # (rows,)

    def value(self, theta: np.ndarray) -> float:
        integrals = self._row_integrals(theta, sigmoid_derivative)
        return float(np.sum(self.coef * self.lambda_sq * integrals))

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        integrals = self._row_integrals(theta, _sigmoid_second)
        return self.directions.T @ (self.coef * self.lambda_sq * integrals)

    def value_many(self, thetas: np.ndarray) -> np.ndarray:
        mus = self.directions @ thetas.T  # (rows, m)
        out = np.zeros(thetas.shape[0])
        row_weight = self.coef * self.lambda_sq
        for s_idx in range(self.s_nodes.size):
            args = mus[:, :, None] + self.scale[:, s_idx, None, None] * self.z_nodes[None, None, :]
            inner = sigmoid_derivative(args) @ self.z_weights  # (rows, m)
            out += self.s_weights[s_idx] * (row_weight @ inner)
        return out


def laplacian_gap_functional(
    z: np.ndarray,
    theta: np.ndarray,
    t: float,
    cov: CovarianceSpec,
    ref_samples: int,
    seed: int,
) -> float:
    """Evaluate the centered Laplacian gap of a fixed latent sample z.

    The per-row expectation over the smoothing Gaussian reduces to a 1-D
    Gauss-Hermite integral of sigma(1-sigma); the time integral is done
    adaptively.  The centering term is estimated over ``ref_samples``
    fresh draws from the reference (standard normal) law with the same
    inner quadrature, so the functional has mean zero over z.
    """
    if not 0.0 < t <= 1.0:
        raise ValueError("t must lie in (0, 1]")
    if ref_samples < 1:
        raise ValueError("ref_samples must be a positive integer")
    z = np.atleast_2d(np.asarray(z, dtype=float))
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if z.shape[1] != cov.p or theta.size != cov.p:
        raise ValueError("dimension mismatch between z, theta, and the covariance")

    rng = make_rng(seed)
    rows = np.vstack([z, rng.standard_normal((ref_samples, cov.p))])
    coef = np.concatenate([np.full(z.shape[0], 0.5 / z.shape[0]), np.full(ref_samples, -0.5 / ref_samples)])
    lambda_sq = (rows**2) @ cov.eigenvalues
    mu = cov.transform(rows) @ theta
    z_nodes, z_weights = gauss_hermite(HERMITE_NODES)

    def integrand(s):
        args = mu[:, None] + np.sqrt(s * lambda_sq)[:, None] * z_nodes[None, :]
        return sigmoid_derivative(args) @ z_weights

    integrals, _ = integrate.quad_vec(integrand, 0.0, t, epsabs=1e-11, epsrel=1e-11)
    return float(np.sum(coef * lambda_sq * integrals))


EXPSUP_PROBES = 48
EXPSUP_REF_SAMPLES = 160
EXPSUP_ASCENT_ITERS = 40
EXPSUP_POLISH_TOP = 3


def expsup_gap_check(
    p: int,
    n: int,
    t: float,
    radius: float,
    cov: CovarianceSpec,
    replicates: int,
    seed: int,
) -> CheckReport:
    """Estimate E_Z[sup over the ball of the Laplacian gap] and test it
    against the bound 2R sqrt(tr(Sigma)/n) (plus 3 standard errors).

    Each replicate draws a fresh latent sample and reference pool, scans
    random probes of the ball, and polishes the best probes by projected
    ascent; the replicate maxima are averaged.  The search only ever
    underestimates the sup, which is the safe direction for checking an
    upper bound.
    """
    if p > 5:
        raise ValueError("supremum search supports p <= 5 only")
    if not 0.0 < t <= 1.0:
        raise ValueError("t must lie in (0, 1]")
    if replicates < 2:
        raise ValueError("replicates must be >= 2")
    if cov.p != p:
        raise ValueError("covariance dimension does not match p")

    rng = make_rng(seed)
    sups = np.empty(replicates)
    for rep in range(replicates):
        z_rows = rng.standard_normal((n, p))
        ref_rows = rng.standard_normal((EXPSUP_REF_SAMPLES, p))
        surface = _GapSurface(z_rows, ref_rows, t, cov)

        probes = [np.zeros(p)]
        if radius > 0:
            g = rng.standard_normal((EXPSUP_PROBES, p))
            g /= np.linalg.norm(g, axis=1, keepdims=True)
            radii = radius * np.concatenate(
                [np.ones(EXPSUP_PROBES // 2), rng.random(EXPSUP_PROBES - EXPSUP_PROBES // 2) ** (1.0 / p)]
            )
            probes.extend(g * radii[:, None])
        probes = np.asarray(probes)
        values = surface.value_many(probes)
        best = float(np.max(values))

        if radius > 0:
            for idx in np.argsort(values)[-EXPSUP_POLISH_TOP:]:
                theta = probes[idx].copy()
                for k in range(1, EXPSUP_ASCENT_ITERS + 1):
                    theta = project_to_ball(theta + (0.1 / math.sqrt(k)) * surface.gradient(theta), radius)
                best = max(best, surface.value(theta))
        sups[rep] = best

    mean_sup = float(np.mean(sups))
    stderr = float(np.std(sups, ddof=1) / math.sqrt(replicates))
    bound = 2.0 * radius * math.sqrt(cov.trace / n)
    violation = mean_sup - bound - 3.0 * stderr
    return _hinge_report(f"expsup:p{p}:n{n}:R{radius:g}:t{t:g}", mean_sup, bound, violation)


def gap_centering_check(
    p: int,
    n: int,
    t: float,
    cov: CovarianceSpec,
    draws: int,
    seed: int,
) -> CheckReport:
    """Average the gap functional over fresh latent samples; the mean must
    vanish within 3 standard errors by construction."""
    rng = make_rng(seed)
    theta = project_to_ball(rng.standard_normal(p), 1.0)
    values = np.empty(draws)
    for i in range(draws):
        z = rng.standard_normal((n, p))
        values[i] = laplacian_gap_functional(z, theta, t, cov, ref_samples=256, seed=seed + 7 * i + 1)
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(draws))
    return _hinge_report(f"gap_centering:p{p}:n{n}:t{t:g}", mean, 0.0, abs(mean) - 3.0 * stderr)


# ---------------------------------------------------------------------------
# suites

SUITE_NAMES = ("all", "hermite", "smoothing", "ito", "moments", "g")


def _hermite_suite() -> list[CheckReport]:
    return [hermite_identity_residual(name, d, "first") for name in CATALOG for d in (0, 1, 2)]


def _smoothing_suite() -> list[CheckReport]:
    return [smoothing_identity_residual(name, t) for name in CATALOG for t in (0.1, 0.5, 1.0)]


def _ito_suite() -> list[CheckReport]:
    row = Dataset(np.array([[1.5]]), np.array([1]))
    reports = [
        ito_expansion_residual(row, GaussianSmoothing(np.array([0.2]), 1e-8)),
        ito_expansion_residual(row, GaussianSmoothing(np.array([0.2]), 0.5)),
        ito_expansion_residual(
            row, GaussianSmoothing(np.array([0.2]), 0.5), mc_samples=200_000,
            seed=_seed_from_name("ito:logistic:mc"),
        ),
        ito_expansion_residual(
            Dataset(np.array([[0.8, -0.4]]), np.array([0])),
            GaussianSmoothing(np.array([0.1, -0.3]), 0.8),
            payload="quadratic",
        ),
        ito_expansion_residual(
            Dataset(np.array([[0.9, -0.7, 0.4]]), np.array([1])),
            GaussianSmoothing(np.array([0.3, 0.1, -0.2]), 0.3),
        ),
    ]
    return reports


def _moments_suite() -> list[CheckReport]:
    rng = make_rng(_seed_from_name("moments:theta"))
    theta7 = rng.standard_normal(7)
    params = BoundParams(n=100, R=1.0, delta=0.05, trace_sigma=1.0, norm_sigma=1.0)
    rec4 = make_covariance("reciprocal", 4)
    sphere_center = np.array([0.5, -0.5, 0.5, -0.5])  # on the unit sphere
    reports = [
        kl_gaussian_shift(np.zeros(3), 1.0),
        kl_gaussian_shift(np.array([0.6, -0.8]), 0.5),
        kl_gaussian_shift(theta7, 0.3),
        hermite3_abs_moment(),
        envelope_moment_check(
            params,
            GaussianSmoothing(np.zeros(4), 0.5),
            CovarianceSpec(np.zeros(4)),
            mc_samples=10_000,
            seed=_seed_from_name("envelope:flat"),
            label="flat",
        ),
        envelope_moment_check(
            params,
            GaussianSmoothing(sphere_center, 0.25),
            rec4,
            mc_samples=200_000,
            seed=_seed_from_name("envelope:sphere"),
            label="sphere",
        ),
        envelope_moment_check(
            params,
            GaussianSmoothing(np.zeros(4), 0.25),
            rec4,
            mc_samples=300_000,
            seed=_seed_from_name("envelope:origin"),
            label="origin",
        ),
    ]
    return reports


def _g_suite() -> list[CheckReport]:
    rec3 = make_covariance("reciprocal", 3)
    return [
        gap_centering_check(2, 8, 0.5, make_covariance("reciprocal", 2), draws=48,
                            seed=_seed_from_name("gap_centering")),
        expsup_gap_check(3, 50, 1.0, 1.0, rec3, replicates=12, seed=_seed_from_name("expsup:main")),
        expsup_gap_check(3, 50, 1.0, 0.0, rec3, replicates=4, seed=_seed_from_name("expsup:degenerate")),
    ]


def run_suite(name: str) -> list[CheckReport]:
    """Run one named check suite (or all of them) and return the reports."""
    suites = {
        "hermite": _hermite_suite,
        "smoothing": _smoothing_suite,
        "ito": _ito_suite,
        "moments": _moments_suite,
        "g": _g_suite,
    }
    if name == "all":
        reports = []
        for key in ("hermite", "smoothing", "ito", "moments", "g"):
            reports.extend(suites[key]())
        return reports
    if name not in suites:
        raise ValueError(f"unknown suite: {name!r}")
    return suites[name]()


def format_report(report: CheckReport) -> str:
    status = "PASS" if report.passed else "FAIL"
    return (
        f"{status}  {report.name:40s} lhs={report.lhs: .12e} rhs={report.rhs: .12e} "
        f"residual={report.abs_residual:.3e} tol={report.tolerance:.3e}"
    )
