"""Quadrature rules for expectations under the standard normal measure.

Everything here works with the probabilists' convention, i.e. nodes/weights
(z, w) such that

    E[f(zeta)] = int f(z) exp(-z^2/2)/sqrt(2*pi) dz ~ sum_i w_i f(z_i)

for zeta ~ N(0, 1), so no sqrt(2) change of variables is needed at call
sites.  Rules are cached since node counts are reused heavily.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def gauss_hermite(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for E[f(zeta)], zeta ~ N(0,1); weights sum to 1."""
    if n < 1:
        raise ValueError("node count must be >= 1")
    z, w = np.polynomial.hermite_e.hermegauss(n)
    return z, w / np.sqrt(2.0 * np.pi)


@lru_cache(maxsize=64)
def gauss_hermite_tensor(n: int, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensorized rule over N(0, I_dim): nodes (n^dim, dim), weights (n^dim,)."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    z, w = gauss_hermite(n)
    node_grids = np.meshgrid(*([z] * dim), indexing="ij")
    weight_grids = np.meshgrid(*([w] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in node_grids], axis=1)
    weights = np.ones(n**dim)
    for g in weight_grids:
        weights *= g.ravel()
    return nodes, weights


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [-1, 1]."""
    if n < 1:
        raise ValueError("node count must be >= 1")
    return np.polynomial.legendre.leggauss(n)


def legendre_interval(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule mapped to [a, b]."""
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


def legendre_panels(a: float, b: float, panels: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule: `panels` equal subintervals of [a, b]."""
    edges = np.linspace(a, b, panels + 1)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = legendre_interval(lo, hi, n)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)
