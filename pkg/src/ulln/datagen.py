"""Anisotropic Gaussian data generation for constrained logistic regression.

Inputs are X_i = U Lambda^{1/2} Z_i with Z_i standard normal, labels
Y_i ~ Ber(sigma(beta <X_i, theta*>)).  All randomness flows through
counter-based Philox streams keyed by integer seeds, so generation is
bit-reproducible and independent of thread schedule; per-replicate
streams are derived by hashing (seed, index, ...) tuples.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .model import Dataset, sigmoid

MAGIC = b"ULLN"
FORMAT_VERSION = 1
ORTHOGONALITY_TOL = 1e-10

UNIFORM_SPHERE = "uniform_sphere"


def derive_seed(*parts: int) -> int:
    """Deterministically hash integer parts into one 64-bit stream key."""
    masked = [int(p) & 0xFFFFFFFFFFFFFFFF for p in parts]
    return int(np.random.SeedSequence(masked).generate_state(1, np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator for the given stream key."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF)))


@dataclass(frozen=True)
class CovarianceSpec:
    """Eigenvalue spectrum plus optional rotation: Sigma = U diag(lambda) U^T."""

    eigenvalues: np.ndarray
    rotation: np.ndarray | None = None

    def __post_init__(self):
        eig = np.asarray(self.eigenvalues, dtype=float).reshape(-1)
        object.__setattr__(self, "eigenvalues", eig)
        if eig.size < 1:
            raise ValueError("eigenvalue spectrum must be non-empty")
        if not np.all(np.isfinite(eig)) or np.any(eig < 0):
            raise ValueError("eigenvalues must be finite and >= 0")
        if self.rotation is not None:
            u = np.asarray(self.rotation, dtype=float)
            object.__setattr__(self, "rotation", u)
            if u.shape != (eig.size, eig.size):
                raise ValueError("rotation must be p x p")
            if np.max(np.abs(u.T @ u - np.eye(eig.size))) > ORTHOGONALITY_TOL:
                raise ValueError("rotation must be orthogonal")

    @property
    def p(self) -> int:
        return self.eigenvalues.size

    @property
    def trace(self) -> float:
        return float(np.sum(self.eigenvalues))

    @property
    def spectral_norm(self) -> float:
        return float(np.max(self.eigenvalues))

    def coordinate_variances(self) -> np.ndarray:
        """diag(Sigma); equals the spectrum when the rotation is identity."""
        if self.rotation is None:
            return self.eigenvalues.copy()
        return (self.rotation**2) @ self.eigenvalues

    def transform(self, z: np.ndarray) -> np.ndarray:
        """Map rows of isotropic z through U Lambda^{1/2}."""
        x = np.asarray(z, dtype=float) * np.sqrt(self.eigenvalues)
        if self.rotation is not None:
            x = x @ self.rotation.T
        return x

    def whiten_directions(self, w: np.ndarray) -> np.ndarray:
        """Lambda^{1/2} U^T w for rows (or a single vector) w."""
        w = np.asarray(w, dtype=float)
        if self.rotation is not None:
            w = w @ self.rotation
        return w * np.sqrt(self.eigenvalues)


def make_covariance(kind: str, p: int, eigenvalues=None) -> CovarianceSpec:
    """Build a named spectrum: reciprocal (1, 1/2, ..., 1/p), identity, or custom."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if kind == "reciprocal":
        return CovarianceSpec(1.0 / np.arange(1, p + 1))
    if kind == "identity":
        return CovarianceSpec(np.ones(p))
    if kind == "custom":
        if eigenvalues is None:
            raise ValueError("custom covariance requires eigenvalues")
        eig = np.asarray(eigenvalues, dtype=float).reshape(-1)
        if eig.size != p:
            raise ValueError(f"expected {p} eigenvalues, got {eig.size}")
        return CovarianceSpec(eig)
    raise ValueError(f"unknown covariance kind: {kind!r}")


def _unit_sphere(p: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal(p)
    return g / np.linalg.norm(g)


def sample_theta_star(p: int, seed: int) -> np.ndarray:
    """Uniform draw from the unit sphere S^{p-1}, deterministic given seed."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return _unit_sphere(p, make_rng(seed))


@dataclass(frozen=True)
class GenerativeConfig:
    """Sampling law: n draws of X = U Lambda^{1/2} Z, Y ~ Ber(sigma(beta <X, theta*>))."""

    p: int
    n: int
    cov: CovarianceSpec
    beta: float
    theta_star: np.ndarray | str = UNIFORM_SPHERE
    seed: int = 0

    def __post_init__(self):
        if self.p < 1 or self.n < 1:
            raise ValueError("p and n must be >= 1")
        if self.cov.p != self.p:
            raise ValueError("covariance dimension does not match p")
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ValueError("beta must be finite and >= 0")
        if isinstance(self.theta_star, str):
            if self.theta_star != UNIFORM_SPHERE:
                raise ValueError(f"unknown theta_star directive: {self.theta_star!r}")
        else:
            ts = np.asarray(self.theta_star, dtype=float).reshape(-1)
            object.__setattr__(self, "theta_star", ts)
            if ts.size != self.p:
                raise ValueError("theta_star dimension does not match p")

    def concrete_theta_star(self) -> np.ndarray:
        if isinstance(self.theta_star, str):
            raise ValueError("theta_star has not been resolved to a vector")
        return self.theta_star

    def with_theta_star(self, theta_star: np.ndarray) -> "GenerativeConfig":
        return GenerativeConfig(self.p, self.n, self.cov, self.beta, theta_star, self.seed)


def generate_dataset(gen: GenerativeConfig) -> tuple[Dataset, np.ndarray]:
    """Draw (Dataset, theta_star) from the config; bit-deterministic given seed."""
    root = np.random.SeedSequence(int(gen.seed) & 0xFFFFFFFFFFFFFFFF)
    theta_stream, x_stream, y_stream = (np.random.Generator(np.random.Philox(s)) for s in root.spawn(3))

    if isinstance(gen.theta_star, str):
        theta_star = _unit_sphere(gen.p, theta_stream)
    else:
        theta_star = gen.theta_star

    z = x_stream.standard_normal((gen.n, gen.p))
    x = gen.cov.transform(z)
    label_probs = sigmoid(gen.beta * (x @ theta_star))
    y = (y_stream.random(gen.n) < label_probs).astype(np.int64)
    return Dataset(x, y), theta_star


def write_dataset(path, data: Dataset, theta_star: np.ndarray) -> None:
    """Flat binary dump: little-endian header (magic "ULLN", version u32,
    n u64, p u64), row-major float64 X, Y as bytes, theta_star as float64."""
    theta_star = np.asarray(theta_star, dtype=float).reshape(-1)
    if theta_star.size != data.p:
        raise ValueError("theta_star dimension does not match data")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQQ", FORMAT_VERSION, data.n, data.p))
        fh.write(np.ascontiguousarray(data.inputs, dtype="<f8").tobytes())
        fh.write(data.labels.astype(np.uint8).tobytes())
        fh.write(theta_star.astype("<f8").tobytes())


def read_dataset(path) -> tuple[Dataset, np.ndarray]:
    """Inverse of write_dataset; validates magic and version."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise ValueError("not a ULLN dataset file (bad magic)")
    version, n, p = struct.unpack_from("<IQQ", blob, 4)
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {version}")
    offset = 4 + struct.calcsize("<IQQ")
    x_bytes = 8 * n * p
    x = np.frombuffer(blob, dtype="<f8", count=n * p, offset=offset).reshape(n, p)
    offset += x_bytes
    y = np.frombuffer(blob, dtype=np.uint8, count=n, offset=offset).astype(np.int64)
    offset += n
    theta_star = np.frombuffer(blob, dtype="<f8", count=p, offset=offset)
    return Dataset(x.copy(), y), theta_star.copy()
