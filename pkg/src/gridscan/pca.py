"""Minimal PCA by power iteration with deflation.

Used as the comparison baseline for benchmarks and to project N > 2 data
onto a plane for plotting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCovariance, InvalidDimension
from .geometry import Dataset

__all__ = ["PrincipalAxes", "pca_fit", "power_iteration"]

AXIS_TOL = 1e-10
MAX_ITER = 1000


@dataclass(frozen=True)
class PrincipalAxes:
    mean: np.ndarray
    axes: np.ndarray  # (s, N), orthonormal rows
    variances: np.ndarray  # (s,), descending

    def project(self, points) -> np.ndarray:
        return (np.asarray(points, dtype=np.float64) - self.mean) @ self.axes.T

    def reconstruct(self, coords) -> np.ndarray:
        return np.asarray(coords, dtype=np.float64) @ self.axes + self.mean


def power_iteration(
    matrix: np.ndarray,
    previous: np.ndarray,
    start: np.ndarray,
    tol: float = AXIS_TOL,
    max_iter: int = MAX_ITER,
) -> tuple[np.ndarray, float, int]:
    """Dominant unit eigenvector of a symmetric PSD ``matrix`` orthogonal to
    the rows of ``previous``.

    Returns ``(vector, rayleigh_quotient, iterations)``. Stops once the
    vector moves by less than ``tol`` between iterations.
    """
    def orth(v):
        for _ in range(2):  # twice for numerical orthogonality
            v = v - previous.T @ (previous @ v)
        return v

    n = matrix.shape[0]
    v = orth(start.astype(np.float64))
    if np.linalg.norm(v) < 1e-8:
        # start lies in span(previous); fall back to the basis vector left most intact
        basis = np.eye(n) - previous.T @ previous
        v = basis[:, int(np.argmax(np.linalg.norm(basis, axis=0)))]
        v = orth(v)
    v /= np.linalg.norm(v)

    scale = max(float(np.abs(matrix).max()), np.finfo(float).tiny)
    it = 0
    for it in range(1, max_iter + 1):
        y = orth(matrix @ v)
        norm = np.linalg.norm(y)
        if norm <= 1e-14 * scale:
            # remaining spectrum is numerically zero; any orthogonal v is an eigenvector
            break
        y /= norm
        if y @ v < 0:
            y = -y
        change = np.linalg.norm(y - v)
        v = y
        if change < tol:
            break
    return v, float(v @ matrix @ v), it


def pca_fit(dataset: Dataset | np.ndarray, s: int) -> PrincipalAxes:
    """Top-``s`` principal axes of the sample covariance."""
    points = dataset.points if isinstance(dataset, Dataset) else np.asarray(dataset, dtype=np.float64)
    J, N = points.shape
    if J < 2:
        raise DegenerateCovariance("PCA needs at least two points")
    if int(s) != s or not 1 <= s <= N:
        raise InvalidDimension(f"s must be an integer in [1, {N}], got {s}")

    mean = points.mean(axis=0)
    centered = points - mean
    cov = centered.T @ centered / (J - 1)
    if not np.any(np.abs(cov) > 0):
        raise DegenerateCovariance("all points coincide; covariance is zero")

    rng = np.random.default_rng(0)
    axes = np.zeros((0, N))
    variances = []
    deflated = cov.copy()
    for _ in range(int(s)):
        v, _, _ = power_iteration(deflated, axes, rng.standard_normal(N))
        lam = max(float(v @ cov @ v), 0.0)
        variances.append(lam)
        axes = np.vstack([axes, v])
        deflated = deflated - lam * np.outer(v, v)

    variances = np.array(variances)
    order = np.argsort(-variances, kind="stable")
    return PrincipalAxes(mean=mean, axes=axes[order], variances=variances[order])
