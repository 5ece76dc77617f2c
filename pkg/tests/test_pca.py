import math

import numpy as np
import pytest

from gridscan.data import _Stream
from gridscan.errors import DegenerateCovariance, InvalidDimension
from gridscan.geometry import Dataset
from gridscan.pca import pca_fit

from oracles import covariance, jacobi_eigenvalues


def anisotropic_gaussian(J=2000, ratio=10.0, angle_deg=30.0, seed=0):
    z = _Stream(seed).normal((J, 2)) * [ratio, 1.0]
    t = math.radians(angle_deg)
    rot = np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
    return z @ rot.T, np.array([math.cos(t), math.sin(t)])


def angle_between_axes(u, v):
    c = abs(float(u @ v)) / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.degrees(math.acos(min(1.0, c)))


def test_diagonal_rank_one():
    pts = [(i / 9, i / 9) for i in range(10)]
    axes = pca_fit(Dataset(pts), 2)
    assert angle_between_axes(axes.axes[0], np.array([1.0, 1.0])) < 1e-6
    assert axes.variances[1] == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(axes.axes @ axes.axes.T, np.eye(2), atol=1e-8)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_anisotropic_long_axis(seed):
    pts, long_axis = anisotropic_gaussian(seed=seed)
    axes = pca_fit(pts, 1)
    assert angle_between_axes(axes.axes[0], long_axis) < 2.0


def test_isotropic_variances_close():
    pts = _Stream(5).normal((4000, 3))
    v = pca_fit(pts, 3).variances
    assert v.max() / v.min() < 1.15
    assert np.all(np.diff(v) <= 0)


def test_jacobi_oracle_agrees_with_lapack():
    # guards the oracle itself
    m = np.random.default_rng(0).normal(size=(5, 5))
    sym = m + m.T
    assert np.allclose(jacobi_eigenvalues(sym), sorted(np.linalg.eigvalsh(sym), reverse=True), atol=1e-10)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("seed", range(4))
def test_power_iteration_matches_jacobi(N, seed):
    rng = np.random.default_rng(100 * N + seed)
    pts = rng.normal(size=(200, N)) * rng.uniform(0.2, 3.0, size=N)
    expected = jacobi_eigenvalues(covariance(pts))
    got = pca_fit(pts, N).variances
    assert np.allclose(got, expected, rtol=1e-6, atol=0)


@pytest.mark.parametrize("N", [2, 4, 6])
def test_full_reconstruction(N):
    pts = np.random.default_rng(N).random((150, N))
    axes = pca_fit(pts, N)
    assert np.allclose(axes.axes @ axes.axes.T, np.eye(N), atol=1e-8)
    back = axes.reconstruct(axes.project(pts))
    assert np.max(np.abs(back - pts)) < 1e-8


def test_errors():
    with pytest.raises(DegenerateCovariance):
        pca_fit(np.full((5, 3), 0.2), 1)
    with pytest.raises(DegenerateCovariance):
        pca_fit(np.zeros((1, 2)), 1)
    with pytest.raises(InvalidDimension):
        pca_fit(np.random.default_rng(0).random((10, 2)), 3)
