"""Independent reference computations used only by the tests."""

import itertools
import math

import numpy as np


def dense_counts(points, a):
    """Count points in every one of the a^N cells by direct interval tests."""
    pts = np.asarray(points, dtype=float)
    scaled = pts * a
    N = pts.shape[1]
    counts = {}
    for cell in itertools.product(range(a), repeat=N):
        k = np.array(cell, dtype=float)
        upper_ok = (scaled < k + 1) | ((k == a - 1) & (scaled <= a))
        inside = np.all((scaled >= k) & upper_ok, axis=1)
        n = int(inside.sum())
        if n:
            counts[cell] = n
    return counts


def greedy_chain(cells, a, tol=1e-12):
    """Nearest-neighbor chain over cell centers, written with plain loops.

    Returns (ordered cell tuples, number of tied joining steps).
    """
    cells = sorted(tuple(int(k) for k in c) for c in cells)
    centers = {c: tuple((k + 0.5) / a for k in c) for c in cells}
    origin = tuple(0.0 for _ in cells[0])
    best = min(math.dist(origin, centers[c]) for c in cells)
    current = next(c for c in cells if math.dist(origin, centers[c]) <= best + tol)
    order, left, ties = [current], [c for c in cells if c != current], 0
    while left:
        dists = [(math.dist(centers[current], centers[c]), c) for c in left]
        dmin = min(d for d, _ in dists)
        close = sorted(c for d, c in dists if d <= dmin + tol)
        ties += len(close) > 1
        current = close[0]
        order.append(current)
        left.remove(current)
    return order, ties


def jacobi_eigenvalues(matrix, sweeps=100, tol=1e-15):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending."""
    A = np.array(matrix, dtype=float)
    n = A.shape[0]
    for _ in range(sweeps):
        off = math.sqrt(sum(A[i, j] ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= tol * max(1.0, np.abs(A).max()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2 * A[p, q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                A = J.T @ A @ J
    return sorted(np.diag(A), reverse=True)


def covariance(points):
    pts = np.asarray(points, dtype=float)
    J = len(pts)
    mean = [sum(pts[:, i]) / J for i in range(pts.shape[1])]
    c = pts - mean
    return c.T @ c / (J - 1)
