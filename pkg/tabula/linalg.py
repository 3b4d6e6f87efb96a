"""Direct solvers for the small dense systems of this package."""

import logging
from typing import Tuple

import numpy as np

from .errors import NoConvergence, RankDeficient, ShapeMismatch

logger = logging.getLogger(__name__)

PIVOT_TOLERANCE = 1e-10
JACOBI_TOLERANCE = 1e-12
JACOBI_MAX_SWEEPS = 100


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solves ``a x = b`` by Gaussian elimination with partial pivoting.

    A pivot below ``1e-10 * max(1, max|a|)`` means the system is (numerically) singular.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or b.shape[0] != n:
        raise ShapeMismatch(f"cannot solve a system with matrix {a.shape} and right side {b.shape}")
    tolerance = PIVOT_TOLERANCE * max(1.0, float(np.abs(a).max(initial=0.0)))
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[pivot, col]) < tolerance:
            raise RankDeficient(f"pivot {abs(a[pivot, col]):.3g} in column {col} is below {tolerance:.3g}")
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            b[[col, pivot]] = b[[pivot, col]]
        factors = a[col + 1 :, col] / a[col, col]
        a[col + 1 :, col:] -= np.outer(factors, a[col, col:])
        b[col + 1 :] -= np.outer(factors, b[col]).reshape(b[col + 1 :].shape)
    x = np.zeros_like(b)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1 :] @ x[row + 1 :]) / a[row, row]
    return x


def off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.square(a - np.diag(np.diag(a))))))


def jacobi_eigh(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors (columns) of a symmetric matrix by cyclic Jacobi rotations.

    Each eigenvector's sign is fixed so that its entry of largest magnitude is positive.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ShapeMismatch(f"expected a square matrix, got shape {a.shape}")
    v = np.eye(n)
    threshold = JACOBI_TOLERANCE * max(1.0, float(np.linalg.norm(a)))
    for sweep in range(JACOBI_MAX_SWEEPS):
        off = off_diagonal_norm(a)
        logger.debug("Jacobi sweep %d: off-diagonal norm %.3e", sweep, off)
        if off < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-18 * (abs(a[p, p]) + abs(a[q, q])):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0.0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rotation = np.eye(n)
                rotation[p, p] = rotation[q, q] = c
                rotation[p, q] = s
                rotation[q, p] = -s
                a = rotation.T @ a @ rotation
                v = v @ rotation
    else:
        if off_diagonal_norm(a) >= threshold:
            raise NoConvergence("Jacobi eigendecomposition", JACOBI_MAX_SWEEPS)
    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    values, vectors = values[order], v[:, order]
    for j in range(n):
        if vectors[int(np.argmax(np.abs(vectors[:, j]))), j] < 0:
            vectors[:, j] = -vectors[:, j]
    return values, vectors
