"""Lloyd's k-means: alternate nearest-center assignment and mean updates until the assignment is stable."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from ..config import make_rng
from ..dataset import Dataset
from ..errors import KTooLarge, NoConvergence, ShapeMismatch, UsageError
from ..serialization import register_model
from .assignment import ClusterAssignment

logger = logging.getLogger(__name__)


class Init(Enum):
    FIRST_K = "first-k"
    RANDOM = "random"


def squared_distances(rows: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """``(n, k)`` squared Euclidean distances."""
    return ((rows[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


@register_model("kmeans")
@dataclass(frozen=True)
class KMeansModel:
    """``objective`` is ``E = sum_i sum_{x in C_i} |x - mu_i|^2`` for the final centers and assignment,
    ``history`` holds ``E`` after every assignment step."""

    names: Tuple[str, ...]
    centers: np.ndarray
    objective: float
    iterations: int
    history: Tuple[float, ...] = ()

    @property
    def k(self) -> int:
        return len(self.centers)

    def assign(self, rows: Any) -> np.ndarray:
        """Nearest center per row, equal distances go to the lower center index."""
        return np.argmin(squared_distances(np.atleast_2d(np.asarray(rows, dtype=float)), self.centers), axis=1)

    def predict(self, dataset: Dataset) -> ClusterAssignment:
        return as_assignment(self.assign(dataset.matrix(self.names)), self.k)


def as_assignment(labels: Sequence[int], k: int) -> ClusterAssignment:
    """Center indices as cluster ids; centers without rows leave gaps, which get renumbered away."""
    ids = [int(i) for i in labels]
    if len(set(ids)) == k:
        return ClusterAssignment(tuple(ids))
    return ClusterAssignment.from_labels(ids)


def initial_centers(rows: np.ndarray, k: int, init: Init, seed: int) -> np.ndarray:
    if init is Init.FIRST_K:
        return rows[:k].copy()
    return rows[np.sort(make_rng(seed).choice(len(rows), size=k, replace=False))].copy()


def kmeans(
    dataset: Dataset,
    k: int,
    init: Init = Init.FIRST_K,
    seed: int = 0,
    max_iter: int = 100,
    tol: float = 0.0,
    centers: Optional[Any] = None,
    strict: bool = False,
) -> Tuple[KMeansModel, ClusterAssignment]:
    """Clusters the numeric rows of ``dataset`` into ``k`` groups.

    ``centers`` overrides ``init`` with explicit starting centers. Iteration stops once the assignment
    repeats, or the largest center shift falls below ``tol``, or after ``max_iter`` assignment steps
    (logged, or :class:`~tabula.errors.NoConvergence` with ``strict``). A cluster that loses all its rows gets
    its center moved onto the row farthest from its own center.

    The returned assignment uses the center indices as cluster ids.
    """
    rows = dataset.matrix()
    n = len(rows)
    if k < 1:
        raise UsageError(f"'k' of 'kmeans' must be at least 1, got {k}")
    if k > n:
        raise KTooLarge(f"'k' = {k} exceeds the {n} rows")
    if max_iter < 1:
        raise UsageError(f"'max_iter' of 'kmeans' must be at least 1, got {max_iter}")
    if centers is not None:
        current = np.array(centers, dtype=float)
        if current.shape != (k, rows.shape[1]):
            raise ShapeMismatch(f"initial centers must have shape {(k, rows.shape[1])}, got {current.shape}")
    else:
        current = initial_centers(rows, k, init, seed)

    labels: Optional[np.ndarray] = None
    history: List[float] = []
    converged = False
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        distances = squared_distances(rows, current)
        new_labels = np.argmin(distances, axis=1)
        history.append(float(distances[np.arange(n), new_labels].sum()))
        logger.debug("k-means iteration %d: E = %.10g", iterations, history[-1])
        if labels is not None and np.array_equal(new_labels, labels):
            converged = True
            break
        labels = new_labels

        updated = current.copy()
        for cluster in range(k):
            members = rows[labels == cluster]
            if len(members):
                updated[cluster] = members.mean(axis=0)
            else:
                own = distances[np.arange(n), labels]
                farthest = int(np.argmax(own))
                logger.warning("k-means cluster %d is empty, reseeded at row %d", cluster, farthest)
                updated[cluster] = rows[farthest]
        shift = float(np.max(np.sqrt(((updated - current) ** 2).sum(axis=1))))
        current = updated
        if shift < tol:
            converged = True
            labels = np.argmin(squared_distances(rows, current), axis=1)
            break

    if not converged:
        if strict:
            raise NoConvergence("k-means", max_iter)
        logger.warning("k-means stopped after %d iterations without a stable assignment", max_iter)
        labels = np.argmin(squared_distances(rows, current), axis=1)

    assert labels is not None
    objective = float(squared_distances(rows, current)[np.arange(n), labels].sum())
    model = KMeansModel(dataset.names, current, objective, iterations, tuple(history))
    logger.info("k-means: k=%d, E=%.6g after %d iterations", k, objective, iterations)
    return model, as_assignment(labels, k)
