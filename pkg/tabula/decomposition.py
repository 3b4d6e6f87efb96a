"""Principal component analysis through the eigendecomposition of the sample covariance matrix."""

import logging
from dataclasses import dataclass
from typing import Any, Tuple

import numpy as np

from .dataset import Dataset
from .errors import PTooLarge, ShapeMismatch, TooFewRows, UsageError
from .linalg import jacobi_eigh
from .serialization import register_model

logger = logging.getLogger(__name__)


@register_model("pca")
@dataclass(frozen=True)
class PcaModel:
    """Column means, all eigenvalues (descending) and the matching unit eigenvectors as rows of ``components``.

    Only the first ``n_components`` rows are used to transform.
    """

    names: Tuple[str, ...]
    means: np.ndarray
    eigenvalues: np.ndarray
    components: np.ndarray
    n_components: int

    @property
    def loadings(self) -> np.ndarray:
        """The retained eigenvectors, one per row (the projection matrix ``F``)."""
        return self.components[: self.n_components]

    def _rows(self, rows: Any) -> np.ndarray:
        if isinstance(rows, Dataset):
            rows = rows.matrix(self.names)
        rows = np.asarray(rows, dtype=float)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        if rows.shape[1] != len(self.means):
            raise ShapeMismatch(f"rows have {rows.shape[1]} columns, the model was fitted on {len(self.means)}")
        return rows

    def transform(self, rows: Any) -> np.ndarray:
        return (self._rows(rows) - self.means) @ self.loadings.T

    def inverse(self, scores: Any) -> np.ndarray:
        scores = np.asarray(scores, dtype=float)
        if scores.ndim == 1:
            scores = scores.reshape(1, -1)
        if scores.shape[1] != self.n_components:
            raise ShapeMismatch(f"scores have {scores.shape[1]} columns, the model keeps {self.n_components}")
        return self.means + scores @ self.loadings


def covariance(matrix: np.ndarray) -> np.ndarray:
    """Sample covariance with the ``1/(N-1)`` normalisation."""
    centered = matrix - matrix.mean(axis=0)
    return (centered.T @ centered) / (len(matrix) - 1)


def pca_fit(dataset: Dataset, n_components: int) -> PcaModel:
    matrix = dataset.matrix()
    n_rows, n_features = matrix.shape
    if n_rows < 2:
        raise TooFewRows(f"PCA needs at least 2 rows, got {n_rows}")
    if n_components < 1:
        raise UsageError(f"'n_components' must be at least 1, got {n_components}")
    if n_components > n_features:
        raise PTooLarge(f"'n_components' = {n_components} exceeds the {n_features} features")
    values, vectors = jacobi_eigh(covariance(matrix))
    # covariance matrices are positive semidefinite, tiny negative values are round-off
    values = np.clip(values, 0.0, None)
    model = PcaModel(
        names=dataset.names,
        means=matrix.mean(axis=0),
        eigenvalues=values,
        components=vectors.T.copy(),
        n_components=n_components,
    )
    logger.info("PCA: keeping %d of %d components, eigenvalues %s", n_components, n_features, values.tolist())
    return model


def pca_transform(model: PcaModel, rows: Any) -> np.ndarray:
    return model.transform(rows)


def pca_inverse(model: PcaModel, scores: Any) -> np.ndarray:
    return model.inverse(scores)


def explained_variance_ratio(model: PcaModel) -> np.ndarray:
    """Share of the total variance per component, all components included."""
    total = float(model.eigenvalues.sum())
    if total == 0.0:
        return np.zeros_like(model.eigenvalues)
    return model.eigenvalues / total
