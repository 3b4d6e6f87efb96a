import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..dataset import Dataset, Label
from ..distance import EUCLIDEAN, DistanceMetric
from ..errors import KExceedsData, KRangeInvalid, UsageError
from ..metrics import confusion, error_rate
from ..scaling import ScalerKind, apply_scaler, fit_scaler
from ..serialization import register_model
from .base import EstimatorSpec, Model, register_spec, require_labels

logger = logging.getLogger(__name__)


@register_model("knn")
@dataclass(frozen=True)
class KnnModel(Model):
    """Stores the training rows verbatim; all work happens at prediction time."""

    names: Tuple[str, ...]
    rows: np.ndarray
    labels: Tuple[Label, ...]
    k: int
    metric: DistanceMetric

    def neighbours(self, row: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Positions and distances of the ``k`` nearest training rows, equal distances in row order."""
        distances = self.metric.to_many(row, self.rows)
        nearest = np.argsort(distances, kind="stable")[: self.k]
        return nearest, distances[nearest]

    def vote(self, row: np.ndarray) -> Label:
        nearest, distances = self.neighbours(row)
        counts: Dict[Label, int] = {}
        summed: Dict[Label, float] = {}
        for position, distance in zip(nearest, distances):
            label = self.labels[position]
            counts[label] = counts.get(label, 0) + 1
            summed[label] = summed.get(label, 0.0) + float(distance)
        # most votes, then the closest group, then label order
        return min(counts, key=lambda label: (-counts[label], summed[label], label))

    def predict(self, dataset: Dataset) -> List[Label]:
        return [self.vote(row) for row in dataset.matrix(self.names)]


@register_spec("knn")
@dataclass(frozen=True)
class KnnSpec(EstimatorSpec):
    k: int = 5
    metric: DistanceMetric = EUCLIDEAN

    def __post_init__(self) -> None:
        if self.k < 1:
            raise UsageError(f"'k' of 'knn' must be at least 1, got {self.k}")

    def fit(self, dataset: Dataset) -> KnnModel:
        labels = require_labels(dataset, "knn")
        if self.k > dataset.n_rows:
            raise KExceedsData(f"'k' = {self.k} exceeds the {dataset.n_rows} training rows")
        return KnnModel(
            names=dataset.names, rows=dataset.matrix(), labels=tuple(labels), k=self.k, metric=self.metric
        )


def knn_fit(dataset: Dataset, k: int = 5, metric: DistanceMetric = EUCLIDEAN) -> KnnModel:
    return KnnSpec(k=k, metric=metric).fit(dataset)


def knn_predict(model: KnnModel, rows: Any) -> List[Label]:
    """Labels for raw numeric rows ordered like the training columns."""
    return [model.vote(row) for row in np.atleast_2d(np.asarray(rows, dtype=float))]


def knn_error_curve(
    train: Dataset,
    test: Dataset,
    k_min: int = 1,
    k_max: int = 29,
    metric: DistanceMetric = EUCLIDEAN,
    scale: Optional[ScalerKind] = None,
) -> List[Tuple[int, float]]:
    """Test error rate for every ``k`` in ``k_min..k_max`` (both included), e.g. to plot error against ``k``.

    With ``scale`` the scaler is fitted on ``train`` and applied to both parts.
    """
    if not 1 <= k_min <= k_max:
        raise KRangeInvalid(f"need 1 <= k_min <= k_max, got k_min = {k_min} and k_max = {k_max}")
    if k_max > train.n_rows:
        raise KRangeInvalid(f"'k_max' = {k_max} exceeds the {train.n_rows} training rows")
    if scale is not None:
        scaler = fit_scaler(train, scale)
        train, test = apply_scaler(train, scaler), apply_scaler(test, scaler)
    truth = test.label_values()
    curve = []
    for k in range(k_min, k_max + 1):
        predicted = KnnSpec(k=k, metric=metric).fit(train).predict(test)
        curve.append((k, error_rate(confusion(truth, predicted))))
        logger.debug("k = %d: error %.6g", k, curve[-1][1])
    return curve
