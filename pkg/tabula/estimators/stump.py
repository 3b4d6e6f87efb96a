"""One-level decision trees trained on weighted rows, the default weak learner of boosting."""

from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

import numpy as np

from ..dataset import Dataset, Label
from ..errors import LengthMismatch, NegativeWeight
from ..serialization import register_model
from .base import Model, WeightedEstimatorSpec, register_spec, require_labels

# weighted errors closer than this count as equal, the earlier candidate wins
ERROR_EPS = 1e-12


@register_model("stump")
@dataclass(frozen=True)
class StumpModel(Model):
    """``feature <= threshold`` predicts ``left``, larger values ``right``.

    Without a feature the stump is the constant rule ``left``.
    """

    names: Tuple[str, ...]
    feature: Optional[str]
    threshold: float
    left: Label
    right: Label

    def predict(self, dataset: Dataset) -> List[Label]:
        if self.feature is None:
            return [self.left] * dataset.n_rows
        values = dataset.column(self.feature).array()
        return [self.left if value <= self.threshold else self.right for value in values]


def _best_side(weights: np.ndarray) -> Tuple[int, float]:
    """Class with the largest weight (first on ties) and the weight of all other classes."""
    best = int(np.argmax(weights))
    return best, float(weights.sum() - weights[best])


def stump_fit(dataset: Dataset, weights: Any) -> StumpModel:
    """Stump with the smallest weighted training error.

    Candidates are the constant rule followed by every midpoint between consecutive distinct values of
    every numeric feature, in column order; equal errors keep the earlier candidate.
    """
    labels = require_labels(dataset, "stump")
    weights = np.asarray(weights, dtype=float)
    if len(weights) != len(labels):
        raise LengthMismatch(f"{len(weights)} weights for {len(labels)} rows")
    if np.any(weights < 0):
        raise NegativeWeight("row weights must be non-negative")
    classes = sorted(set(labels))
    position = {label: i for i, label in enumerate(classes)}
    one_hot = np.zeros((len(labels), len(classes)))
    one_hot[np.arange(len(labels)), [position[label] for label in labels]] = weights
    totals = one_hot.sum(axis=0)

    constant, best_error = _best_side(totals)
    best = StumpModel(dataset.names, None, 0.0, classes[constant], classes[constant])
    for name in dataset.numeric_names:
        values = dataset.column(name).array()
        order = np.argsort(values, kind="stable")
        sorted_values = values[order]
        cumulative = np.cumsum(one_hot[order], axis=0)
        for i in range(len(values) - 1):
            if sorted_values[i] == sorted_values[i + 1]:
                continue
            left, left_error = _best_side(cumulative[i])
            right, right_error = _best_side(totals - cumulative[i])
            error = left_error + right_error
            if error < best_error - ERROR_EPS:
                threshold = float((sorted_values[i] + sorted_values[i + 1]) / 2.0)
                best = StumpModel(dataset.names, name, threshold, classes[left], classes[right])
                best_error = error
    return best


@register_spec("stump")
@dataclass(frozen=True)
class StumpSpec(WeightedEstimatorSpec):
    def fit(self, dataset: Dataset) -> StumpModel:
        return stump_fit(dataset, np.full(dataset.n_rows, 1.0 / max(dataset.n_rows, 1)))

    def fit_weighted(self, dataset: Dataset, weights: np.ndarray) -> StumpModel:
        return stump_fit(dataset, weights)
