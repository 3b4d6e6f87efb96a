"""Naive Bayes with categorical frequency tables and Gaussian class-conditional densities.

A row's score for class ``c`` is ``log P(c) + sum_j log P(x_j | c)``; the prediction is the class with the
largest score, equal scores going to the class first in label order.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..dataset import Dataset, Label
from ..errors import NotBinary, UnknownCategoryAtPredict, UsageError
from ..serialization import register_model
from .base import EstimatorSpec, Model, register_spec, require_labels

logger = logging.getLogger(__name__)

SIGMA_FLOOR = 1e-9


@dataclass(frozen=True)
class CategoricalTable:
    """``log_probabilities[c, v]`` is ``log P(category v | class c)``."""

    name: str
    categories: Tuple[str, ...]
    log_probabilities: np.ndarray
    # log probability of a category never seen in training, -inf when smoothing is off
    log_unseen: np.ndarray

    def log_likelihood(self, value: str) -> np.ndarray:
        if value in self.categories:
            return self.log_probabilities[:, self.categories.index(value)]
        if np.all(np.isneginf(self.log_unseen)):
            raise UnknownCategoryAtPredict(
                f"category '{value}' of '{self.name}' was not seen in training and smoothing is 0"
            )
        return self.log_unseen


@dataclass(frozen=True)
class GaussianFeature:
    """Per class mean and (floored) sample standard deviation of one numeric column."""

    name: str
    means: np.ndarray
    sds: np.ndarray

    def log_likelihood(self, value: float) -> np.ndarray:
        z = (value - self.means) / self.sds
        return -np.log(np.sqrt(2.0 * np.pi) * self.sds) - 0.5 * z * z


@register_model("naive-bayes")
@dataclass(frozen=True)
class NaiveBayesModel(Model):
    names: Tuple[str, ...]
    classes: Tuple[Label, ...]
    log_priors: np.ndarray
    categorical: Tuple[CategoricalTable, ...]
    gaussian: Tuple[GaussianFeature, ...]
    smoothing: float
    threshold: Optional[float] = None
    positive: Optional[Label] = None

    @property
    def priors(self) -> np.ndarray:
        return np.exp(self.log_priors)

    def _features(self) -> Dict[str, Any]:
        features: Dict[str, Any] = {table.name: table for table in self.categorical}
        features.update({feature.name: feature for feature in self.gaussian})
        return features

    def log_scores(self, row: Sequence[Any]) -> np.ndarray:
        """Unnormalised log posterior per class, for a row ordered like :attr:`names`."""
        features = self._features()
        scores = self.log_priors.copy()
        for name, value in zip(self.names, row):
            scores = scores + features[name].log_likelihood(value)
        return scores

    def score(self, row: Sequence[Any]) -> Dict[Label, float]:
        return dict(zip(self.classes, (float(s) for s in self.log_scores(row))))

    def proba(self, row: Sequence[Any]) -> np.ndarray:
        scores = self.log_scores(row)
        top = scores.max()
        if not np.isfinite(top):
            return np.full(len(self.classes), 1.0 / len(self.classes))
        weights = np.exp(scores - top)
        return weights / weights.sum()

    def predict_row(self, row: Sequence[Any]) -> Label:
        if self.threshold is not None and self.positive is not None:
            p = self.proba(row)[self.classes.index(self.positive)]
            negative = next(label for label in self.classes if label != self.positive)
            return self.positive if p >= self.threshold else negative
        return self.classes[int(np.argmax(self.log_scores(row)))]

    def predict(self, dataset: Dataset) -> List[Label]:
        return [self.predict_row(row) for row in dataset.rows(self.names)]

    def predict_proba(self, dataset: Dataset) -> np.ndarray:
        """Posterior probabilities, one row per dataset row and one column per class."""
        return np.array([self.proba(row) for row in dataset.rows(self.names)]).reshape(-1, len(self.classes))


def _categorical_table(
    name: str, values: Sequence[str], labels: Sequence[Label], classes: List[Label], alpha: float
) -> CategoricalTable:
    categories = tuple(sorted(set(values)))
    counts = np.zeros((len(classes), len(categories)))
    for value, label in zip(values, labels):
        counts[classes.index(label), categories.index(value)] += 1
    class_sizes = counts.sum(axis=1, keepdims=True)
    denominators = class_sizes + alpha * len(categories)
    with np.errstate(divide="ignore"):
        log_probabilities = np.log((counts + alpha) / denominators)
        log_unseen = np.log(np.full(len(classes), alpha) / denominators[:, 0])
    return CategoricalTable(name, categories, log_probabilities, log_unseen)


def _gaussian_feature(
    name: str, values: np.ndarray, labels: Sequence[Label], classes: List[Label]
) -> GaussianFeature:
    means, sds = np.zeros(len(classes)), np.zeros(len(classes))
    label_array = np.asarray(labels, dtype=object)
    for c, label in enumerate(classes):
        members = values[label_array == label]
        means[c] = members.mean()
        if len(members) > 1:
            sds[c] = math.sqrt(float(np.sum((members - means[c]) ** 2)) / (len(members) - 1))
    return GaussianFeature(name, means, np.maximum(sds, SIGMA_FLOOR))


@register_spec("nb")
@dataclass(frozen=True)
class NbSpec(EstimatorSpec):
    """``smoothing`` is the pseudo-count added to every category count (Laplace smoothing for 1).

    ``threshold`` and ``positive`` turn a binary model into a cut-off rule: predict ``positive`` when its
    posterior probability reaches the threshold.
    """

    smoothing: float = 1.0
    threshold: Optional[float] = None
    positive: Optional[str] = None

    def __post_init__(self) -> None:
        if self.smoothing < 0:
            raise UsageError(f"'smoothing' of 'nb' must be non-negative, got {self.smoothing}")
        if self.threshold is not None and not 0.0 <= self.threshold <= 1.0:
            raise UsageError(f"'threshold' of 'nb' must lie in [0, 1], got {self.threshold}")
        if (self.threshold is None) != (self.positive is None):
            raise UsageError("'threshold' and 'positive' of 'nb' must be given together")

    def fit(self, dataset: Dataset) -> NaiveBayesModel:
        labels = require_labels(dataset, "nb")
        classes = dataset.classes()
        counts = np.array([labels.count(label) for label in classes], dtype=float)
        categorical: List[CategoricalTable] = []
        gaussian: List[GaussianFeature] = []
        for column in dataset.columns:
            if column.is_numeric:
                gaussian.append(_gaussian_feature(column.name, column.array(), labels, classes))
            else:
                categorical.append(_categorical_table(column.name, column.values, labels, classes, self.smoothing))

        positive: Optional[Label] = None
        if self.positive is not None:
            if len(classes) != 2:
                raise NotBinary(f"a decision threshold needs exactly two classes, got {classes}")
            matches = [label for label in classes if str(label) == self.positive or label == self.positive]
            if not matches:
                raise UsageError(f"'positive' = '{self.positive}' is not one of the classes {classes}")
            positive = matches[0]

        model = NaiveBayesModel(
            names=dataset.names,
            classes=tuple(classes),
            log_priors=np.log(counts / counts.sum()),
            categorical=tuple(categorical),
            gaussian=tuple(gaussian),
            smoothing=self.smoothing,
            threshold=self.threshold,
            positive=positive,
        )
        logger.info("naive Bayes: %d classes, priors %s", len(classes), model.priors.round(4).tolist())
        return model


def nb_fit(dataset: Dataset, smoothing: float = 1.0) -> NaiveBayesModel:
    return NbSpec(smoothing=smoothing).fit(dataset)


def nb_score(model: NaiveBayesModel, row: Sequence[Any]) -> Dict[Label, float]:
    return model.score(row)


def nb_predict(model: NaiveBayesModel, dataset: Dataset) -> List[Label]:
    return model.predict(dataset)


def nb_predict_proba(model: NaiveBayesModel, dataset: Dataset) -> np.ndarray:
    return model.predict_proba(dataset)
