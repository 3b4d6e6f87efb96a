from abc import ABC, abstractmethod
from collections import Counter
from typing import Any, Callable, ClassVar, Dict, List, Mapping, Sequence, Tuple, Type, TypeVar

import numpy as np

from ..dataset import Dataset, Label
from ..errors import DataError, Empty, NotBinary, UsageError
from ..params import build, parse_micro, with_params
from ..serialization import Registry

S = TypeVar("S", bound="EstimatorSpec")


class Model(ABC):
    """A fitted supervised model. Fitted models are immutable."""

    @abstractmethod
    def predict(self, dataset: Dataset) -> List[Label]:
        ...


class EstimatorSpec(ABC):
    """Hyperparameters of one learning algorithm; :meth:`fit` turns them into a :class:`Model`."""

    # regressors predict reals, ensembles average them instead of voting
    is_regressor: ClassVar[bool] = False

    @abstractmethod
    def fit(self, dataset: Dataset) -> Model:
        ...

    @property
    def name(self) -> str:
        return SPECS.name_of(type(self))

    @classmethod
    def from_params(cls: Type[S], params: Mapping[str, Any]) -> S:
        return build(cls, params, owner=SPECS.name_of(cls))

    def with_params(self: S, params: Mapping[str, Any]) -> S:
        return with_params(self, params, owner=self.name)


class WeightedEstimatorSpec(EstimatorSpec):
    """An estimator that honours per-row weights during training."""

    @abstractmethod
    def fit_weighted(self, dataset: Dataset, weights: np.ndarray) -> Model:
        ...


SPECS = Registry("estimator", error=UsageError)


def register_spec(name: str) -> Callable[[Type[S]], Type[S]]:
    return SPECS.register(name)


def parse_spec(text: str) -> EstimatorSpec:
    """Estimator spec from the flag syntax, e.g. ``knn:k=5,metric=manhattan`` or ``bagging:base=tree,T=25``."""
    name, params = parse_micro(text)
    cls = SPECS.get(name)
    return cls.from_params(params)  # type: ignore[attr-defined,no-any-return]


def require_labels(dataset: Dataset, owner: str) -> List[Label]:
    if not dataset.has_labels:
        raise DataError(f"'{owner}' needs a labeled dataset")
    if dataset.n_rows == 0:
        raise Empty(f"'{owner}' cannot be fitted on an empty dataset")
    return dataset.label_values()


def binary_classes(labels: Sequence[Label], owner: str) -> Tuple[Label, Label]:
    """The two classes in label order: the first maps to -1, the second to +1."""
    classes = sorted(set(labels))
    if len(classes) != 2:
        raise NotBinary(f"'{owner}' needs exactly two classes, got {classes}")
    return classes[0], classes[1]


def to_signs(labels: Sequence[Label], classes: Tuple[Label, Label]) -> np.ndarray:
    return np.array([1.0 if label == classes[1] else -1.0 for label in labels])


def majority(labels: Sequence[Label]) -> Label:
    """Most frequent label, ties go to label order."""
    counts = Counter(labels)
    best = max(counts.values())
    return min(label for label, count in counts.items() if count == best)


def weighted_vote(labels: Sequence[Label], weights: Sequence[float]) -> Label:
    """Label with the largest total weight, ties go to label order."""
    totals: Dict[Label, float] = {}
    for label, weight in zip(labels, weights):
        totals[label] = totals.get(label, 0.0) + float(weight)
    best = max(totals.values())
    return min(label for label, total in totals.items() if total == best)
