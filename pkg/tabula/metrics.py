"""Confusion matrices, classification and regression metrics.

Ratios whose denominator is zero are not silently turned into 0, they are reported as :data:`UNDEFINED`.
"""

import math
from dataclasses import dataclass
from enum import Enum, auto
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .dataset import Label
from .errors import Empty, LengthMismatch, UnknownColumn, UsageError


class Tag(Enum):
    UNDEFINED = auto()
    INFINITE = auto()


UNDEFINED = Tag.UNDEFINED
INFINITE = Tag.INFINITE

Metric = Union[float, Tag]


def is_defined(value: Metric) -> bool:
    return not isinstance(value, Tag)


def to_json_value(value: Metric) -> Union[float, str]:
    """JSON form of a metric; NaN, as returned by a scorer without a defined value, is ``"undefined"``."""
    if isinstance(value, Tag):
        return value.name.lower()
    if math.isnan(value):
        return UNDEFINED.name.lower()
    return float(value)


def _ratio(numerator: float, denominator: float) -> Metric:
    if denominator == 0:
        return UNDEFINED
    return numerator / denominator


@dataclass(frozen=True)
class ConfusionMatrix:
    """``counts[i][j]`` is the number of rows with true class ``classes[i]`` predicted as ``classes[j]``."""

    classes: Tuple[Label, ...]
    counts: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.counts) != len(self.classes) or any(len(row) != len(self.classes) for row in self.counts):
            raise LengthMismatch(f"counts must be a {len(self.classes)}x{len(self.classes)} table")
        if any(count < 0 for row in self.counts for count in row):
            raise ValueError("counts must be non-negative")

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.int64).reshape(len(self.classes), len(self.classes))

    @property
    def total(self) -> int:
        return int(sum(sum(row) for row in self.counts))

    def index(self, label: Label) -> int:
        try:
            return self.classes.index(label)
        except ValueError:
            raise UnknownColumn(f"class {label!r} does not occur, classes are {list(self.classes)}") from None

    def binary_counts(self, positive: Label) -> Tuple[int, int, int, int]:
        """``(TP, FP, FN, TN)`` treating ``positive`` as the positive class and everything else as negative."""
        p = self.index(positive)
        table = self.array
        tp = int(table[p, p])
        fp = int(table[:, p].sum()) - tp
        fn = int(table[p, :].sum()) - tp
        tn = self.total - tp - fp - fn
        return tp, fp, fn, tn

    def support(self, label: Label) -> int:
        return int(self.array[self.index(label)].sum())


def confusion(y_true: Sequence[Label], y_pred: Sequence[Label]) -> ConfusionMatrix:
    if len(y_true) != len(y_pred):
        raise LengthMismatch(f"{len(y_true)} true labels but {len(y_pred)} predictions")
    if not y_true:
        raise Empty("a confusion matrix needs at least one row")
    classes = tuple(sorted(set(y_true) | set(y_pred)))
    position = {label: i for i, label in enumerate(classes)}
    table = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for truth, prediction in zip(y_true, y_pred):
        table[position[truth], position[prediction]] += 1
    return ConfusionMatrix(classes=classes, counts=tuple(tuple(int(c) for c in row) for row in table))


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise Empty("accuracy of an empty confusion matrix")
    return float(np.trace(cm.array)) / cm.total


def error_rate(cm: ConfusionMatrix) -> float:
    return 1.0 - accuracy(cm)


def precision(cm: ConfusionMatrix, positive: Label) -> Metric:
    tp, fp, _, _ = cm.binary_counts(positive)
    return _ratio(tp, tp + fp)


def recall(cm: ConfusionMatrix, positive: Label) -> Metric:
    tp, _, fn, _ = cm.binary_counts(positive)
    return _ratio(tp, tp + fn)


sensitivity = recall


def specificity(cm: ConfusionMatrix, positive: Label) -> Metric:
    _, fp, _, tn = cm.binary_counts(positive)
    return _ratio(tn, tn + fp)


def f1(cm: ConfusionMatrix, positive: Label) -> Metric:
    """Harmonic mean of precision and recall."""
    p, r = precision(cm, positive), recall(cm, positive)
    if isinstance(p, Tag) or isinstance(r, Tag):
        return UNDEFINED
    return _ratio(2 * p * r, p + r)


def micro_recall(cm: ConfusionMatrix) -> float:
    """Pooled recall over all classes, equal to the accuracy."""
    table = cm.array
    return float(np.trace(table)) / float(table.sum())


def mse(y_true: Sequence[float], y_pred: Sequence[float]) -> float:
    """Mean squared residual ``1/m sum (f(x_i) - y_i)^2``."""
    truth, prediction = np.asarray(y_true, dtype=float), np.asarray(y_pred, dtype=float)
    if truth.shape != prediction.shape:
        raise LengthMismatch(f"{truth.size} true values but {prediction.size} predictions")
    if truth.size == 0:
        raise Empty("mse of empty vectors")
    return float(np.mean((prediction - truth) ** 2))


@dataclass(frozen=True)
class ClassReport:
    label: Label
    precision: Metric
    recall: Metric
    f1: Metric
    support: int


@dataclass(frozen=True)
class ClassificationReport:
    """Per class rows plus macro and support-weighted averages.

    Averages only run over the classes where the metric is defined.
    """

    per_class: Tuple[ClassReport, ...]
    accuracy: float
    macro: Tuple[Metric, Metric, Metric]
    weighted: Tuple[Metric, Metric, Metric]
    support: int

    def to_json(self) -> Dict[str, Any]:
        def averages(values: Tuple[Metric, Metric, Metric]) -> Dict[str, Any]:
            return dict(zip(("precision", "recall", "f1"), (to_json_value(v) for v in values)))

        return {
            "accuracy": self.accuracy,
            "per_class": [
                {
                    "label": row.label,
                    "precision": to_json_value(row.precision),
                    "recall": to_json_value(row.recall),
                    "f1": to_json_value(row.f1),
                    "support": row.support,
                }
                for row in self.per_class
            ],
            "macro_avg": averages(self.macro),
            "weighted_avg": averages(self.weighted),
            "support": self.support,
        }

    def to_text(self, digits: int = 2) -> str:
        width = max([len(str(row.label)) for row in self.per_class] + [len("weighted avg")])

        def cell(value: Metric) -> str:
            return f"{value:>9.{digits}f}" if not isinstance(value, Tag) else f"{'undef':>9}"

        lines = [f"{'':>{width}} {'precision':>9} {'recall':>9} {'f1-score':>9} {'support':>9}", ""]
        for row in self.per_class:
            lines.append(
                f"{str(row.label):>{width}} {cell(row.precision)} {cell(row.recall)} {cell(row.f1)} {row.support:>9}"
            )
        lines.append("")
        lines.append(f"{'accuracy':>{width}} {'':>9} {'':>9} {cell(self.accuracy)} {self.support:>9}")
        for name, values in (("macro avg", self.macro), ("weighted avg", self.weighted)):
            lines.append(f"{name:>{width}} {cell(values[0])} {cell(values[1])} {cell(values[2])} {self.support:>9}")
        return "\n".join(lines)


def _average(values: List[Metric], weights: Optional[List[int]] = None) -> Metric:
    pairs = [(v, 1 if weights is None else weights[i]) for i, v in enumerate(values) if not isinstance(v, Tag)]
    total = sum(w for _, w in pairs)
    if not pairs or total == 0:
        return UNDEFINED
    return sum(float(v) * w for v, w in pairs) / total  # type: ignore[arg-type]


def classification_report(cm: ConfusionMatrix) -> ClassificationReport:
    rows = [
        ClassReport(
            label=label,
            precision=precision(cm, label),
            recall=recall(cm, label),
            f1=f1(cm, label),
            support=cm.support(label),
        )
        for label in cm.classes
    ]
    supports = [row.support for row in rows]

    def summary(weights: Optional[List[int]]) -> Tuple[Metric, Metric, Metric]:
        return (
            _average([row.precision for row in rows], weights),
            _average([row.recall for row in rows], weights),
            _average([row.f1 for row in rows], weights),
        )

    return ClassificationReport(
        per_class=tuple(rows),
        accuracy=accuracy(cm),
        macro=summary(None),
        weighted=summary(supports),
        support=cm.total,
    )


@dataclass(frozen=True)
class Scorer:
    """A named score over (true, predicted) labels or values, with its optimisation direction."""

    name: str
    func: Callable[[Sequence[Any], Sequence[Any]], float]
    greater_is_better: bool = True

    def __call__(self, y_true: Sequence[Any], y_pred: Sequence[Any]) -> float:
        return self.func(y_true, y_pred)

    def better(self, candidate: float, incumbent: Optional[float]) -> bool:
        """Strict improvement, so the first of several equal scores wins. NaN never beats a number."""
        if incumbent is None or (math.isnan(incumbent) and not math.isnan(candidate)):
            return True
        return candidate > incumbent if self.greater_is_better else candidate < incumbent


def _f1_scorer(positive: Label) -> Callable[[Sequence[Any], Sequence[Any]], float]:
    def score(y_true: Sequence[Any], y_pred: Sequence[Any]) -> float:
        value = f1(confusion(y_true, y_pred), positive) if positive in set(y_true) | set(y_pred) else UNDEFINED
        return float("nan") if isinstance(value, Tag) else value

    return score


def defined_mean(scores: Sequence[float]) -> float:
    """Mean of the scores that are not NaN, NaN when none is."""
    defined = [float(score) for score in scores if not math.isnan(score)]
    return float(np.mean(defined)) if defined else float("nan")


def get_scorer(name: Union[str, Scorer]) -> Scorer:
    """``accuracy``, ``error_rate``, ``mse`` or ``f1:<positive label>``."""
    if isinstance(name, Scorer):
        return name
    if name == "accuracy":
        return Scorer("accuracy", lambda t, p: accuracy(confusion(t, p)))
    if name in ("error", "error_rate"):
        return Scorer("error_rate", lambda t, p: error_rate(confusion(t, p)), greater_is_better=False)
    if name == "mse":
        return Scorer("mse", mse, greater_is_better=False)
    if name.startswith("f1:"):
        return Scorer(name, _f1_scorer(name[3:]))
    raise UsageError(f"unknown metric '{name}', expected accuracy, error_rate, mse or f1:<positive label>")
