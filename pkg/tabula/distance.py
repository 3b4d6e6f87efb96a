"""Dissimilarity functions shared by nearest neighbours, clustering and the validity indices."""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import LengthMismatch, NegativeWeight, NonBinaryEntry, OrderOutOfRange, UsageError
from .params import register_parser


class Infinity(Enum):
    """The order of the Chebyshev (maximum) distance, kept out of the float domain."""

    INF = "inf"


INF = Infinity.INF
Order = Union[float, Infinity]


class MetricKind(Enum):
    MINKOWSKI = "minkowski"
    WEIGHTED_MINKOWSKI = "weighted-minkowski"
    SIMPLE_MATCHING = "simple-matching"
    NOMINAL_MATCHING = "nominal-matching"


def _pair(x: Any, y: Any) -> Tuple[np.ndarray, np.ndarray]:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise LengthMismatch(f"rows of length {x.size} and {y.size} cannot be compared")
    return x, y


def _check_order(g: Order) -> None:
    if g is INF:
        return
    if isinstance(g, Infinity) or not np.isfinite(g) or g < 1:
        raise OrderOutOfRange(f"the order 'g' must be >= 1 or INF, got {g}")


def minkowski(x: Any, y: Any, g: Order = 2.0) -> float:
    """``(sum |x_i - y_i|^g)^(1/g)``, the largest component gap for ``g = INF``."""
    _check_order(g)
    x, y = _pair(x, y)
    gaps = np.abs(x - y)
    if gaps.size == 0:
        return 0.0
    if g is INF:
        return float(gaps.max())
    if g == 1:
        return float(gaps.sum())
    if g == 2:
        return float(np.sqrt(np.dot(gaps, gaps)))
    return float(np.sum(gaps**g) ** (1.0 / g))


def weighted_minkowski(x: Any, y: Any, g: Order, w: Any) -> float:
    """``(sum w_i |x_i - y_i|^g)^(1/g)``, the largest weighted gap for ``g = INF``."""
    _check_order(g)
    x, y = _pair(x, y)
    w = np.asarray(w, dtype=float)
    if w.shape != x.shape:
        raise LengthMismatch(f"{w.size} weights given for rows of length {x.size}")
    if np.any(w < 0):
        raise NegativeWeight(f"weights must be non-negative, got {w.tolist()}")
    gaps = np.abs(x - y)
    if gaps.size == 0:
        return 0.0
    if g is INF:
        return float(np.max(w * gaps))
    return float(np.sum(w * gaps**g) ** (1.0 / g))


def simple_matching(x: Any, y: Any) -> float:
    """Share of mismatching positions of two 0/1 rows, ``(r + s) / (q + r + s + t)``."""
    x, y = _pair(x, y)
    for row in (x, y):
        if not np.all((row == 0) | (row == 1)):
            raise NonBinaryEntry(f"simple matching needs 0/1 entries, got {row.tolist()}")
    if x.size == 0:
        return 0.0
    return float(np.count_nonzero(x != y) / x.size)


def nominal_matching(x: Sequence[Any], y: Sequence[Any]) -> float:
    """``(p - m) / p``: the share of positions with different categories."""
    if len(x) != len(y):
        raise LengthMismatch(f"rows of length {len(x)} and {len(y)} cannot be compared")
    if len(x) == 0:
        return 0.0
    mismatches = sum(1 for a, b in zip(x, y) if a != b)
    return mismatches / len(x)


@dataclass(frozen=True)
class DistanceMetric:
    kind: MetricKind = MetricKind.MINKOWSKI
    order: Order = 2.0
    weights: Optional[Tuple[float, ...]] = None

    def __post_init__(self) -> None:
        if self.kind in (MetricKind.MINKOWSKI, MetricKind.WEIGHTED_MINKOWSKI):
            _check_order(self.order)
        if self.weights is not None and any(w < 0 for w in self.weights):
            raise NegativeWeight(f"weights must be non-negative, got {list(self.weights)}")
        if self.kind is MetricKind.WEIGHTED_MINKOWSKI and self.weights is None:
            raise UsageError("a weighted Minkowski metric needs 'weights'")

    def __call__(self, x: Any, y: Any) -> float:
        if self.kind is MetricKind.MINKOWSKI:
            return minkowski(x, y, self.order)
        if self.kind is MetricKind.WEIGHTED_MINKOWSKI:
            return weighted_minkowski(x, y, self.order, self.weights)
        if self.kind is MetricKind.SIMPLE_MATCHING:
            return simple_matching(x, y)
        return nominal_matching(x, y)

    def to_many(self, x: Any, rows: np.ndarray) -> np.ndarray:
        """Distances from ``x`` to every row of ``rows``."""
        rows = np.asarray(rows, dtype=float)
        x = np.asarray(x, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != x.size:
            raise LengthMismatch(f"a row of length {x.size} cannot be compared with rows of shape {rows.shape}")
        if self.kind is MetricKind.MINKOWSKI:
            gaps = np.abs(rows - x)
            if self.order is INF:
                return gaps.max(axis=1) if x.size else np.zeros(len(rows))
            if self.order == 2:
                return np.sqrt(np.einsum("ij,ij->i", gaps, gaps))
            return np.sum(gaps**self.order, axis=1) ** (1.0 / self.order)
        return np.array([self(x, row) for row in rows])

    @property
    def name(self) -> str:
        if self.kind is MetricKind.MINKOWSKI:
            if self.order is INF:
                return "chebyshev"
            if self.order == 2:
                return "euclidean"
            if self.order == 1:
                return "manhattan"
            return f"minkowski:g={self.order:g}"
        return self.kind.value


EUCLIDEAN = DistanceMetric(MetricKind.MINKOWSKI, 2.0)
MANHATTAN = DistanceMetric(MetricKind.MINKOWSKI, 1.0)
CHEBYSHEV = DistanceMetric(MetricKind.MINKOWSKI, INF)


def parse_metric(text: Union[str, DistanceMetric]) -> DistanceMetric:
    """Metric from its command line name: ``euclidean``, ``manhattan``, ``chebyshev`` or ``minkowski:g=<real>``."""
    if isinstance(text, DistanceMetric):
        return text
    name, _, argument = text.strip().partition(":")
    name = name.lower()
    if name == "euclidean":
        return EUCLIDEAN
    if name == "manhattan":
        return MANHATTAN
    if name == "chebyshev":
        return CHEBYSHEV
    if name == "simple-matching":
        return DistanceMetric(MetricKind.SIMPLE_MATCHING)
    if name == "nominal-matching":
        return DistanceMetric(MetricKind.NOMINAL_MATCHING)
    if name == "minkowski":
        key, _, value = argument.partition("=")
        if key.strip() != "g" or not value:
            raise UsageError(f"expected 'minkowski:g=<real>', got '{text}'")
        if value.strip().lower() in ("inf", "infinity"):
            return CHEBYSHEV
        try:
            order = float(value)
        except ValueError:
            raise UsageError(f"the Minkowski order must be a real number, got '{value}'") from None
        return DistanceMetric(MetricKind.MINKOWSKI, order)
    raise UsageError(f"unknown metric '{text}', expected euclidean, manhattan, chebyshev or minkowski:g=<real>")


def pairwise(rows: Any, metric: DistanceMetric = EUCLIDEAN) -> np.ndarray:
    """Symmetric distance matrix of all rows, zero diagonal."""
    rows = np.asarray(rows, dtype=float)
    n = len(rows)
    matrix = np.zeros((n, n))
    for i in range(n):
        matrix[i, i + 1 :] = metric.to_many(rows[i], rows[i + 1 :])
        matrix[i + 1 :, i] = matrix[i, i + 1 :]
    return matrix


@register_parser(Order)
def parse_order(text: str) -> Order:
    if text.strip().lower() in ("inf", "infinity"):
        return INF
    order = float(text)
    _check_order(order)
    return order


register_parser(DistanceMetric)(parse_metric)
