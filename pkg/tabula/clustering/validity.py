"""Cluster validity indices.

External indices compare an assignment with a reference partition through pair counts: of all row pairs,
``a`` share a cluster in both, ``b`` only in the assignment, ``c`` only in the reference and ``d`` in neither.
Internal indices only look at the geometry of the clusters. Noise rows never take part.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

import numpy as np

from ..errors import LengthMismatch, SingleCluster
from ..metrics import INFINITE, Metric, UNDEFINED, to_json_value
from .assignment import NOISE, ClusterAssignment


def _pairs(count: Any) -> Any:
    return count * (count - 1) // 2


def pair_counts(assignment: ClusterAssignment, reference: ClusterAssignment) -> Tuple[int, int, int, int]:
    """``(a, b, c, d)`` over the rows that are noise in neither partition."""
    if assignment.n_rows != reference.n_rows:
        raise LengthMismatch(f"assignments of {assignment.n_rows} and {reference.n_rows} rows")
    ours, theirs = assignment.array(), reference.array()
    keep = (ours != NOISE) & (theirs != NOISE)
    ours, theirs = ours[keep], theirs[keep]
    m = len(ours)
    if m == 0:
        return 0, 0, 0, 0
    table = np.zeros((ours.max() + 1, theirs.max() + 1), dtype=np.int64)
    np.add.at(table, (ours, theirs), 1)
    same_both = int(_pairs(table).sum())
    same_ours = int(_pairs(table.sum(axis=1)).sum())
    same_theirs = int(_pairs(table.sum(axis=0)).sum())
    a = same_both
    b = same_ours - same_both
    c = same_theirs - same_both
    d = _pairs(m) - a - b - c
    return a, b, c, d


def _ratio(numerator: float, denominator: float) -> Metric:
    return numerator / denominator if denominator > 0 else UNDEFINED


@dataclass(frozen=True)
class ExternalIndices:
    jaccard: Metric
    fowlkes_mallows: Metric
    rand: Metric
    a: int
    b: int
    c: int
    d: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "JS": to_json_value(self.jaccard),
            "FMI": to_json_value(self.fowlkes_mallows),
            "RI": to_json_value(self.rand),
            "pairs": {"a": self.a, "b": self.b, "c": self.c, "d": self.d},
        }


def external_indices(assignment: ClusterAssignment, reference: ClusterAssignment) -> ExternalIndices:
    a, b, c, d = pair_counts(assignment, reference)
    precision, recall = _ratio(a, a + b), _ratio(a, a + c)
    if isinstance(precision, float) and isinstance(recall, float):
        fmi: Metric = math.sqrt(precision * recall)
    else:
        fmi = UNDEFINED
    return ExternalIndices(
        jaccard=_ratio(a, a + b + c),
        fowlkes_mallows=fmi,
        rand=_ratio(a + d, a + b + c + d),
        a=a,
        b=b,
        c=c,
        d=d,
    )


@dataclass(frozen=True)
class InternalIndices:
    davies_bouldin: Metric
    dunn: Metric

    def to_json(self) -> Dict[str, Any]:
        return {"DBI": to_json_value(self.davies_bouldin), "DI": to_json_value(self.dunn)}


def _distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2))


def internal_indices(rows: Any, assignment: ClusterAssignment) -> InternalIndices:
    """Davies-Bouldin (smaller is better) and Dunn (larger is better) indices under Euclidean distance.

    ``avg(C)`` is the mean distance over the pairs inside a cluster and ``diam(C)`` the largest; both are 0 for
    a singleton. Zero denominators make an index infinite.
    """
    rows = np.asarray(rows, dtype=float)
    if len(rows) != assignment.n_rows:
        raise LengthMismatch(f"{len(rows)} rows but an assignment of {assignment.n_rows}")
    clusters: List[np.ndarray] = [rows[members] for members in assignment.clusters() if len(members)]
    if len(clusters) < 2:
        raise SingleCluster(f"validity indices need at least 2 clusters, got {len(clusters)}")

    averages, diameters = [], []
    for points in clusters:
        inside = _distances(points, points)
        size = len(points)
        averages.append(float(inside.sum()) / (size * (size - 1)) if size > 1 else 0.0)
        diameters.append(float(inside.max()))
    centers = np.array([points.mean(axis=0) for points in clusters])
    between_centers = _distances(centers, centers)

    k = len(clusters)
    worst: List[float] = []
    davies_bouldin: Metric
    for i in range(k):
        ratios = []
        for j in range(k):
            if i == j:
                continue
            spread = averages[i] + averages[j]
            if between_centers[i, j] == 0.0:
                ratios.append(math.inf if spread > 0 else 0.0)
            else:
                ratios.append(spread / float(between_centers[i, j]))
        worst.append(max(ratios))
    total = sum(worst) / k
    davies_bouldin = INFINITE if math.isinf(total) else total

    separation = min(float(_distances(clusters[i], clusters[j]).min()) for i in range(k) for j in range(i + 1, k))
    widest = max(diameters)
    dunn: Metric
    if widest == 0.0:
        dunn = INFINITE if separation > 0 else UNDEFINED
    else:
        dunn = separation / widest
    return InternalIndices(davies_bouldin=davies_bouldin, dunn=dunn)
