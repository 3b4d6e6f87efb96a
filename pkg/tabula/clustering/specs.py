"""Clustering algorithms as parameter dataclasses, built from the ``name:key=value`` flag syntax."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Optional, Tuple, Type, TypeVar

import numpy as np

from ..dataset import Dataset
from ..distance import EUCLIDEAN, DistanceMetric, pairwise
from ..errors import UsageError
from ..params import build, parse_micro, with_params
from ..serialization import Registry
from .assignment import ClusterAssignment, Role
from .dbscan import dbscan
from .gmm import gmm_em
from .hierarchical import Linkage, agglomerative, cut_dendrogram, diana
from .kmeans import Init, kmeans

C = TypeVar("C", bound="ClusterSpec")

CLUSTERERS = Registry("clustering algorithm", error=UsageError)


@dataclass(frozen=True)
class ClusterRun:
    """An assignment plus what the algorithm built on the way: a model, a dendrogram or DBSCAN roles."""

    assignment: ClusterAssignment
    artifact: Optional[Any] = None
    roles: Optional[Tuple[Role, ...]] = None


class ClusterSpec(ABC):
    # hierarchical methods also accept a square distance matrix instead of feature rows
    accepts_matrix = False

    @abstractmethod
    def run(self, dataset: Dataset, precomputed: bool = False) -> ClusterRun:
        ...

    @property
    def name(self) -> str:
        return CLUSTERERS.name_of(type(self))

    @classmethod
    def from_params(cls: Type[C], params: Mapping[str, Any]) -> C:
        return build(cls, params, owner=CLUSTERERS.name_of(cls))

    def with_params(self: C, params: Mapping[str, Any]) -> C:
        return with_params(self, params, owner=self.name)

    def _rows(self, dataset: Dataset, precomputed: bool) -> Dataset:
        if precomputed and not self.accepts_matrix:
            raise UsageError(f"'{self.name}' clusters feature rows, it cannot use a distance matrix")
        return dataset


def register_clusterer(name: str) -> Callable[[Type[C]], Type[C]]:
    return CLUSTERERS.register(name)


def parse_clusterer(text: str) -> ClusterSpec:
    """E.g. ``kmeans:k=2``, ``agglo:linkage=average,k=3`` or ``dbscan:eps=0.11,min_pts=5``."""
    name, params = parse_micro(text)
    return CLUSTERERS.get(name).from_params(params)  # type: ignore[attr-defined,no-any-return]


def _distances(dataset: Dataset, metric: DistanceMetric, precomputed: bool) -> np.ndarray:
    return dataset.matrix() if precomputed else pairwise(dataset.matrix(), metric)


@register_clusterer("kmeans")
@dataclass(frozen=True)
class KMeansSpec(ClusterSpec):
    k: int = 2
    init: Init = Init.FIRST_K
    seed: int = 0
    max_iter: int = 100
    tol: float = 0.0

    def run(self, dataset: Dataset, precomputed: bool = False) -> ClusterRun:
        rows = self._rows(dataset, precomputed)
        model, assignment = kmeans(rows, self.k, self.init, self.seed, self.max_iter, self.tol)
        return ClusterRun(assignment, model)


@register_clusterer("gmm")
@dataclass(frozen=True)
class GmmSpec(ClusterSpec):
    k: int = 2
    init: Init = Init.RANDOM
    seed: int = 0
    max_iter: int = 100
    tol: float = 1e-6
    ridge: float = 1e-6

    def run(self, dataset: Dataset, precomputed: bool = False) -> ClusterRun:
        model, assignment = gmm_em(
            self._rows(dataset, precomputed), self.k, self.init, self.seed, self.max_iter, self.tol, self.ridge
        )
        return ClusterRun(assignment, model)


@register_clusterer("agglo")
@dataclass(frozen=True)
class AggloSpec(ClusterSpec):
    """``k`` is the number of flat clusters cut from the dendrogram."""

    accepts_matrix = True

    linkage: Linkage = Linkage.COMPLETE
    k: int = 2
    metric: DistanceMetric = EUCLIDEAN

    def run(self, dataset: Dataset, precomputed: bool = False) -> ClusterRun:
        dendrogram = agglomerative(_distances(dataset, self.metric, precomputed), self.linkage)
        return ClusterRun(cut_dendrogram(dendrogram, self.k), dendrogram)


@register_clusterer("diana")
@dataclass(frozen=True)
class DianaSpec(ClusterSpec):
    accepts_matrix = True

    k: int = 2
    metric: DistanceMetric = EUCLIDEAN

    def run(self, dataset: Dataset, precomputed: bool = False) -> ClusterRun:
        dendrogram = diana(_distances(dataset, self.metric, precomputed))
        return ClusterRun(cut_dendrogram(dendrogram, self.k), dendrogram)


@register_clusterer("dbscan")
@dataclass(frozen=True)
class DbscanSpec(ClusterSpec):
    eps: float = 0.5
    min_pts: int = 5
    metric: DistanceMetric = EUCLIDEAN
    start: Optional[int] = None

    def run(self, dataset: Dataset, precomputed: bool = False) -> ClusterRun:
        result = dbscan(self._rows(dataset, precomputed), self.eps, self.min_pts, self.metric, self.start)
        return ClusterRun(result.assignment, roles=result.roles)
