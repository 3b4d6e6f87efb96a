from .assignment import NOISE, ClusterAssignment, Role
from .dbscan import DbscanResult, dbscan
from .gmm import GmmInit, GmmModel, gmm_em, gmm_init, gmm_responsibilities, rows_init
from .hierarchical import Dendrogram, Linkage, Merge, Method, agglomerative, cut_dendrogram, diana
from .kmeans import Init, KMeansModel, kmeans
from .specs import (
    CLUSTERERS,
    AggloSpec,
    ClusterRun,
    ClusterSpec,
    DbscanSpec,
    DianaSpec,
    GmmSpec,
    KMeansSpec,
    parse_clusterer,
)
from .validity import ExternalIndices, InternalIndices, external_indices, internal_indices, pair_counts

__all__ = [
    "CLUSTERERS",
    "NOISE",
    "AggloSpec",
    "ClusterAssignment",
    "ClusterRun",
    "ClusterSpec",
    "DbscanResult",
    "DbscanSpec",
    "Dendrogram",
    "DianaSpec",
    "ExternalIndices",
    "GmmInit",
    "GmmModel",
    "GmmSpec",
    "Init",
    "InternalIndices",
    "KMeansModel",
    "KMeansSpec",
    "Linkage",
    "Merge",
    "Method",
    "Role",
    "agglomerative",
    "cut_dendrogram",
    "dbscan",
    "diana",
    "external_indices",
    "gmm_em",
    "gmm_init",
    "gmm_responsibilities",
    "internal_indices",
    "kmeans",
    "pair_counts",
    "parse_clusterer",
    "rows_init",
]
