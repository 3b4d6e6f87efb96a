"""Agglomerative (single, complete and average linkage) and divisive (DIANA) hierarchical clustering.

Both produce a :class:`Dendrogram`: leaves are the row indices ``0..n-1``, internal node ``n + i`` is the
``i``-th entry of :attr:`Dendrogram.merges`, whose children always appear before it.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import AsymmetricMatrix, KTooLarge, NegativeDistance, ShapeMismatch, UsageError
from ..serialization import register_model
from .assignment import ClusterAssignment

logger = logging.getLogger(__name__)


class Linkage(Enum):
    SINGLE = "single"
    COMPLETE = "complete"
    AVERAGE = "average"


class Method(Enum):
    AGGLOMERATIVE = "agglomerative"
    DIANA = "diana"


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float


@register_model("dendrogram")
@dataclass(frozen=True)
class Dendrogram:
    n_leaves: int
    merges: Tuple[Merge, ...]
    method: Method
    linkage: Optional[Linkage] = None

    @property
    def root(self) -> int:
        return self.n_leaves + len(self.merges) - 1 if self.merges else 0

    def is_leaf(self, node: int) -> bool:
        return node < self.n_leaves

    def merge(self, node: int) -> Merge:
        return self.merges[node - self.n_leaves]

    def height(self, node: int) -> float:
        return 0.0 if self.is_leaf(node) else self.merge(node).height

    def leaves(self, node: int) -> List[int]:
        """Rows below ``node``, ascending."""
        if self.is_leaf(node):
            return [node]
        merge = self.merge(node)
        return sorted(self.leaves(merge.left) + self.leaves(merge.right))

    def heights(self) -> List[float]:
        return [merge.height for merge in self.merges]

    def to_tree(self, names: Optional[Sequence[str]] = None) -> Dict[str, Any]:
        """Nested ``{"left", "right", "height"}`` objects with ``{"leaf", "name"}`` at the leaves."""

        def build(node: int) -> Dict[str, Any]:
            if self.is_leaf(node):
                return {"leaf": node, "name": names[node] if names is not None else str(node)}
            merge = self.merge(node)
            return {"left": build(merge.left), "right": build(merge.right), "height": merge.height}

        return build(self.root)

    def to_newick(self, names: Optional[Sequence[str]] = None) -> str:
        """Newick text; a branch is as long as the height difference between parent and child."""

        def label(node: int) -> str:
            return names[node] if names is not None else str(node)

        def build(node: int, parent_height: float) -> str:
            length = format(parent_height - self.height(node), "g")
            if self.is_leaf(node):
                return f"{label(node)}:{length}"
            merge = self.merge(node)
            height = merge.height
            return f"({build(merge.left, height)},{build(merge.right, height)}):{length}"

        if self.n_leaves == 1:
            return f"{label(0)};"
        merge = self.merge(self.root)
        return f"({build(merge.left, merge.height)},{build(merge.right, merge.height)});"


def check_distance_matrix(matrix: Any) -> np.ndarray:
    d = np.asarray(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ShapeMismatch(f"a distance matrix must be square, got shape {d.shape}")
    if d.shape[0] == 0:
        raise ShapeMismatch("the distance matrix is empty")
    if np.any(d < 0):
        raise NegativeDistance("distances must be non-negative")
    scale = max(1.0, float(np.max(np.abs(d))))
    if not np.allclose(d, d.T, rtol=0.0, atol=1e-12 * scale):
        raise AsymmetricMatrix("the distance matrix is not symmetric")
    if np.any(np.abs(np.diag(d)) > 1e-12 * scale):
        raise AsymmetricMatrix("the distance matrix needs a zero diagonal")
    return d


def agglomerative(matrix: Any, linkage: Linkage = Linkage.COMPLETE) -> Dendrogram:
    """Repeatedly merges the two clusters at the smallest linkage distance.

    Equal distances go to the pair whose smallest members are lexicographically first; the cluster holding
    the smaller row becomes the left child.
    """
    d = check_distance_matrix(matrix)
    n = len(d)
    # cluster distances between active nodes, updated with the linkage rule after each merge
    between: Dict[Tuple[int, int], float] = {(i, j): float(d[i, j]) for i in range(n) for j in range(i + 1, n)}
    members: Dict[int, List[int]] = {i: [i] for i in range(n)}
    merges: List[Merge] = []

    def key(pair: Tuple[int, int]) -> Tuple[float, int, int]:
        a, b = sorted((min(members[pair[0]]), min(members[pair[1]])))
        return between[pair], a, b

    while len(members) > 1:
        left, right = min(between, key=key)
        if min(members[right]) < min(members[left]):
            left, right = right, left
        height = between[(min(left, right), max(left, right))]
        node = n + len(merges)
        merges.append(Merge(left, right, height))
        logger.debug("merge %d + %d at %.6g", left, right, height)

        size_left, size_right = len(members[left]), len(members[right])
        members[node] = members.pop(left) + members.pop(right)
        for other in list(members):
            if other == node:
                continue
            to_left = between.pop((min(other, left), max(other, left)))
            to_right = between.pop((min(other, right), max(other, right)))
            if linkage is Linkage.SINGLE:
                value = min(to_left, to_right)
            elif linkage is Linkage.COMPLETE:
                value = max(to_left, to_right)
            else:
                value = (size_left * to_left + size_right * to_right) / (size_left + size_right)
            between[(other, node)] = value
        del between[(min(left, right), max(left, right))]

    logger.info("%s linkage: %d merges", linkage.value, len(merges))
    return Dendrogram(n_leaves=n, merges=tuple(merges), method=Method.AGGLOMERATIVE, linkage=linkage)


def diameter(d: np.ndarray, members: Sequence[int]) -> float:
    if len(members) < 2:
        return 0.0
    return float(d[np.ix_(members, members)].max())


def splinter_split(d: np.ndarray, members: Sequence[int]) -> Tuple[List[int], List[int]]:
    """DIANA's split of one cluster: seed the splinter group with the member of largest average dissimilarity,
    then keep moving the member that is on average closer to the splinter group, while any is.

    Equal values go to the lower row index. Returns ``(splinter, rest)``.
    """
    rest = sorted(members)
    averages = [float(d[i, [j for j in rest if j != i]].mean()) for i in rest]
    seed = rest[int(np.argmax(averages))]
    splinter = [seed]
    rest.remove(seed)
    while len(rest) > 1:
        gains = [
            float(d[i, [j for j in rest if j != i]].mean()) - float(d[i, splinter].mean()) for i in rest
        ]
        best = int(np.argmax(gains))
        if gains[best] <= 0.0:
            break
        splinter.append(rest.pop(best))
    return sorted(splinter), rest


def diana(matrix: Any) -> Dendrogram:
    """Divisive analysis: always split the cluster of largest diameter (ties to the one with the smaller row)
    until only singletons remain; a split's height is the diameter of the cluster it splits."""
    d = check_distance_matrix(matrix)
    n = len(d)
    open_clusters: List[List[int]] = [list(range(n))] if n > 1 else []
    splits: List[Tuple[List[int], List[int], float]] = []
    while open_clusters:
        cluster = min(open_clusters, key=lambda c: (-diameter(d, c), c[0]))
        open_clusters.remove(cluster)
        splinter, rest = splinter_split(d, cluster)
        left, right = (splinter, rest) if splinter[0] < rest[0] else (rest, splinter)
        height = diameter(d, cluster)
        splits.append((left, right, height))
        logger.debug("split %s into %s and %s at %.6g", cluster, left, right, height)
        open_clusters.extend(part for part in (left, right) if len(part) > 1)

    ids: Dict[FrozenSet[int], int] = {}
    merges: List[Merge] = []

    def node_of(part: List[int]) -> int:
        return part[0] if len(part) == 1 else ids[frozenset(part)]

    # later splits are deeper in the tree, so reversed they list children before parents
    for left, right, height in reversed(splits):
        merges.append(Merge(node_of(left), node_of(right), height))
        ids[frozenset(left + right)] = n + len(merges) - 1
    logger.info("DIANA: %d splits", len(splits))
    return Dendrogram(n_leaves=n, merges=tuple(merges), method=Method.DIANA)


def cut_dendrogram(dendrogram: Dendrogram, k: int) -> ClusterAssignment:
    """Flat assignment into ``k`` clusters, opening the highest nodes first (later nodes on equal heights).

    Cluster ids follow the smallest row of each cluster.
    """
    n = dendrogram.n_leaves
    if k < 1:
        raise UsageError(f"'k' must be at least 1, got {k}")
    if k > n:
        raise KTooLarge(f"'k' = {k} exceeds the {n} leaves")
    nodes = [dendrogram.root]
    while len(nodes) < k:
        node = max((m for m in nodes if not dendrogram.is_leaf(m)), key=lambda m: (dendrogram.height(m), m))
        nodes.remove(node)
        merge = dendrogram.merge(node)
        nodes.extend([merge.left, merge.right])
    groups = sorted(dendrogram.leaves(node) for node in nodes)
    ids = [0] * n
    for cluster, rows in enumerate(groups):
        for row in rows:
            ids[row] = cluster
    return ClusterAssignment(tuple(ids))
