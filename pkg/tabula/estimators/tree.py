"""Decision tree induction by greedy top-down splitting, with reduced-error post-pruning."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..dataset import Dataset, Label, train_test_split
from ..errors import UsageError, ValidationRequiredForPostPrune
from ..serialization import register_model
from .base import EstimatorSpec, Model, register_spec, require_labels

logger = logging.getLogger(__name__)


class Criterion(Enum):
    ENTROPY = "entropy"
    GINI = "gini"


def entropy(counts: Any) -> float:
    """``-sum p_k log2 p_k`` over the non-empty classes, in bits."""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-np.sum(p * np.log2(p)))


def gini(counts: Any) -> float:
    """``1 - sum p_k^2``."""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.sum(p * p))


def impurity(criterion: Criterion, counts: Any) -> float:
    return entropy(counts) if criterion is Criterion.ENTROPY else gini(counts)


def split_gain(criterion: Criterion, parent: Any, children: Sequence[Any]) -> float:
    """Information gain (entropy) or Gini improvement of a split: parent impurity minus weighted child impurity."""
    total = float(np.sum(parent))
    weighted = sum(float(np.sum(child)) / total * impurity(criterion, child) for child in children)
    return impurity(criterion, parent) - weighted


@dataclass(frozen=True)
class Leaf:
    counts: Tuple[int, ...]


@dataclass(frozen=True)
class NumericSplit:
    """Rows with ``feature <= threshold`` go left."""

    feature: str
    threshold: float
    left: "Node"
    right: "Node"
    counts: Tuple[int, ...]


@dataclass(frozen=True)
class CategoricalSplit:
    """One branch per category seen at this node; unseen categories get the node's majority class."""

    feature: str
    categories: Tuple[str, ...]
    children: Tuple["Node", ...]
    counts: Tuple[int, ...]


Node = Union[Leaf, NumericSplit, CategoricalSplit]


def _majority(counts: Sequence[int]) -> int:
    # first maximum, i.e. label order on ties
    return int(np.argmax(counts))


def count_nodes(node: Node) -> int:
    if isinstance(node, Leaf):
        return 1
    if isinstance(node, NumericSplit):
        return 1 + count_nodes(node.left) + count_nodes(node.right)
    return 1 + sum(count_nodes(child) for child in node.children)


def depth(node: Node) -> int:
    if isinstance(node, Leaf):
        return 0
    if isinstance(node, NumericSplit):
        return 1 + max(depth(node.left), depth(node.right))
    return 1 + max(depth(child) for child in node.children)


@register_model("tree")
@dataclass(frozen=True)
class TreeModel(Model):
    names: Tuple[str, ...]
    classes: Tuple[Label, ...]
    criterion: Criterion
    root: Node
    # node counts before and after post-pruning, equal when the tree was not pruned
    nodes_grown: int
    nodes_kept: int

    def leaf_for(self, row: Dict[str, Any]) -> Tuple[int, ...]:
        """Class counts of the node a row ends in."""
        node = self.root
        while not isinstance(node, Leaf):
            if isinstance(node, NumericSplit):
                node = node.left if row[node.feature] <= node.threshold else node.right
            elif row[node.feature] in node.categories:
                node = node.children[node.categories.index(row[node.feature])]
            else:
                return node.counts
        return node.counts

    def predict_row(self, row: Dict[str, Any]) -> Label:
        return self.classes[_majority(self.leaf_for(row))]

    def predict(self, dataset: Dataset) -> List[Label]:
        return [self.predict_row(dict(zip(self.names, row))) for row in dataset.rows(self.names)]

    def export_text(self, decimals: int = 2) -> str:
        return tree_export_text(self, decimals)


class _Grower:
    def __init__(
        self,
        dataset: Dataset,
        classes: List[Label],
        criterion: Criterion,
        max_depth: Optional[int],
        min_leaf: int,
    ) -> None:
        labels = dataset.label_values()
        position = {label: i for i, label in enumerate(classes)}
        self.y = np.array([position[label] for label in labels], dtype=int)
        self.n_classes = len(classes)
        self.columns = [
            (c.name, c.is_numeric, c.array() if c.is_numeric else np.asarray(c.values, dtype=object))
            for c in dataset.columns
        ]
        self.criterion = criterion
        self.max_depth = max_depth
        self.min_leaf = min_leaf

    def counts(self, rows: np.ndarray) -> Tuple[int, ...]:
        return tuple(int(c) for c in np.bincount(self.y[rows], minlength=self.n_classes))

    def _best_numeric(self, values: np.ndarray, rows: np.ndarray, parent: Tuple[int, ...]) -> Tuple[float, float]:
        """Best ``(gain, threshold)`` over the midpoints of consecutive distinct values."""
        order = np.argsort(values[rows], kind="stable")
        sorted_values = values[rows][order]
        one_hot = np.eye(self.n_classes, dtype=int)[self.y[rows][order]]
        left_counts = np.cumsum(one_hot, axis=0)
        best = (-np.inf, np.nan)
        for i in range(self.min_leaf - 1, len(rows) - self.min_leaf):
            if sorted_values[i] == sorted_values[i + 1]:
                continue
            left = left_counts[i]
            right = np.asarray(parent) - left
            gain = split_gain(self.criterion, parent, [left, right])
            if gain > best[0] + 1e-12:
                best = (gain, (sorted_values[i] + sorted_values[i + 1]) / 2.0)
        return best

    def grow(self, rows: np.ndarray, level: int, used: Tuple[str, ...]) -> Node:
        counts = self.counts(rows)
        if (
            sum(1 for c in counts if c > 0) <= 1
            or (self.max_depth is not None and level >= self.max_depth)
            or len(rows) < 2 * self.min_leaf
        ):
            return Leaf(counts)

        best_gain = -np.inf
        best: Optional[Tuple[str, Any]] = None
        for name, numeric, values in self.columns:
            if numeric:
                gain, threshold = self._best_numeric(values, rows, counts)
                if gain > best_gain + 1e-12:
                    best_gain, best = gain, (name, float(threshold))
            elif name not in used:
                categories = tuple(sorted(set(values[rows])))
                groups = [rows[values[rows] == category] for category in categories]
                if len(groups) < 2 or min(len(g) for g in groups) < self.min_leaf:
                    continue
                gain = split_gain(self.criterion, counts, [self.counts(g) for g in groups])
                if gain > best_gain + 1e-12:
                    best_gain, best = gain, (name, categories)
        if best is None:
            return Leaf(counts)

        name, test = best
        values = next(v for n, _, v in self.columns if n == name)
        logger.debug("depth %d: split on '%s' (gain %.4f, %d rows)", level, name, best_gain, len(rows))
        if isinstance(test, float):
            goes_left = values[rows] <= test
            return NumericSplit(
                feature=name,
                threshold=test,
                left=self.grow(rows[goes_left], level + 1, used),
                right=self.grow(rows[~goes_left], level + 1, used),
                counts=counts,
            )
        return CategoricalSplit(
            feature=name,
            categories=test,
            children=tuple(self.grow(rows[values[rows] == c], level + 1, used + (name,)) for c in test),
            counts=counts,
        )


def _prune(model: TreeModel, node: Node, rows: List[Dict[str, Any]], truth: List[int]) -> Node:
    """Bottom-up reduced-error pruning: a subtree becomes a leaf when that doesn't lose validation accuracy."""
    if isinstance(node, Leaf):
        return node
    if isinstance(node, NumericSplit):
        left = [i for i, row in enumerate(rows) if row[node.feature] <= node.threshold]
        right = [i for i, row in enumerate(rows) if not row[node.feature] <= node.threshold]
        node = NumericSplit(
            node.feature,
            node.threshold,
            _prune(model, node.left, [rows[i] for i in left], [truth[i] for i in left]),
            _prune(model, node.right, [rows[i] for i in right], [truth[i] for i in right]),
            node.counts,
        )
    else:
        children = []
        for category, child in zip(node.categories, node.children):
            routed = [i for i, row in enumerate(rows) if row[node.feature] == category]
            children.append(_prune(model, child, [rows[i] for i in routed], [truth[i] for i in routed]))
        node = CategoricalSplit(node.feature, node.categories, tuple(children), node.counts)

    subtree = TreeModel(model.names, model.classes, model.criterion, node, 0, 0)
    subtree_correct = sum(
        1 for row, t in zip(rows, truth) if model.classes.index(subtree.predict_row(row)) == t
    )
    leaf_correct = sum(1 for t in truth if t == _majority(node.counts))
    if leaf_correct >= subtree_correct:
        return Leaf(node.counts)
    return node


def tree_fit(
    dataset: Dataset,
    criterion: Criterion = Criterion.ENTROPY,
    max_depth: Optional[int] = None,
    min_leaf: int = 1,
    post_prune: bool = False,
    validation: Optional[Dataset] = None,
) -> TreeModel:
    labels = require_labels(dataset, "tree")
    classes = sorted(set(labels))
    grower = _Grower(dataset, classes, criterion, max_depth, min_leaf)
    root = grower.grow(np.arange(dataset.n_rows), 0, ())
    grown = count_nodes(root)
    model = TreeModel(dataset.names, tuple(classes), criterion, root, grown, grown)
    if post_prune:
        if validation is None or not validation.has_labels:
            raise ValidationRequiredForPostPrune("post-pruning needs a labeled validation dataset")
        position = {label: i for i, label in enumerate(classes)}
        rows = [dict(zip(dataset.names, row)) for row in validation.rows(dataset.names)]
        # validation labels unknown to the tree can never be predicted correctly
        truth = [position.get(label, -1) for label in validation.label_values()]
        root = _prune(model, root, rows, truth)
        model = TreeModel(dataset.names, tuple(classes), criterion, root, grown, count_nodes(root))
        logger.info("post-pruning kept %d of %d nodes", model.nodes_kept, grown)
    logger.info("tree with %d nodes, depth %d", model.nodes_kept, depth(model.root))
    return model


def tree_predict(model: TreeModel, dataset: Dataset) -> List[Label]:
    return model.predict(dataset)


def tree_export_text(model: TreeModel, decimals: int = 2) -> str:
    """Indented rendering, one ``|---`` line per test outcome and ``class: <label>`` at the leaves."""
    lines: List[str] = []

    def leaf(node: Node, level: int) -> None:
        lines.append(f"{'|   ' * level}|--- class: {model.classes[_majority(node.counts)]}")

    def walk(node: Node, level: int) -> None:
        indent = "|   " * level
        if isinstance(node, Leaf):
            leaf(node, level)
        elif isinstance(node, NumericSplit):
            lines.append(f"{indent}|--- {node.feature} <= {node.threshold:.{decimals}f}")
            walk(node.left, level + 1)
            lines.append(f"{indent}|--- {node.feature} >  {node.threshold:.{decimals}f}")
            walk(node.right, level + 1)
        else:
            for category, child in zip(node.categories, node.children):
                lines.append(f"{indent}|--- {node.feature} == {category}")
                walk(child, level + 1)

    walk(model.root, 0)
    return "\n".join(lines)


@register_spec("tree")
@dataclass(frozen=True)
class TreeSpec(EstimatorSpec):
    """With ``post_prune`` a ``validation_fraction`` of the training rows is held back for pruning."""

    criterion: Criterion = Criterion.ENTROPY
    max_depth: Optional[int] = None
    min_leaf: int = 1
    post_prune: bool = False
    validation_fraction: Optional[float] = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_depth is not None and self.max_depth < 0:
            raise UsageError(f"'max_depth' of 'tree' must be non-negative, got {self.max_depth}")
        if self.min_leaf < 1:
            raise UsageError(f"'min_leaf' of 'tree' must be at least 1, got {self.min_leaf}")

    def fit(self, dataset: Dataset) -> TreeModel:
        if not self.post_prune:
            return tree_fit(dataset, self.criterion, self.max_depth, self.min_leaf)
        if self.validation_fraction is None:
            raise ValidationRequiredForPostPrune("'post_prune' of 'tree' needs a 'validation_fraction'")
        grow_set, validation = train_test_split(dataset, self.validation_fraction, self.seed)
        return tree_fit(grow_set, self.criterion, self.max_depth, self.min_leaf, True, validation)
