"""Evaluation protocols: hold-out, k-fold cross validation and the bootstrap."""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Tuple, Union

import numpy as np

from .config import make_rng, ordered_map
from .dataset import Dataset, class_groups, train_test_indices
from .errors import ClassTooSmall, Empty, KTooLarge, StratifyWithoutLabels, UsageError
from .metrics import Scorer, defined_mean, get_scorer
from .serialization import register_model

if TYPE_CHECKING:
    from .estimators.base import EstimatorSpec

logger = logging.getLogger(__name__)

Split = Tuple[np.ndarray, np.ndarray]


@register_model("fold-plan")
@dataclass(frozen=True)
class FoldPlan:
    """Disjoint test folds covering every row once, each in ascending row order."""

    k: int
    folds: Tuple[Tuple[int, ...], ...]
    stratified: bool
    seed: int

    @property
    def n_rows(self) -> int:
        return sum(len(fold) for fold in self.folds)

    def splits(self) -> List[Split]:
        """``(train, test)`` row positions per fold, the train part is the complement of the fold."""
        all_rows = np.arange(self.n_rows)
        result = []
        for fold in self.folds:
            test = np.asarray(fold, dtype=int)
            mask = np.ones(self.n_rows, dtype=bool)
            mask[test] = False
            result.append((all_rows[mask], test))
        return result


@register_model("holdout-plan")
@dataclass(frozen=True)
class HoldoutPlan:
    """A single train/test partition, usable wherever a fold plan is."""

    train: Tuple[int, ...]
    test: Tuple[int, ...]
    stratified: bool
    seed: int

    def splits(self) -> List[Split]:
        return [(np.asarray(self.train, dtype=int), np.asarray(self.test, dtype=int))]


Plan = Union[FoldPlan, HoldoutPlan]


def holdout_plan(dataset: Dataset, test_fraction: float, seed: int, stratified: bool = False) -> HoldoutPlan:
    train, test = train_test_indices(dataset, test_fraction, seed, stratified)
    return HoldoutPlan(
        train=tuple(int(i) for i in train), test=tuple(int(i) for i in test), stratified=stratified, seed=seed
    )


def k_fold(dataset: Dataset, k: int, seed: int, stratified: bool = False) -> FoldPlan:
    """Partitions the rows into ``k`` folds whose sizes differ by at most one.

    Stratified plans shuffle each class, concatenate the classes and deal the rows round-robin,
    so every class is spread over the folds as evenly as possible. ``k = n_rows`` is leave-one-out.
    """
    n = dataset.n_rows
    if k < 2:
        raise UsageError(f"'k' of k-fold cross validation must be at least 2, got {k}")
    if k > n:
        raise KTooLarge(f"'k' = {k} exceeds the {n} rows of the dataset")
    rng = make_rng(seed)
    if stratified:
        if not dataset.has_labels:
            raise StratifyWithoutLabels("stratified folds require a label column")
        groups = class_groups(dataset)
        for group, label in zip(groups, dataset.classes()):
            if len(group) < k:
                raise ClassTooSmall(f"class {label!r} has {len(group)} rows, fewer than k = {k}")
        order = np.concatenate([rng.permutation(group) for group in groups])
        folds = [order[j::k] for j in range(k)]
    else:
        folds = np.array_split(rng.permutation(n), k)
    return FoldPlan(
        k=k, folds=tuple(tuple(sorted(int(i) for i in fold)) for fold in folds), stratified=stratified, seed=seed
    )


def leave_one_out(dataset: Dataset) -> FoldPlan:
    return k_fold(dataset, dataset.n_rows, seed=0)


@dataclass(frozen=True)
class CvResult:
    metric: str
    scores: Tuple[float, ...]

    @property
    def mean(self) -> float:
        """Mean over the folds with a defined score."""
        return defined_mean(self.scores)


def evaluate_split(dataset: Dataset, split: Split, spec: "EstimatorSpec", scorer: Scorer) -> float:
    train, test = split
    train_set, test_set = dataset.take(train), dataset.take(test)
    model = spec.fit(train_set)
    return scorer(test_set.label_values(), model.predict(test_set))


def cross_validate(
    dataset: Dataset, plan: Plan, spec: "EstimatorSpec", metric: Union[str, Scorer] = "accuracy", parallel: bool = True
) -> CvResult:
    """Scores of ``spec`` on every fold of ``plan``, in fold order, and their arithmetic mean."""
    scorer = get_scorer(metric)
    splits = plan.splits()

    def run(split: Split) -> float:
        return evaluate_split(dataset, split, spec, scorer)

    scores = ordered_map(run, splits) if parallel else [run(split) for split in splits]
    for i, score in enumerate(scores):
        logger.debug("fold %d: %s = %.6g", i, scorer.name, score)
    result = CvResult(metric=scorer.name, scores=tuple(float(s) for s in scores))
    logger.info("%d folds, mean %s = %.6g", len(scores), scorer.name, result.mean)
    return result


def bootstrap_indices(n: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """``n`` draws with replacement and the sorted positions never drawn."""
    if n < 1:
        raise Empty("the bootstrap needs at least one row")
    in_bag = rng.integers(0, n, size=n)
    drawn = np.zeros(n, dtype=bool)
    drawn[in_bag] = True
    return in_bag, np.flatnonzero(~drawn)


def bootstrap(dataset: Dataset, seed: int) -> Tuple[Dataset, Dataset]:
    """In-bag sample (with multiplicity) and out-of-bag rows; about 36.8% of the rows end up out of bag."""
    in_bag, out_of_bag = bootstrap_indices(dataset.n_rows, make_rng(seed))
    return dataset.take(in_bag), dataset.take(out_of_bag)
