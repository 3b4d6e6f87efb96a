"""Bagging with out-of-bag estimates, and AdaBoost.M1 over any registered base estimator.

Both ensemble specs pass keys they don't know themselves on to the base spec, so
``bagging:base=tree,T=25,max_depth=1`` bags depth-one trees.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Mapping, Tuple, Type, TypeVar

import numpy as np

from ..config import ordered_map, spawn_rngs
from ..dataset import Dataset, Label
from ..errors import AllRowsInAllBags, LengthMismatch, NoUsefulWeakLearner, UsageError
from ..metrics import mse
from ..params import coerced_kwargs
from ..resampling import bootstrap_indices
from ..serialization import register_model
from .base import (
    SPECS,
    EstimatorSpec,
    Model,
    WeightedEstimatorSpec,
    binary_classes,
    majority,
    register_spec,
    require_labels,
    to_signs,
)

logger = logging.getLogger(__name__)

E = TypeVar("E", bound="_ForwardingSpec")


class _ForwardingSpec(EstimatorSpec):
    """Spec with a ``base`` estimator name whose hyperparameters travel in ``base_params``."""

    base: str
    T: int
    seed: int
    base_params: Tuple[Tuple[str, str], ...]

    def base_spec(self) -> EstimatorSpec:
        cls = SPECS.get(self.base)
        return cls.from_params(dict(self.base_params))  # type: ignore[attr-defined,no-any-return]

    @classmethod
    def _route(cls, params: Mapping[str, Any]) -> Tuple[Dict[str, Any], Dict[str, str]]:
        own_keys = {"base", "T", "seed"}
        own = {key: value for key, value in params.items() if key in own_keys}
        forwarded = {key: str(value) for key, value in params.items() if key not in own_keys}
        return coerced_kwargs(cls, own, SPECS.name_of(cls)), forwarded

    @classmethod
    def from_params(cls: Type[E], params: Mapping[str, Any]) -> E:
        own, forwarded = cls._route(params)
        return cls(**own, base_params=tuple(sorted(forwarded.items())))  # type: ignore[call-arg]

    def with_params(self: E, params: Mapping[str, Any]) -> E:
        own, forwarded = self._route(params)
        merged = dict(self.base_params)
        merged.update(forwarded)
        return replace(self, **own, base_params=tuple(sorted(merged.items())))  # type: ignore[type-var]

    def _check(self) -> None:
        if self.T < 1:
            raise UsageError(f"'T' of '{self.name}' must be at least 1, got {self.T}")
        if self.base in ("bagging", "adaboost"):
            raise UsageError(f"'{self.name}' cannot use the ensemble '{self.base}' as its base")
        self.base_spec()


@register_model("bagging")
@dataclass(frozen=True)
class BaggingModel(Model):
    """``bags[t]`` holds the (repeated) training rows member ``t`` was fitted on."""

    names: Tuple[str, ...]
    members: Tuple[Model, ...]
    bags: Tuple[Tuple[int, ...], ...]
    regression: bool = False

    def member_predictions(self, dataset: Dataset) -> List[List[Label]]:
        return [member.predict(dataset) for member in self.members]

    def _combine(self, votes: List[Label]) -> Label:
        if self.regression:
            return float(np.mean(np.asarray(votes, dtype=float)))
        return majority(votes)

    def predict(self, dataset: Dataset) -> List[Label]:
        predictions = self.member_predictions(dataset)
        return [self._combine([column[i] for column in predictions]) for i in range(dataset.n_rows)]


@dataclass(frozen=True)
class OobReport:
    """Out-of-bag error over the rows left out by at least one member; ``skipped`` rows were in every bag.

    The error is the misclassification rate, or the mean squared error for regression ensembles.
    """

    error: float
    covered: int
    skipped: int


def bagging_fit(dataset: Dataset, base_spec: EstimatorSpec, T: int, seed: int) -> BaggingModel:
    labels = require_labels(dataset, "bagging")
    if T < 1:
        raise UsageError(f"'T' of 'bagging' must be at least 1, got {T}")
    rngs = spawn_rngs(seed, T)

    def train(rng: np.random.Generator) -> Tuple[Model, Tuple[int, ...]]:
        in_bag, _ = bootstrap_indices(len(labels), rng)
        return base_spec.fit(dataset.take(in_bag)), tuple(int(i) for i in in_bag)

    trained = ordered_map(train, rngs)
    logger.info("bagging: %d members of '%s'", T, base_spec.name)
    return BaggingModel(
        names=dataset.names,
        members=tuple(model for model, _ in trained),
        bags=tuple(bag for _, bag in trained),
        regression=base_spec.is_regressor,
    )


def bagging_predict(model: BaggingModel, dataset: Dataset) -> List[Label]:
    return model.predict(dataset)


def oob_report(model: BaggingModel, dataset: Dataset) -> OobReport:
    """Each row is predicted by the vote of the members whose bag excludes it; ``dataset`` is the training set."""
    labels = require_labels(dataset, "bagging")
    n = len(labels)
    if any(max(bag, default=-1) >= n for bag in model.bags):
        raise LengthMismatch(f"the bags index rows beyond the {n} rows given, pass the training dataset")
    excluded = np.ones((len(model.bags), n), dtype=bool)
    for t, bag in enumerate(model.bags):
        excluded[t, list(bag)] = False
    predictions = model.member_predictions(dataset)

    truth: List[Label] = []
    guesses: List[Label] = []
    for i in range(n):
        votes = [predictions[t][i] for t in range(len(model.members)) if excluded[t, i]]
        if votes:
            truth.append(labels[i])
            guesses.append(model._combine(votes))
    skipped = n - len(truth)
    if not truth:
        raise AllRowsInAllBags("every row is in every bag, the out-of-bag error is undefined")
    if skipped:
        logger.warning("%d of %d rows are in every bag and are left out of the OOB error", skipped, n)
    if model.regression:
        error = mse(truth, guesses)  # type: ignore[arg-type]
    else:
        error = sum(1 for y, h in zip(truth, guesses) if y != h) / len(truth)
    return OobReport(error=float(error), covered=len(truth), skipped=skipped)


def oob_error(model: BaggingModel, dataset: Dataset) -> float:
    return oob_report(model, dataset).error


@register_spec("bagging")
@dataclass(frozen=True)
class BaggingSpec(_ForwardingSpec):
    base: str = "tree"
    T: int = 10
    seed: int = 0
    base_params: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        self._check()

    def fit(self, dataset: Dataset) -> BaggingModel:
        return bagging_fit(dataset, self.base_spec(), self.T, self.seed)


@dataclass(frozen=True)
class BoostRound:
    """One retained round: the weighted error and vote weight of its member, the row weights it was trained on
    and the weights after the update."""

    error: float
    beta: float
    weights: np.ndarray
    updated: np.ndarray


@register_model("adaboost")
@dataclass(frozen=True)
class AdaBoostModel(Model):
    names: Tuple[str, ...]
    classes: Tuple[Label, Label]
    members: Tuple[Model, ...]
    betas: Tuple[float, ...]
    trace: Tuple[BoostRound, ...] = ()

    def decision_function(self, dataset: Dataset) -> np.ndarray:
        """``sum_t beta_t h_t(x)`` with the member predictions mapped to -1/+1."""
        score = np.zeros(dataset.n_rows)
        for member, beta in zip(self.members, self.betas):
            score += beta * to_signs(member.predict(dataset), self.classes)
        return score

    def predict(self, dataset: Dataset) -> List[Label]:
        return [self.classes[1] if value >= 0.0 else self.classes[0] for value in self.decision_function(dataset)]


def adaboost_fit(dataset: Dataset, base_spec: EstimatorSpec, T: int, seed: int = 0) -> AdaBoostModel:
    """AdaBoost.M1 with ``beta = ln((1 - e) / e) / 2``.

    Base learners without row weights are trained on a weighted bootstrap resample drawn with the seed.
    A perfect member (error 0) gets weight 1 and ends training; a member no better than chance ends
    training without being kept, and fails it in the first round.
    """
    labels = require_labels(dataset, "adaboost")
    classes = binary_classes(labels, "adaboost")
    if T < 1:
        raise UsageError(f"'T' of 'adaboost' must be at least 1, got {T}")
    signs = to_signs(labels, classes)
    n = len(labels)
    weights = np.full(n, 1.0 / n)
    rngs = spawn_rngs(seed, T)
    members: List[Model] = []
    betas: List[float] = []
    trace: List[BoostRound] = []

    for t in range(T):
        if isinstance(base_spec, WeightedEstimatorSpec):
            member = base_spec.fit_weighted(dataset, weights)
        else:
            drawn = rngs[t].choice(n, size=n, replace=True, p=weights)
            member = base_spec.fit(dataset.take(drawn))
        predicted = to_signs(member.predict(dataset), classes)
        wrong = predicted != signs
        error = float(weights[wrong].sum())
        logger.debug("AdaBoost round %d: weighted error %.6g", t + 1, error)

        if error >= 0.5:
            if t == 0:
                raise NoUsefulWeakLearner(f"the first '{base_spec.name}' has weighted error {error:.4g} >= 0.5")
            logger.warning("AdaBoost stops after %d rounds, round %d has error %.4g >= 0.5", t, t + 1, error)
            break
        if error == 0.0:
            members.append(member)
            betas.append(1.0)
            trace.append(BoostRound(error, 1.0, weights, weights))
            break

        beta = 0.5 * math.log((1.0 - error) / error)
        updated = weights * np.exp(-beta * signs * predicted)
        updated = updated / updated.sum()
        members.append(member)
        betas.append(beta)
        trace.append(BoostRound(error, beta, weights, updated))
        weights = updated

    logger.info("AdaBoost: %d rounds kept", len(members))
    return AdaBoostModel(
        names=dataset.names, classes=classes, members=tuple(members), betas=tuple(betas), trace=tuple(trace)
    )


def adaboost_predict(model: AdaBoostModel, dataset: Dataset) -> List[Label]:
    return model.predict(dataset)


@register_spec("adaboost")
@dataclass(frozen=True)
class AdaBoostSpec(_ForwardingSpec):
    base: str = "stump"
    T: int = 50
    seed: int = 0
    base_params: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        self._check()

    def fit(self, dataset: Dataset) -> AdaBoostModel:
        return adaboost_fit(dataset, self.base_spec(), self.T, self.seed)
