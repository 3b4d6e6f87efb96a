"""Hyperparameter search over a grid or by random sampling."""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import make_rng, ordered_map
from .dataset import Dataset
from .errors import EmptySpace, UsageError
from .estimators.base import EstimatorSpec
from .metrics import Scorer, defined_mean, get_scorer
from .resampling import Plan, cross_validate

logger = logging.getLogger(__name__)


class SearchMode(Enum):
    GRID = "grid"
    RANDOM = "random"


@dataclass(frozen=True)
class ParamRange:
    """A numeric interval: ``steps`` evenly spaced values for a grid, uniform draws for random search."""

    low: float
    high: float
    steps: int = 5
    integer: bool = False
    log: bool = False

    def __post_init__(self) -> None:
        if self.high < self.low:
            raise UsageError(f"range [{self.low}, {self.high}] is empty")
        if self.steps < 1:
            raise UsageError(f"'steps' of a range must be at least 1, got {self.steps}")
        if self.log and self.low <= 0:
            raise UsageError(f"a log range needs a positive lower bound, got {self.low}")

    def _cast(self, value: float) -> Union[int, float]:
        return int(round(value)) if self.integer else float(value)

    def values(self) -> Tuple[Union[int, float], ...]:
        if self.log:
            points = np.geomspace(self.low, self.high, self.steps)
        else:
            points = np.linspace(self.low, self.high, self.steps)
        return tuple(dict.fromkeys(self._cast(p) for p in points))

    def sample(self, rng: np.random.Generator) -> Union[int, float]:
        if self.integer:
            return int(rng.integers(int(np.ceil(self.low)), int(np.floor(self.high)) + 1))
        if self.log:
            return float(np.exp(rng.uniform(np.log(self.low), np.log(self.high))))
        return float(rng.uniform(self.low, self.high))


Candidates = Union[Tuple[Any, ...], ParamRange]


@dataclass(frozen=True)
class SearchSpace:
    """Candidate values per hyperparameter (in enumeration order) plus the sampling configuration."""

    params: Tuple[Tuple[str, Candidates], ...]
    mode: SearchMode = SearchMode.GRID
    n_samples: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.params:
            raise EmptySpace("the search space has no hyperparameters")
        for name, candidates in self.params:
            if isinstance(candidates, tuple) and not candidates:
                raise EmptySpace(f"hyperparameter '{name}' has no candidate values")
        if self.mode is SearchMode.RANDOM and self.n_samples < 1:
            raise EmptySpace(f"random search needs at least one sample, got {self.n_samples}")

    @classmethod
    def of(cls, params: Dict[str, Union[Sequence[Any], ParamRange]], **kwargs: Any) -> "SearchSpace":
        return cls(
            params=tuple(
                (name, values if isinstance(values, ParamRange) else tuple(values)) for name, values in params.items()
            ),
            **kwargs,
        )

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.params)

    def _grids(self) -> List[Tuple[Any, ...]]:
        return [c.values() if isinstance(c, ParamRange) else c for _, c in self.params]

    def grid(self) -> List[Dict[str, Any]]:
        """Full Cartesian product, the last hyperparameter varying fastest."""
        return [dict(zip(self.names, combination)) for combination in itertools.product(*self._grids())]

    def sample(self) -> List[Dict[str, Any]]:
        """``n_samples`` configurations.

        Spaces made only of discrete candidates are sampled without replacement (at most the whole grid),
        and the draws are kept in grid enumeration order. Spaces with a range draw every value independently.
        """
        rng = make_rng(self.seed)
        if all(not isinstance(c, ParamRange) for _, c in self.params):
            grid = self.grid()
            chosen = rng.choice(len(grid), size=min(self.n_samples, len(grid)), replace=False)
            return [grid[i] for i in sorted(int(i) for i in chosen)]
        configurations = []
        for _ in range(self.n_samples):
            configurations.append(
                {
                    name: c.sample(rng) if isinstance(c, ParamRange) else c[int(rng.integers(len(c)))]
                    for name, c in self.params
                }
            )
        return configurations

    def candidates(self) -> List[Dict[str, Any]]:
        return self.grid() if self.mode is SearchMode.GRID else self.sample()


@dataclass(frozen=True)
class CandidateScore:
    params: Dict[str, Any]
    scores: Tuple[float, ...]

    @property
    def mean(self) -> float:
        return defined_mean(self.scores)


@dataclass(frozen=True)
class SearchResult:
    metric: str
    best_params: Dict[str, Any]
    best_score: float
    table: Tuple[CandidateScore, ...]


def _search(
    dataset: Dataset,
    candidates: List[Dict[str, Any]],
    spec: EstimatorSpec,
    plan: Plan,
    metric: Union[str, Scorer],
) -> SearchResult:
    scorer = get_scorer(metric)
    specs = [spec.with_params(params) for params in candidates]

    def evaluate(candidate: EstimatorSpec) -> Tuple[float, ...]:
        return cross_validate(dataset, plan, candidate, scorer, parallel=False).scores

    all_scores = ordered_map(evaluate, specs)
    table = tuple(CandidateScore(params, scores) for params, scores in zip(candidates, all_scores))
    best: Optional[CandidateScore] = None
    for row in table:
        logger.debug("%s: mean %s = %.6g", row.params, scorer.name, row.mean)
        if best is None or scorer.better(row.mean, best.mean):
            best = row
    assert best is not None
    logger.info("best of %d candidates: %s with %s = %.6g", len(table), best.params, scorer.name, best.mean)
    return SearchResult(metric=scorer.name, best_params=best.params, best_score=best.mean, table=table)


def grid_search(
    dataset: Dataset, space: SearchSpace, spec: EstimatorSpec, plan: Plan, metric: Union[str, Scorer] = "accuracy"
) -> SearchResult:
    """Evaluates every combination; on equal scores the first combination in enumeration order wins."""
    return _search(dataset, space.grid(), spec, plan, metric)


def random_search(
    dataset: Dataset, space: SearchSpace, spec: EstimatorSpec, plan: Plan, metric: Union[str, Scorer] = "accuracy"
) -> SearchResult:
    return _search(dataset, space.sample(), spec, plan, metric)


def search(
    dataset: Dataset, space: SearchSpace, spec: EstimatorSpec, plan: Plan, metric: Union[str, Scorer] = "accuracy"
) -> SearchResult:
    return _search(dataset, space.candidates(), spec, plan, metric)


def parse_space(text: str, mode: SearchMode = SearchMode.GRID, n_samples: int = 10, seed: int = 0) -> SearchSpace:
    """``k=1|3|5;C=0.1|1|10`` for lists or ``C=0.01..100/5:log`` for a range with 5 steps."""
    params: Dict[str, Union[Sequence[Any], ParamRange]] = {}
    for item in text.split(";"):
        if not item.strip():
            continue
        name, sep, values = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"expected 'name=v1|v2|...' or 'name=low..high/steps', got '{item}'")
        values = values.strip()
        if ".." in values:
            bounds, _, options = values.partition(":")
            interval, _, steps = bounds.partition("/")
            low, _, high = interval.partition("..")
            try:
                params[name.strip()] = ParamRange(
                    low=float(low),
                    high=float(high),
                    steps=int(steps) if steps else 5,
                    integer="int" in options.split("+"),
                    log="log" in options.split("+"),
                )
            except ValueError:
                raise UsageError(f"malformed range '{values}' for '{name.strip()}'") from None
        else:
            params[name.strip()] = [v.strip() for v in values.split("|") if v.strip()]
    return SearchSpace.of(params, mode=mode, n_samples=n_samples, seed=seed)
