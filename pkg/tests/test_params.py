from dataclasses import dataclass
from typing import Optional

import pytest

from tabula.distance import Infinity
from tabula.errors import UsageError
from tabula.estimators import KnnSpec, TreeSpec, parse_spec
from tabula.estimators.tree import Criterion
from tabula.params import build, parse_micro, with_params


@dataclass(frozen=True)
class Options:
    flag: bool = False
    count: int = 1
    rate: float = 0.5
    criterion: Criterion = Criterion.ENTROPY
    limit: Optional[int] = None


def test_parse_micro():
    assert parse_micro("knn:k=5,metric=minkowski:g=3") == ("knn", {"k": "5", "metric": "minkowski:g=3"})
    assert parse_micro(" nb ") == ("nb", {})
    assert parse_micro("tree:max_depth=3,") == ("tree", {"max_depth": "3"})


@pytest.mark.parametrize("text", ["tree:max_depth=3,max_depth=4", "tree:max_depth", ":k=1", "knn:=3"])
def test_parse_micro_errors(text):
    with pytest.raises(UsageError):
        parse_micro(text)


def test_build_coerces_field_types():
    options = build(
        Options, {"flag": "yes", "count": "3", "rate": "0.25", "criterion": "gini", "limit": "none"}, owner="options"
    )
    assert options == Options(flag=True, count=3, rate=0.25, criterion=Criterion.GINI, limit=None)
    assert build(Options, {"count": 4.0}, owner="options").count == 4
    assert with_params(options, {"limit": "7"}, owner="options").limit == 7


@pytest.mark.parametrize("params", [{"count": "x"}, {"flag": "maybe"}, {"criterion": "log-loss"}, {"size": "1"}])
def test_build_errors(params):
    with pytest.raises(UsageError):
        build(Options, params, owner="options")


def test_specs_from_flags():
    spec = parse_spec("knn:k=3,metric=manhattan")
    assert isinstance(spec, KnnSpec)
    assert spec.k == 3
    assert spec.metric.name == "manhattan"
    assert parse_spec("knn:metric=minkowski:g=inf").metric.order is Infinity.INF
    assert parse_spec("tree:criterion=gini,max_depth=2") == TreeSpec(criterion=Criterion.GINI, max_depth=2)
    with pytest.raises(UsageError):
        parse_spec("forest:T=3")
