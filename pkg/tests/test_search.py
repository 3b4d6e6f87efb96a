import pytest

from tabula.dataset import Dataset
from tabula.errors import EmptySpace, UsageError
from tabula.estimators import KnnSpec
from tabula.resampling import k_fold, leave_one_out
from tabula.search import ParamRange, SearchMode, SearchSpace, grid_search, parse_space, random_search, search


@pytest.fixture
def halves():
    # 0..9 are "A", 20..29 are "B"
    xs = list(range(10)) + list(range(20, 30))
    return Dataset.from_matrix([[float(x)] for x in xs], names=["x"], labels=["A" if x < 10 else "B" for x in xs])


def test_grid_order():
    space = SearchSpace.of({"a": [1, 2], "b": ["x", "y"]})
    assert space.grid() == [{"a": 1, "b": "x"}, {"a": 1, "b": "y"}, {"a": 2, "b": "x"}, {"a": 2, "b": "y"}]


def test_parse_space():
    space = parse_space("k=1|3|5;C=0.01..100/5:log")
    assert space.names == ("k", "C")
    assert space.params[0][1] == ("1", "3", "5")
    assert space.params[1][1] == ParamRange(0.01, 100.0, 5, log=True)
    assert list(space.params[1][1].values()) == pytest.approx([0.01, 0.1, 1.0, 10.0, 100.0])
    assert parse_space("k=1..9/5:int").params[0][1].values() == (1, 3, 5, 7, 9)


@pytest.mark.parametrize("text", ["k", "=1|2", "C=1..x", "C=5..1", "C=-1..1:log"])
def test_parse_space_errors(text):
    with pytest.raises(UsageError):
        parse_space(text)


def test_empty_spaces():
    with pytest.raises(EmptySpace):
        parse_space("")
    with pytest.raises(EmptySpace):
        SearchSpace.of({"k": []})
    with pytest.raises(EmptySpace):
        SearchSpace.of({"k": [1]}, mode=SearchMode.RANDOM, n_samples=0)


def test_grid_search_picks_the_best(halves):
    space = SearchSpace.of({"k": [19, 1, 3]})
    result = grid_search(halves, space, KnnSpec(), leave_one_out(halves))
    assert [row.params["k"] for row in result.table] == [19, 1, 3]
    assert result.table[0].mean == 0.0
    assert result.best_params == {"k": 1}
    assert result.best_score == 1.0
    # k=3 is just as good but comes later
    assert result.table[2].mean == 1.0


def test_lower_is_better_for_errors(halves):
    result = grid_search(halves, SearchSpace.of({"k": [19, 1]}), KnnSpec(), leave_one_out(halves), "error_rate")
    assert result.metric == "error_rate"
    assert result.best_params == {"k": 1}
    assert result.best_score == 0.0


def test_equal_scores_keep_the_first(halves):
    plan = k_fold(halves, 4, seed=0)
    result = grid_search(halves, SearchSpace.of({"k": [1, 1]}), KnnSpec(), plan)
    assert result.best_params is result.table[0].params


def test_random_sampling_is_reproducible(halves):
    space = SearchSpace.of(
        {"k": [1, 3, 5, 7], "metric": ["euclidean", "manhattan"]}, mode=SearchMode.RANDOM, n_samples=3, seed=4
    )
    first, second = space.sample(), space.sample()
    assert first == second
    assert len(first) == 3
    grid = space.grid()
    assert [grid.index(c) for c in first] == sorted(grid.index(c) for c in first)
    result = random_search(halves, space, KnnSpec(), k_fold(halves, 4, seed=1))
    assert [row.params for row in result.table] == first
    assert search(halves, space, KnnSpec(), k_fold(halves, 4, seed=1)) == result


def test_sampling_never_exceeds_the_grid():
    space = SearchSpace.of({"k": [1, 3]}, mode=SearchMode.RANDOM, n_samples=10)
    assert space.sample() == [{"k": 1}, {"k": 3}]


def test_sampling_ranges():
    space = SearchSpace.of({"C": ParamRange(0.1, 10.0, log=True), "k": [1, 2]}, mode=SearchMode.RANDOM, n_samples=20)
    for candidate in space.sample():
        assert 0.1 <= candidate["C"] <= 10.0
        assert candidate["k"] in (1, 2)
