import numpy as np
import pytest

from tabula.dataset import Column, Dataset, train_test_split
from tabula.errors import ConstantColumn, UnknownColumn, UsageError
from tabula.scaling import ScalerKind, apply_scaler, fit_scaler


def test_standardize_gives_zero_mean_unit_deviation(iris):
    scaled = apply_scaler(iris, fit_scaler(iris, "standardize")).matrix()
    assert scaled.mean(axis=0) == pytest.approx(np.zeros(4), abs=1e-12)
    assert scaled.std(axis=0) == pytest.approx(np.ones(4))


def test_min_max_maps_onto_unit_interval(iris):
    scaled = apply_scaler(iris, fit_scaler(iris, ScalerKind.MIN_MAX)).matrix()
    assert scaled.min(axis=0).tolist() == [0.0] * 4
    assert scaled.max(axis=0) == pytest.approx(np.ones(4))


def test_labels_and_categorical_columns_pass_through(watermelon):
    params = fit_scaler(watermelon)
    assert [scale.name for scale in params.scales] == ["density", "sugar"]
    scaled = apply_scaler(watermelon, params)
    assert scaled.column("color") == watermelon.column("color")
    assert scaled.labels == watermelon.labels


def test_fitted_on_train_applied_to_test(iris):
    train, test = train_test_split(iris, 0.3, seed=1)
    params = fit_scaler(train)
    scale = params.as_dict()["petal_length"]
    expected = (test.column("petal_length").array() - scale.first) / scale.second
    assert apply_scaler(test, params).column("petal_length").array() == pytest.approx(expected)


def test_constant_column_is_rejected():
    dataset = Dataset(columns=(Column.numeric("flat", [2, 2, 2]),))
    with pytest.raises(ConstantColumn):
        fit_scaler(dataset)
    with pytest.raises(ConstantColumn):
        fit_scaler(dataset, "min-max")


def test_scaler_columns_must_exist(iris, six_points):
    with pytest.raises(UnknownColumn):
        apply_scaler(six_points, fit_scaler(iris))


def test_unknown_kind():
    with pytest.raises(UsageError):
        ScalerKind.parse("robust")
    assert ScalerKind.parse("min_max") is ScalerKind.MIN_MAX
