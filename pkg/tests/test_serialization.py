import numpy as np
import pytest
from pydantic import ValidationError

from tabula.clustering import agglomerative, kmeans
from tabula.dataset import Dataset
from tabula.decomposition import pca_fit
from tabula.errors import DataError
from tabula.estimators import parse_spec
from tabula.scaling import ScalerKind, fit_scaler
from tabula.serialization import ModelRecord, dump_model, load_model, read_model, save_model, to_json


@pytest.fixture
def binary_iris(iris):
    return iris.take(range(50, 150))


@pytest.mark.parametrize(
    "text",
    [
        "knn:k=3,metric=manhattan",
        "nb",
        "tree:criterion=gini,max_depth=3",
        "ols:form=multiple",
        "svm:C=1,kernel=poly,d=2",
        "stump",
        "bagging:base=tree,T=3,seed=2",
        "adaboost:base=stump,T=4",
    ],
)
def test_stored_models_predict_the_same(binary_iris, text):
    dataset = binary_iris
    if text.startswith("ols"):
        dataset = binary_iris.select(["sepal_length", "sepal_width", "petal_length"]).with_labels(
            binary_iris.column("petal_width")
        )
    model = parse_spec(text).fit(dataset)
    stored = dump_model(model)
    restored = load_model(stored)
    assert type(restored) is type(model)
    assert restored.predict(dataset) == model.predict(dataset)
    assert dump_model(restored) == stored


def test_mixed_columns(watermelon):
    for text in ("nb", "nb:smoothing=0", "tree:criterion=entropy"):
        model = parse_spec(text).fit(watermelon)
        assert load_model(dump_model(model)).predict(watermelon) == model.predict(watermelon)


def test_other_artifacts(six_points):
    model, _ = kmeans(six_points, 2)
    assert np.array_equal(load_model(dump_model(model)).centers, model.centers)
    dendrogram = agglomerative([[0, 1, 4], [1, 0, 2], [4, 2, 0]])
    assert load_model(dump_model(dendrogram)) == dendrogram
    scaler = fit_scaler(six_points, ScalerKind.MIN_MAX)
    assert load_model(dump_model(scaler)) == scaler
    pca = pca_fit(six_points, 1)
    assert np.allclose(load_model(dump_model(pca)).transform(six_points), pca.transform(six_points))


def test_files(tmp_path, six_points):
    path = tmp_path / "model.json"
    labeled = Dataset.from_matrix(six_points.matrix(), names=["x", "y"], labels=["l", "l", "l", "l", "r", "r"])
    model = parse_spec("knn:k=1").fit(labeled)
    save_model(model, path)
    assert path.read_text(encoding="utf-8").endswith("\n")
    assert read_model(path).predict(six_points) == model.predict(six_points)


def test_canonical_json():
    assert to_json({"b": 1, "a": [2, "ä"]}) == '{"a": [2, "ä"], "b": 1}'


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"type": "knn"}',
        '{"type": "forest", "params": {}}',
        '{"type": "knn", "params": {}, "extra": 1}',
        '{"type": "knn", "params": {}}',
        '{"type": "stump", "params": {"names": ["x"], "feature": "x", "threshold": 1, "left": "a", "right": "b", '
        '"colour": "red"}}',
    ],
)
def test_malformed_input(text):
    with pytest.raises(DataError):
        load_model(text)


def test_records_are_frozen():
    record = ModelRecord(type="knn", params={})
    with pytest.raises(ValidationError):
        record.type = "nb"  # type: ignore[misc]
