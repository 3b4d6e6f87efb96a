import json

import pytest

from tabula.cli import main, read_manifest
from tabula.dataset import load_csv
from tabula.resampling import FoldPlan
from tabula.serialization import read_model


@pytest.fixture
def call(capsys):
    """Runs the command line and returns the exit code with the parsed stdout summary (None on failure)."""

    def run(*argv):
        code = main([str(arg) for arg in argv])
        out = capsys.readouterr().out
        return code, json.loads(out) if code == 0 and out.strip() else None

    return run


def test_train_predict_evaluate(call, data_dir, tmp_path):
    iris, model = data_dir / "iris.csv", tmp_path / "knn.json"
    code, summary = call("train", "--algo", "knn:k=3", "--data", iris, "--label", "Class", "--out", model)
    assert code == 0
    assert summary["algo"] == "knn"
    assert summary["rows"] == 150
    manifest = read_manifest(tmp_path / "knn.manifest.json")
    assert manifest.command == "train"
    assert manifest.outputs == [str(model)]

    predictions = tmp_path / "predictions.csv"
    code, summary = call("predict", "--model", model, "--data", iris, "--out", predictions)
    assert code == 0
    assert len(summary["predictions"]) == 150
    lines = predictions.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "row_id,prediction"
    assert len(lines) == 151

    # the label column is the one column the model did not use
    code, summary = call("evaluate", "--model", model, "--data", iris)
    assert code == 0
    assert summary["accuracy"] > 0.9
    assert summary["confusion"]["classes"] == ["Iris-setosa", "Iris-versicolor", "Iris-virginica"]
    assert summary["support"] == 150


def test_evaluate_a_regression(call, data_dir, tmp_path):
    points, model = data_dir / "six_points.csv", tmp_path / "line.json"
    assert call("train", "--algo", "ols:form=simple", "--data", points, "--label", "y", "--out", model)[0] == 0
    code, summary = call("evaluate", "--model", model, "--data", points, "--label", "y")
    assert code == 0
    assert set(summary) == {"command", "mse", "support"}
    assert summary["mse"] > 0


def test_cross_validation(call, data_dir, tmp_path):
    base = ["cv", "--algo", "nb", "--data", data_dir / "iris.csv", "--label", "Class", "--folds", 5, "--seed", 3]
    code, summary = call(*base, "--stratified")
    assert code == 0
    assert summary["folds"] == 5
    assert len(summary["scores"]) == 5
    assert summary["mean"] > 0.9
    assert summary["seed"] == 3
    # nothing written, so no manifest either
    assert list(tmp_path.iterdir()) == []

    report, plan = tmp_path / "cv.json", tmp_path / "plan.json"
    code, _ = call(*base, "--out", report, "--plan-out", plan)
    assert code == 0
    assert json.loads(report.read_text(encoding="utf-8"))["metric"] == "accuracy"
    stored = read_model(plan)
    assert isinstance(stored, FoldPlan)
    assert stored.k == 5
    assert (tmp_path / "cv.manifest.json").exists()


def test_cross_validation_with_an_undefined_score(call, data_dir, tmp_path):
    report = tmp_path / "cv.json"
    base = ["cv", "--algo", "nb", "--data", data_dir / "iris.csv", "--label", "Class", "--folds", 3, "--seed", 1]
    code, summary = call(*base, "--metric", "f1:Iris-unknown", "--out", report)
    assert code == 0
    assert summary["scores"] == ["undefined"] * 3
    assert summary["mean"] == "undefined"
    assert "NaN" not in report.read_text(encoding="utf-8")


def test_explicit_manifest(call, data_dir, tmp_path):
    iris, record = data_dir / "iris.csv", tmp_path / "run.json"
    code, _ = call(
        "cv", "--algo", "knn:k=1", "--data", iris, "--label", "Class", "--folds", 3, "--seed", 0, "--manifest", record
    )
    assert code == 0
    recorded = read_manifest(record)
    assert recorded.seed == 0
    assert recorded.outputs == []
    assert recorded.flags["folds"] == 3


def test_gridsearch(call, data_dir, tmp_path):
    out = tmp_path / "search.json"
    flags = ["--data", data_dir / "iris.csv", "--label", "Class", "--folds", 3, "--seed", 0, "--out", out]
    code, summary = call("gridsearch", "--algo", "knn", "--space", "k=1|5|9", *flags)
    assert code == 0
    assert summary["candidates"] == 3
    assert summary["best_params"]["k"] in ("1", "5", "9")
    table = json.loads(out.read_text(encoding="utf-8"))["table"]
    assert [row["params"]["k"] for row in table] == ["1", "5", "9"]
    assert max(row["mean"] for row in table) == summary["best_score"]


def test_split_and_rerun(call, data_dir, tmp_path):
    train, test = tmp_path / "train.csv", tmp_path / "test.csv"
    flags = ["--label", "Class", "--test-fraction", 0.2, "--stratified"]
    code, summary = call("split", "--data", data_dir / "iris.csv", *flags, "--out", train, "--test-out", test)
    assert code == 0
    assert (summary["train_rows"], summary["test_rows"]) == (120, 30)
    held_out = load_csv(test, label_column="Class").label_values()
    assert sorted(held_out) == ["Iris-setosa"] * 10 + ["Iris-versicolor"] * 10 + ["Iris-virginica"] * 10

    manifest_path = tmp_path / "train.manifest.json"
    manifest = read_manifest(manifest_path)
    # a fresh seed is recorded so the run can be repeated
    assert manifest.argv[-2:] == ["--seed", str(summary["seed"])]
    before = train.read_bytes(), test.read_bytes()
    code, again = call("rerun", manifest_path)
    assert code == 0
    assert again["seed"] == summary["seed"]
    assert (train.read_bytes(), test.read_bytes()) == before


def test_scaling(call, data_dir, tmp_path):
    points, scaled, params = data_dir / "six_points.csv", tmp_path / "scaled.csv", tmp_path / "scaler.json"
    code, summary = call("scale", "--data", points, "--scale", "min-max", "--out", scaled, "--params-out", params)
    assert code == 0
    assert summary["scaled"] == ["x", "y"]
    assert summary["kind"] == ["min-max"]
    assert scaled.read_text(encoding="utf-8").splitlines()[:2] == ["x,y", "0.25,0"]

    again = tmp_path / "again.csv"
    assert call("scale", "--data", points, "--params", params, "--out", again)[0] == 0
    assert again.read_bytes() == scaled.read_bytes()
    code, _ = call("scale", "--data", points, "--params", params, "--scale", "min-max", "--out", tmp_path / "x.csv")
    assert code == 2


def test_inputs_are_never_overwritten(call, data_dir, tmp_path):
    source = tmp_path / "points.csv"
    source.write_bytes((data_dir / "six_points.csv").read_bytes())
    code, _ = call("scale", "--data", source, "--out", source)
    assert code == 2
    assert source.read_bytes() == (data_dir / "six_points.csv").read_bytes()
    twice = tmp_path / "a.csv"
    assert call("split", "--data", source, "--seed", 1, "--out", twice, "--test-out", twice)[0] == 2
    assert not twice.exists()


def test_cluster_feature_rows(call, data_dir, tmp_path):
    out = tmp_path / "clusters.csv"
    code, summary = call("cluster", "--algo", "kmeans:k=2", "--data", data_dir / "six_points.csv", "--out", out)
    assert code == 0
    assert summary["assignment"] == [0, 0, 0, 0, 1, 1]
    assert summary["sizes"] == [4, 2]
    assert set(summary["internal"]) == {"DBI", "DI"}
    assert "external" not in summary
    assert out.read_text(encoding="utf-8").splitlines()[:2] == ["row_id,cluster", "0,0"]
    assert (tmp_path / "clusters.model.json").exists()
    assert not (tmp_path / "clusters.nwk").exists()


def test_cluster_distance_matrix(call, data_dir, tmp_path):
    matrix, out = data_dir / "distances_5.csv", tmp_path / "tree.csv"
    algo = "agglo:linkage=complete,k=2"
    code, summary = call("cluster", "--algo", algo, "--data", matrix, "--precomputed", "--out", out)
    assert code == 0
    assert summary["assignment"] == [0, 0, 1, 0, 1]
    assert "internal" not in summary
    assert (tmp_path / "tree.nwk").read_text(encoding="utf-8") == "((a:9,(b:5,d:5):4):2,(c:2,e:2):9);\n"
    assert call("cluster", "--algo", "kmeans:k=2", "--data", matrix, "--precomputed")[0] == 2


def test_cluster_roles_and_reference_labels(call, data_dir, tmp_path):
    melons, out = data_dir / "melons.csv", tmp_path / "dbscan.csv"
    code, summary = call("cluster", "--algo", "dbscan:eps=0.11,min_pts=5,start=7", "--data", melons, "--out", out)
    assert code == 0
    assert summary["noise"] == 2
    assert out.read_text(encoding="utf-8").splitlines()[0] == "row_id,cluster,role"

    iris = data_dir / "iris.csv"
    code, summary = call(
        "cluster", "--algo", "kmeans:k=3", "--init", "random", "--seed", 1, "--data", iris, "--label", "Class"
    )
    assert code == 0
    assert 0.6 < summary["external"]["RI"] <= 1.0
    assert set(summary["external"]["pairs"]) == {"a", "b", "c", "d"}
    assert call("cluster", "--algo", "agglo", "--init", "random", "--data", data_dir / "six_points.csv")[0] == 2


def test_pca(call, data_dir, tmp_path):
    out, model = tmp_path / "scores.csv", tmp_path / "pca.json"
    code, summary = call(
        "pca", "--data", data_dir / "pca_example.csv", "--components", 1, "--out", out, "--model-out", model
    )
    assert code == 0
    assert summary["eigenvalues"] == pytest.approx([30.3849, 6.6151], abs=1e-4)
    assert [row[0] for row in summary["scores"]] == pytest.approx([4.3052, -3.7361, -5.6928, 5.1238], abs=1e-3)
    assert out.read_text(encoding="utf-8").splitlines()[0] == "PC1"
    assert read_model(model).n_components == 1


def test_knn_curve(call, data_dir, tmp_path):
    iris, out = data_dir / "iris.csv", tmp_path / "curve.csv"
    code, summary = call(
        "knn-curve", "--data", iris, "--label", "Class", "--k-min", 1, "--k-max", 5, "--seed", 2, "--out", out
    )
    assert code == 0
    assert summary["points"] == 5
    assert 1 <= summary["best_k"] <= 5
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "k,mean_error"
    assert [line.split(",")[0] for line in lines[1:]] == ["1", "2", "3", "4", "5"]
    assert call("knn-curve", "--data", iris, "--label", "Class", "--k-min", 5, "--k-max", 1, "--seed", 2)[0] == 2


def test_exit_codes(call, data_dir, tmp_path):
    iris, model = data_dir / "iris.csv", tmp_path / "m.json"
    assert call("train")[0] == 2
    assert call("train", "--algo", "forest", "--data", iris, "--label", "Class", "--out", model)[0] == 2
    assert call("cv", "--algo", "knn", "--data", iris, "--label", "Class", "--folds", 151, "--seed", 0)[0] == 2
    assert call("train", "--algo", "nb", "--data", tmp_path / "missing.csv", "--label", "y", "--out", model)[0] == 3

    ragged = tmp_path / "ragged.csv"
    ragged.write_text("a,b\n1,2\n3\n", encoding="utf-8")
    assert call("scale", "--data", ragged, "--out", tmp_path / "s.csv")[0] == 3

    # no stump beats chance on identical rows
    hopeless = tmp_path / "hopeless.csv"
    hopeless.write_text("x,y\n0,A\n0,B\n", encoding="utf-8")
    assert call("train", "--algo", "adaboost", "--data", hopeless, "--label", "y", "--out", model)[0] == 4
    assert not model.exists()


def test_errors_go_to_stderr(capsys, tmp_path):
    assert main(["scale", "--data", str(tmp_path / "missing.csv"), "--out", str(tmp_path / "s.csv")]) == 3
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err.startswith("tabula scale: error:")
