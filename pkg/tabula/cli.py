"""Command line front end, ``tabula <command> [flags]``.

A command validates its flags and computes every result before it writes anything. Files are written atomically
(a temporary file in the target directory, then a rename) and, together with the parsed flags and the seed, listed
in a run manifest next to the first output; ``tabula rerun <manifest>`` repeats the run. stdout receives a single
line of JSON summarising the run, logging goes to stderr.
"""

import argparse
import logging
import os
import sys
import tempfile
import time
from contextlib import contextmanager
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError

from . import __version__
from .clustering import ClusterAssignment, Dendrogram, Init, external_indices, internal_indices, parse_clusterer
from .config import fresh_seed
from .dataset import Dataset, load_csv, save_csv, train_test_split, write_table
from .decomposition import PcaModel, explained_variance_ratio, pca_fit
from .distance import parse_metric
from .errors import DataError, SingleCluster, TabulaError, UsageError
from .estimators import (
    BaggingModel,
    EstimatorSpec,
    Model,
    OlsModel,
    PipelineModel,
    ScaledSpec,
    knn_error_curve,
    parse_spec,
)
from .metrics import classification_report, confusion, mse, to_json_value
from .resampling import cross_validate, holdout_plan, k_fold
from .scaling import ScalerKind, ScalerParams, apply_scaler, fit_scaler
from .search import SearchMode, parse_space, search
from .serialization import dump_model, read_model, to_json

logger = logging.getLogger(__name__)

Writer = Callable[[Path], None]


class RunManifest(BaseModel):
    """Everything needed to repeat a run. ``argv`` already carries the seed that was used."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: str
    argv: List[str]
    flags: Dict[str, Any]
    seed: Optional[int] = None
    inputs: List[str]
    outputs: List[str]
    wall_time: float
    version: str


def read_manifest(path: Path) -> RunManifest:
    try:
        return RunManifest.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except ValidationError as e:
        raise DataError(f"'{path}' is not a run manifest: {e}") from e


@dataclass
class Run:
    """What a command produced: the stdout summary and the files still to be written, in order."""

    summary: Dict[str, Any]
    outputs: List[Tuple[Path, Writer]] = field(default_factory=list)


@contextmanager
def atomic_path(path: Path) -> Iterator[Path]:
    """A temporary path next to ``path`` that replaces ``path`` when the block succeeds."""
    fd, name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    os.close(fd)
    temporary = Path(name)
    try:
        yield temporary
        os.replace(temporary, path)
    finally:
        if temporary.exists():
            temporary.unlink()


def sibling(path: Path, suffix: str) -> Path:
    """``runs/model.json`` with suffix ``.manifest.json`` becomes ``runs/model.manifest.json``."""
    return path.with_name(path.stem + suffix)


def _text(text: str) -> Writer:
    return lambda path: path.write_text(text, encoding="utf-8")


def _json(data: Any) -> Writer:
    return _text(to_json(data) + "\n")


def _stored(model: Any) -> Writer:
    return _text(dump_model(model) + "\n")


def _dataset(dataset: Dataset) -> Writer:
    return lambda path: save_csv(dataset, path)


def _table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Writer:
    return lambda path: write_table(path, header, rows)


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is None:
        args.seed = fresh_seed()
        args.generated_seed = True
        logger.info("no --seed given, using %d", args.seed)
    return int(args.seed)


def _with_seed(spec: Any, seed: Optional[int]) -> Any:
    if seed is None:
        return spec
    if "seed" not in {f.name for f in fields(spec)}:
        logger.info("'%s' is deterministic, --seed is ignored", spec.name)
        return spec
    return spec.with_params({"seed": seed})


def _estimator(args: argparse.Namespace) -> EstimatorSpec:
    spec: EstimatorSpec = parse_spec(args.algo)
    if args.scale is not None:
        spec = ScaledSpec(spec, args.scale)
    return spec


def _read_estimator(path: Path) -> Model:
    model = read_model(path)
    if not isinstance(model, Model):
        raise UsageError(f"'{path}' stores a '{type(model).__name__}', --model needs a trained estimator")
    return model


def _unwrap(model: Model) -> Model:
    return model.model if isinstance(model, PipelineModel) else model


def _feature_names(model: Model) -> Tuple[str, ...]:
    return tuple(getattr(_unwrap(model), "names", ()))


def _is_regression(model: Model) -> bool:
    inner = _unwrap(model)
    return isinstance(inner, OlsModel) or (isinstance(inner, BaggingModel) and inner.regression)


def _label_for(args: argparse.Namespace, model: Model) -> str:
    """``--label``, or else the one column of ``--data`` that is not a feature of the model."""
    if args.label is not None:
        return str(args.label)
    features = set(_feature_names(model))
    rest = [name for name in load_csv(args.data).names if name not in features]
    if len(rest) != 1:
        raise UsageError(f"cannot tell the label column from {rest}, pass --label")
    return rest[0]


def cmd_split(args: argparse.Namespace) -> Run:
    dataset = load_csv(args.data, args.label)
    seed = _resolve_seed(args)
    train, test = train_test_split(dataset, args.test_fraction, seed, args.stratified)
    return Run(
        summary={"train_rows": train.n_rows, "test_rows": test.n_rows, "seed": seed},
        outputs=[(args.out, _dataset(train)), (args.test_out, _dataset(test))],
    )


def cmd_scale(args: argparse.Namespace) -> Run:
    dataset = load_csv(args.data, args.label)
    if args.params is not None:
        if args.scale is not None:
            raise UsageError("--scale and --params exclude each other, stored parameters carry their kind")
        params = read_model(args.params)
        if not isinstance(params, ScalerParams):
            raise UsageError(f"'{args.params}' does not store scaler parameters")
    else:
        params = fit_scaler(dataset, args.scale or ScalerKind.STANDARDIZE)
    outputs = [(args.out, _dataset(apply_scaler(dataset, params)))]
    if args.params_out is not None:
        outputs.append((args.params_out, _stored(params)))
    return Run(
        summary={
            "rows": dataset.n_rows,
            "scaled": [scale.name for scale in params.scales],
            "kind": sorted({scale.kind.value for scale in params.scales}),
        },
        outputs=outputs,
    )


def cmd_train(args: argparse.Namespace) -> Run:
    spec = _with_seed(parse_spec(args.algo), args.seed)
    if args.scale is not None:
        spec = ScaledSpec(spec, args.scale)
    dataset = load_csv(args.data, args.label)
    model = spec.fit(dataset)
    return Run(
        summary={"algo": spec.name, "rows": dataset.n_rows, "features": list(dataset.names)},
        outputs=[(args.out, _stored(model))],
    )


def cmd_predict(args: argparse.Namespace) -> Run:
    model = _read_estimator(args.model)
    dataset = load_csv(args.data, args.label)
    predictions = model.predict(dataset)
    outputs = []
    if args.out is not None:
        outputs.append((args.out, _table(["row_id", "prediction"], list(enumerate(predictions)))))
    return Run(summary={"rows": dataset.n_rows, "predictions": list(predictions)}, outputs=outputs)


def cmd_evaluate(args: argparse.Namespace) -> Run:
    model = _read_estimator(args.model)
    dataset = load_csv(args.data, _label_for(args, model))
    truth, predicted = dataset.label_values(), model.predict(dataset)
    report: Dict[str, Any]
    if _is_regression(model):
        report = {"mse": mse(truth, predicted), "support": dataset.n_rows}  # type: ignore[arg-type]
    else:
        cm = confusion(truth, predicted)
        classification = classification_report(cm)
        if args.text:
            print(classification.to_text(), file=sys.stderr)
        report = classification.to_json()
        report["confusion"] = {"classes": list(cm.classes), "counts": [list(row) for row in cm.counts]}
    outputs = [(args.out, _json(report))] if args.out is not None else []
    return Run(summary=report, outputs=outputs)


def cmd_cv(args: argparse.Namespace) -> Run:
    spec = _estimator(args)
    dataset = load_csv(args.data, args.label)
    seed = _resolve_seed(args)
    plan = k_fold(dataset, args.folds, seed, args.stratified)
    metric = args.metric or ("mse" if spec.is_regressor else "accuracy")
    result = cross_validate(dataset, plan, spec, metric)
    report = {
        "algo": spec.name,
        "metric": result.metric,
        "scores": [to_json_value(score) for score in result.scores],
        "mean": to_json_value(result.mean),
    }
    outputs = []
    if args.out is not None:
        outputs.append((args.out, _json(report)))
    if args.plan_out is not None:
        outputs.append((args.plan_out, _stored(plan)))
    return Run(summary={**report, "folds": plan.k, "seed": seed}, outputs=outputs)


def cmd_gridsearch(args: argparse.Namespace) -> Run:
    spec = _estimator(args)
    dataset = load_csv(args.data, args.label)
    seed = _resolve_seed(args)
    space = parse_space(args.space, args.mode, args.samples, seed)
    if args.test_fraction is not None:
        plan: Any = holdout_plan(dataset, args.test_fraction, seed, args.stratified)
    else:
        plan = k_fold(dataset, args.folds, seed, args.stratified)
    metric = args.metric or ("mse" if spec.is_regressor else "accuracy")
    result = search(dataset, space, spec, plan, metric)
    report = {
        "algo": spec.name,
        "metric": result.metric,
        "best_params": result.best_params,
        "best_score": to_json_value(result.best_score),
        "table": [
            {"params": row.params, "scores": [to_json_value(s) for s in row.scores], "mean": to_json_value(row.mean)}
            for row in result.table
        ],
    }
    outputs = [(args.out, _json(report))] if args.out is not None else []
    return Run(
        summary={
            "algo": spec.name,
            "metric": result.metric,
            "best_params": result.best_params,
            "best_score": to_json_value(result.best_score),
            "candidates": len(result.table),
            "seed": seed,
        },
        outputs=outputs,
    )


def _validity(dataset: Dataset, assignment: ClusterAssignment, precomputed: bool) -> Dict[str, Any]:
    scores: Dict[str, Any] = {}
    if not precomputed:
        try:
            scores["internal"] = internal_indices(dataset.matrix(), assignment).to_json()
        except SingleCluster as e:
            logger.info("no internal indices: %s", e)
    if dataset.has_labels:
        reference = ClusterAssignment.from_labels(dataset.label_values())
        scores["external"] = external_indices(assignment, reference).to_json()
    return scores


def cmd_cluster(args: argparse.Namespace) -> Run:
    clusterer = parse_clusterer(args.algo)
    own_fields = {f.name for f in fields(clusterer)}
    overrides: Dict[str, Any] = {}
    if args.seed is not None and "seed" in own_fields:
        overrides["seed"] = args.seed
    if args.init is not None:
        if "init" not in own_fields:
            raise UsageError(f"--init does not apply to '{clusterer.name}'")
        overrides["init"] = args.init
    clusterer = clusterer.with_params(overrides)
    if args.precomputed and args.label is not None:
        raise UsageError("--label cannot be combined with --precomputed, a distance matrix has no label column")
    dataset = load_csv(args.data, args.label)

    result = clusterer.run(dataset, precomputed=args.precomputed)
    assignment = result.assignment
    summary: Dict[str, Any] = {
        "algo": clusterer.name,
        "k": assignment.k,
        "noise": assignment.n_noise,
        "sizes": [len(members) for members in assignment.clusters()],
        "assignment": list(assignment.ids),
        **_validity(dataset, assignment, args.precomputed),
    }

    outputs: List[Tuple[Path, Writer]] = []
    if args.out is not None:
        if result.roles is not None:
            rows = [(i, cluster, role.value) for i, (cluster, role) in enumerate(zip(assignment.ids, result.roles))]
            outputs.append((args.out, _table(["row_id", "cluster", "role"], rows)))
        else:
            outputs.append((args.out, _table(["row_id", "cluster"], list(enumerate(assignment.ids)))))
        if result.artifact is not None:
            outputs.append((sibling(args.out, ".model.json"), _stored(result.artifact)))
        if isinstance(result.artifact, Dendrogram):
            names = list(dataset.names) if args.precomputed else None
            outputs.append((sibling(args.out, ".nwk"), _text(result.artifact.to_newick(names) + "\n")))
    return Run(summary=summary, outputs=outputs)


def cmd_pca(args: argparse.Namespace) -> Run:
    dataset = load_csv(args.data, args.label)
    model: PcaModel = pca_fit(dataset, args.components)
    scores = model.transform(dataset)
    header = [f"PC{i + 1}" for i in range(model.n_components)]
    rows: List[List[Any]] = [[float(v) for v in row] for row in scores]
    if dataset.has_labels:
        header.append(dataset.labels.name)  # type: ignore[union-attr]
        rows = [row + [label] for row, label in zip(rows, dataset.label_values())]
    outputs = []
    if args.out is not None:
        outputs.append((args.out, _table(header, rows)))
    if args.model_out is not None:
        outputs.append((args.model_out, _stored(model)))
    return Run(
        summary={
            "components": model.n_components,
            "eigenvalues": [float(v) for v in model.eigenvalues],
            "explained_variance_ratio": [float(v) for v in explained_variance_ratio(model)],
            "scores": [[float(v) for v in row] for row in scores],
        },
        outputs=outputs,
    )


def cmd_knn_curve(args: argparse.Namespace) -> Run:
    metric = parse_metric(args.distance)
    dataset = load_csv(args.data, args.label)
    seed = _resolve_seed(args)
    train, test = train_test_split(dataset, args.test_fraction, seed, args.stratified)
    curve = knn_error_curve(train, test, args.k_min, args.k_max, metric, args.scale)
    best_k, best_error = min(curve, key=lambda point: (point[1], point[0]))
    outputs = [(args.out, _table(["k", "mean_error"], curve))] if args.out is not None else []
    return Run(
        summary={"points": len(curve), "best_k": best_k, "best_error": best_error, "seed": seed},
        outputs=outputs,
    )


def cmd_rerun(args: argparse.Namespace) -> int:
    manifest = read_manifest(args.manifest_file)
    if manifest.version != __version__:
        logger.warning("'%s' was recorded by tabula %s, this is %s", args.manifest_file, manifest.version, __version__)
    logger.info("repeating: tabula %s", " ".join(manifest.argv))
    return main(manifest.argv)


def _add_data(parser: argparse.ArgumentParser, label_required: bool = False) -> None:
    parser.add_argument("--data", type=Path, required=True, help="Input CSV file with a header row.")
    parser.add_argument(
        "--label", required=label_required, default=None, help="Name of the label column, excluded from features."
    )


def _add_seed(parser: argparse.ArgumentParser, stratified: bool = True) -> None:
    parser.add_argument("--seed", type=int, default=None, help="Seed of every random choice (default: fresh).")
    if stratified:
        parser.add_argument("--stratified", action="store_true", help="Keep the class proportions in every part.")


def _add_scale(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--scale",
        type=ScalerKind.parse,
        default=None,
        help="Scale features before fitting (standardize or min-max); statistics come from the training rows.",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tabula", description="Classical machine learning on CSV files.")
    parser.add_argument("--version", action="version", version=f"tabula {__version__}")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Threshold of the log messages written to stderr.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--manifest", type=Path, default=None, help="Where to write the run manifest (default: next to --out)."
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    def command(name: str, handler: Callable[[argparse.Namespace], Run], description: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, parents=[common], help=description, description=description)
        sub.set_defaults(handler=handler)
        return sub

    split = command("split", cmd_split, "Hold-out split into a training and a test file.")
    _add_data(split)
    split.add_argument("--test-fraction", type=float, default=0.25)
    _add_seed(split)
    split.add_argument("--out", type=Path, required=True, help="Training part.")
    split.add_argument("--test-out", type=Path, required=True, help="Test part.")

    scale = command("scale", cmd_scale, "Standardize or min-max scale the numeric columns.")
    _add_data(scale)
    _add_scale(scale)
    scale.add_argument("--params", type=Path, default=None, help="Apply stored scaler parameters instead of fitting.")
    scale.add_argument("--params-out", type=Path, default=None, help="Store the fitted scaler parameters.")
    scale.add_argument("--out", type=Path, required=True)

    train = command("train", cmd_train, "Fit an estimator and store the model as JSON.")
    train.add_argument("--algo", required=True, help="Estimator, e.g. knn:k=5 or svm:C=1,kernel=rbf,sigma=0.5.")
    _add_data(train, label_required=True)
    _add_seed(train, stratified=False)
    _add_scale(train)
    train.add_argument("--out", type=Path, required=True)

    predict = command("predict", cmd_predict, "Predict with a stored model.")
    predict.add_argument("--model", type=Path, required=True)
    _add_data(predict)
    predict.add_argument("--out", type=Path, default=None, help="CSV of (row_id, prediction).")

    evaluate = command("evaluate", cmd_evaluate, "Score a stored model on labeled data.")
    evaluate.add_argument("--model", type=Path, required=True)
    _add_data(evaluate)
    evaluate.add_argument("--out", type=Path, default=None, help="JSON report.")
    evaluate.add_argument("--text", action="store_true", help="Also print the classification report to stderr.")

    cv = command("cv", cmd_cv, "k-fold cross validation of an estimator.")
    cv.add_argument("--algo", required=True)
    _add_data(cv, label_required=True)
    cv.add_argument("--folds", type=int, default=10)
    _add_seed(cv)
    cv.add_argument("--metric", default=None, help="accuracy, error_rate, mse or f1:<positive label>.")
    _add_scale(cv)
    cv.add_argument("--out", type=Path, default=None, help="JSON report.")
    cv.add_argument("--plan-out", type=Path, default=None, help="Store the fold plan.")

    grid = command("gridsearch", cmd_gridsearch, "Hyperparameter search scored by cross validation or hold-out.")
    grid.add_argument("--algo", required=True, help="Estimator with the fixed hyperparameters.")
    grid.add_argument("--space", required=True, help="E.g. 'k=1|3|5' or 'C=0.01..100/5:log;sigma=0.1|1'.")
    grid.add_argument("--mode", type=SearchMode, default=SearchMode.GRID, help="grid or random.")
    grid.add_argument("--samples", type=int, default=10, help="Candidates drawn in random mode.")
    _add_data(grid, label_required=True)
    grid.add_argument("--folds", type=int, default=5)
    grid.add_argument("--test-fraction", type=float, default=None, help="Score on one hold-out split instead.")
    _add_seed(grid)
    grid.add_argument("--metric", default=None)
    _add_scale(grid)
    grid.add_argument("--out", type=Path, default=None, help="JSON report with the score table.")

    cluster = command("cluster", cmd_cluster, "Cluster the rows; labels, when given, score the result.")
    cluster.add_argument("--algo", required=True, help="E.g. kmeans:k=3, agglo:linkage=average,k=2, dbscan:eps=0.11.")
    _add_data(cluster)
    cluster.add_argument("--precomputed", action="store_true", help="--data is a square distance matrix.")
    _add_seed(cluster, stratified=False)
    cluster.add_argument("--init", type=Init, default=None, help="first-k or random (kmeans, gmm).")
    cluster.add_argument("--out", type=Path, default=None, help="CSV of (row_id, cluster[, role]).")

    pca = command("pca", cmd_pca, "Principal component scores.")
    _add_data(pca)
    pca.add_argument("--components", type=int, default=2)
    pca.add_argument("--out", type=Path, default=None, help="CSV of the scores.")
    pca.add_argument("--model-out", type=Path, default=None, help="Store the fitted components.")

    curve = command("knn-curve", cmd_knn_curve, "Hold-out error of knn for a range of k.")
    _add_data(curve, label_required=True)
    curve.add_argument("--k-min", type=int, default=1)
    curve.add_argument("--k-max", type=int, default=29)
    curve.add_argument("--distance", default="euclidean")
    curve.add_argument("--test-fraction", type=float, default=0.25)
    _add_seed(curve)
    _add_scale(curve)
    curve.add_argument("--out", type=Path, default=None, help="CSV of (k, mean_error).")

    rerun = commands.add_parser("rerun", help="Repeat the run recorded in a manifest.")
    rerun.add_argument("manifest_file", type=Path)
    return parser


def _flag_value(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    return value


def _write(outputs: List[Tuple[Path, Writer]], inputs: List[Path]) -> None:
    targets = [path.resolve() for path, _ in outputs]
    if len(set(targets)) != len(targets):
        raise UsageError(f"output paths must differ, got {[str(path) for path, _ in outputs]}")
    sources = {path.resolve() for path in inputs}
    for path, _ in outputs:
        if path.resolve() in sources:
            raise UsageError(f"'{path}' is an input of this run and cannot be overwritten")
    for path, writer in outputs:
        with atomic_path(path) as temporary:
            writer(temporary)
        logger.info("wrote '%s'", path)


def execute(args: argparse.Namespace, argv: List[str]) -> Dict[str, Any]:
    """Runs a parsed command, writes its files and manifest and returns the summary."""
    started = time.perf_counter()
    run = args.handler(args)
    inputs = [getattr(args, name) for name in ("data", "model", "params") if getattr(args, name, None) is not None]
    _write(run.outputs, inputs)

    if getattr(args, "generated_seed", False):
        argv = argv + ["--seed", str(args.seed)]
    manifest_path = args.manifest
    if manifest_path is None and run.outputs:
        manifest_path = sibling(run.outputs[0][0], ".manifest.json")
    if manifest_path is not None:
        flags = {
            key: _flag_value(value)
            for key, value in vars(args).items()
            if key not in ("handler", "generated_seed", "command")
        }
        manifest = RunManifest(
            command=args.command,
            argv=argv,
            flags=flags,
            seed=getattr(args, "seed", None),
            inputs=[str(path) for path in inputs],
            outputs=[str(path) for path, _ in run.outputs],
            wall_time=time.perf_counter() - started,
            version=__version__,
        )
        _write([(manifest_path, _json(manifest.model_dump()))], inputs)
    return {"command": args.command, **run.summary}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    try:
        if args.command == "rerun":
            return cmd_rerun(args)
        summary = execute(args, argv)
    except TabulaError as e:
        logger.debug("%s failed", args.command, exc_info=True)
        print(f"tabula {args.command}: error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"tabula {args.command}: error: {e}", file=sys.stderr)
        return DataError.exit_code
    print(to_json(summary))
    return 0
