"""Supervised estimators.

Every algorithm comes as a frozen spec of hyperparameters (registered under its command line name) and the
immutable model its ``fit`` returns.
"""

from .base import (
    SPECS,
    EstimatorSpec,
    Model,
    WeightedEstimatorSpec,
    majority,
    parse_spec,
    register_spec,
    weighted_vote,
)
from .ensemble import (
    AdaBoostModel,
    AdaBoostSpec,
    BaggingModel,
    BaggingSpec,
    BoostRound,
    OobReport,
    adaboost_fit,
    adaboost_predict,
    bagging_fit,
    bagging_predict,
    oob_error,
    oob_report,
)
from .knn import KnnModel, KnnSpec, knn_error_curve, knn_fit, knn_predict
from .naive_bayes import NaiveBayesModel, NbSpec, nb_fit, nb_predict, nb_predict_proba, nb_score
from .ols import Form, OlsModel, OlsSpec, ols_fit, ols_predict, simple_regression
from .pipeline import PipelineModel, ScaledSpec, fit_pipeline
from .stump import StumpModel, StumpSpec, stump_fit
from .svm import (
    Kernel,
    KernelKind,
    OvrSvmModel,
    SvmModel,
    SvmSpec,
    decision_function,
    dual_objective,
    kernel_eval,
    ovr_fit,
    parse_kernel,
    svm_fit,
    svm_predict,
)
from .tree import Criterion, TreeModel, TreeSpec, tree_export_text, tree_fit, tree_predict

__all__ = [
    "SPECS",
    "AdaBoostModel",
    "AdaBoostSpec",
    "BaggingModel",
    "BaggingSpec",
    "BoostRound",
    "Criterion",
    "EstimatorSpec",
    "Form",
    "Kernel",
    "KernelKind",
    "KnnModel",
    "KnnSpec",
    "Model",
    "NaiveBayesModel",
    "NbSpec",
    "OlsModel",
    "OlsSpec",
    "OobReport",
    "OvrSvmModel",
    "PipelineModel",
    "ScaledSpec",
    "StumpModel",
    "StumpSpec",
    "SvmModel",
    "SvmSpec",
    "TreeModel",
    "TreeSpec",
    "WeightedEstimatorSpec",
    "adaboost_fit",
    "adaboost_predict",
    "bagging_fit",
    "bagging_predict",
    "decision_function",
    "dual_objective",
    "fit_pipeline",
    "kernel_eval",
    "knn_error_curve",
    "knn_fit",
    "knn_predict",
    "majority",
    "nb_fit",
    "nb_predict",
    "nb_predict_proba",
    "nb_score",
    "oob_error",
    "oob_report",
    "ols_fit",
    "ols_predict",
    "ovr_fit",
    "parse_kernel",
    "parse_spec",
    "register_spec",
    "simple_regression",
    "stump_fit",
    "svm_fit",
    "svm_predict",
    "tree_export_text",
    "tree_fit",
    "tree_predict",
    "weighted_vote",
]
