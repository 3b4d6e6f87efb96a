from importlib.metadata import PackageNotFoundError, version

from .dataset import Column, Dataset, load_csv, save_csv, train_test_split
from .decomposition import PcaModel, pca_fit, pca_inverse, pca_transform
from .errors import DataError, NumericError, TabulaError, UsageError
from .metrics import accuracy, classification_report, confusion, error_rate, f1, mse, precision, recall
from .resampling import bootstrap, cross_validate, k_fold
from .scaling import apply_scaler, fit_scaler
from .serialization import dump_model, load_model, read_model, save_model

try:
    __version__ = version("tabula")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0.0.0"

__all__ = [
    "Column",
    "Dataset",
    "load_csv",
    "save_csv",
    "train_test_split",
    "fit_scaler",
    "apply_scaler",
    "confusion",
    "accuracy",
    "error_rate",
    "precision",
    "recall",
    "f1",
    "mse",
    "classification_report",
    "k_fold",
    "cross_validate",
    "bootstrap",
    "PcaModel",
    "pca_fit",
    "pca_transform",
    "pca_inverse",
    "dump_model",
    "load_model",
    "save_model",
    "read_model",
    "TabulaError",
    "UsageError",
    "DataError",
    "NumericError",
]
