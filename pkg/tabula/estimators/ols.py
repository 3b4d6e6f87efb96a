"""Ordinary least squares through the normal equations ``X^T X B = X^T y``."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, ClassVar, List, Tuple

import numpy as np

from ..dataset import Dataset
from ..errors import DataError, LengthMismatch, UsageError
from ..linalg import solve
from ..serialization import register_model
from .base import EstimatorSpec, Model, register_spec, require_labels

logger = logging.getLogger(__name__)


class Form(Enum):
    SIMPLE = "simple"
    POLYNOMIAL = "polynomial"
    MULTIPLE = "multiple"


def design_matrix(x: np.ndarray, form: Form, degree: int = 1) -> np.ndarray:
    """Intercept column followed by the feature expansion of the form."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if form in (Form.SIMPLE, Form.POLYNOMIAL) and x.shape[1] != 1:
        raise DataError(f"a {form.value} regression needs exactly one feature, got {x.shape[1]}")
    if form is Form.POLYNOMIAL:
        return np.column_stack([x[:, 0] ** power for power in range(degree + 1)])
    return np.column_stack([np.ones(len(x)), x])


@register_model("ols")
@dataclass(frozen=True)
class OlsModel(Model):
    """``coefficients[0]`` is the intercept."""

    names: Tuple[str, ...]
    form: Form
    degree: int
    coefficients: np.ndarray

    def predict_matrix(self, x: Any) -> np.ndarray:
        return design_matrix(x, self.form, self.degree) @ self.coefficients

    def predict(self, dataset: Dataset) -> List[Any]:
        return [float(v) for v in self.predict_matrix(dataset.matrix(self.names))]


def ols_fit(x: Any, y: Any, form: Form = Form.MULTIPLE, degree: int = 1, names: Tuple[str, ...] = ()) -> OlsModel:
    """Least squares coefficients, solved by Gaussian elimination with partial pivoting.

    A singular normal matrix (collinear columns, too few distinct x values for the degree) raises
    :class:`~tabula.errors.RankDeficient`.
    """
    if form is Form.POLYNOMIAL and degree < 1:
        raise UsageError(f"'degree' of a polynomial regression must be at least 1, got {degree}")
    design = design_matrix(x, form, degree)
    y = np.asarray(y, dtype=float)
    if len(y) != len(design):
        raise LengthMismatch(f"{len(design)} design rows but {len(y)} targets")
    coefficients = solve(design.T @ design, design.T @ y)
    logger.info("OLS (%s): coefficients %s", form.value, coefficients.tolist())
    return OlsModel(
        names=names,
        form=form,
        degree=degree if form is Form.POLYNOMIAL else 1,
        coefficients=coefficients,
    )


def ols_predict(model: OlsModel, x: Any) -> np.ndarray:
    return model.predict_matrix(x)


def simple_regression(x: Any, y: Any) -> Tuple[float, float]:
    """``(a, b)`` of ``y = a + b x`` from ``b = Cov(x, y) / Var(x)`` and ``a = mean(y) - b mean(x)``."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    dx = x - x.mean()
    variance = float(dx @ dx)
    if variance == 0.0:
        raise DataError("'x' is constant, the slope is undefined")
    b = float(dx @ (y - y.mean())) / variance
    return float(y.mean() - b * x.mean()), b


@register_spec("ols")
@dataclass(frozen=True)
class OlsSpec(EstimatorSpec):
    is_regressor: ClassVar[bool] = True

    form: Form = Form.MULTIPLE
    degree: int = 2

    def fit(self, dataset: Dataset) -> OlsModel:
        labels = require_labels(dataset, "ols")
        try:
            y = np.asarray(labels, dtype=float)
        except ValueError:
            raise DataError("'ols' needs numeric targets") from None
        return ols_fit(dataset.matrix(), y, self.form, self.degree, dataset.names)
