"""Soft-margin kernel support vector machines trained by sequential minimal optimization (SMO).

The dual ``max sum a_i - 1/2 sum_ij a_i a_j y_i y_j k(x_i, x_j)`` subject to ``0 <= a_i <= C`` and
``sum a_i y_i = 0`` is optimised two multipliers at a time. Sweeps repeat until ``max_passes`` consecutive
sweeps change nothing.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, List, Optional, Tuple

import numpy as np

from ..dataset import Column, Dataset, Label
from ..errors import LengthMismatch, NoConvergence, UsageError
from ..params import parse_micro
from ..serialization import register_model
from .base import EstimatorSpec, Model, binary_classes, register_spec, require_labels, to_signs

logger = logging.getLogger(__name__)

# multipliers closer than this (relative to C) to a bound count as at the bound
BOUND_EPS = 1e-8


class KernelKind(Enum):
    LINEAR = "linear"
    POLYNOMIAL = "poly"
    RBF = "rbf"
    LAPLACIAN = "laplacian"
    SIGMOID = "sigmoid"


@dataclass(frozen=True)
class Kernel:
    """``d`` is the polynomial degree, ``sigma`` the rbf/laplacian width, ``alpha`` and ``c`` scale and
    offset of the sigmoid (``c`` is also the polynomial offset)."""

    kind: KernelKind = KernelKind.LINEAR
    d: int = 2
    sigma: float = 1.0
    alpha: float = 1.0
    c: float = 0.0

    def __post_init__(self) -> None:
        if self.d < 1:
            raise UsageError(f"the polynomial degree 'd' must be at least 1, got {self.d}")
        if not self.sigma > 0:
            raise UsageError(f"the kernel width 'sigma' must be positive, got {self.sigma}")

    def gram(self, a: Any, b: Any) -> np.ndarray:
        """Kernel values between every row of ``a`` and every row of ``b``."""
        a, b = np.atleast_2d(np.asarray(a, dtype=float)), np.atleast_2d(np.asarray(b, dtype=float))
        if a.shape[1] != b.shape[1]:
            raise LengthMismatch(f"rows of length {a.shape[1]} and {b.shape[1]} cannot be compared")
        if self.kind is KernelKind.LINEAR:
            return a @ b.T
        if self.kind is KernelKind.POLYNOMIAL:
            return (a @ b.T + self.c) ** self.d
        if self.kind is KernelKind.SIGMOID:
            return np.tanh(self.alpha * (a @ b.T) + self.c)
        squared = np.maximum(np.sum(a * a, axis=1)[:, None] + np.sum(b * b, axis=1)[None, :] - 2.0 * (a @ b.T), 0.0)
        if self.kind is KernelKind.RBF:
            return np.exp(-squared / (2.0 * self.sigma**2))
        return np.exp(-np.sqrt(squared) / self.sigma)

    def __call__(self, x: Any, y: Any) -> float:
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        if x.shape != y.shape:
            raise LengthMismatch(f"rows of length {x.size} and {y.size} cannot be compared")
        return float(self.gram(x.reshape(1, -1), y.reshape(1, -1))[0, 0])


def kernel_eval(kernel: Kernel, x: Any, y: Any) -> float:
    return kernel(x, y)


def sigma_from_gamma(gamma: float) -> float:
    """``gamma = 1 / (2 sigma^2)``."""
    if not gamma > 0:
        raise UsageError(f"'gamma' must be positive, got {gamma}")
    return math.sqrt(1.0 / (2.0 * gamma))


def parse_kernel(text: str) -> Kernel:
    """Kernel from its flag text, e.g. ``linear``, ``poly:d=2``, ``rbf:sigma=0.5``, ``rbf:gamma=2`` or
    ``sigmoid:alpha=1,c=0``."""
    name, params = parse_micro(text)
    try:
        kind = next(k for k in KernelKind if k.value == name.lower() or k.name.lower() == name.lower())
    except StopIteration:
        raise UsageError(f"unknown kernel '{name}', expected one of {[k.value for k in KernelKind]}") from None
    kwargs: dict = {"kind": kind}
    for key, value in params.items():
        try:
            if key == "d":
                kwargs["d"] = int(value)
            elif key in ("sigma", "alpha", "c"):
                kwargs[key] = float(value)
            elif key == "gamma":
                kwargs["sigma"] = sigma_from_gamma(float(value))
            else:
                raise UsageError(f"unknown kernel parameter '{key}' in '{text}'")
        except ValueError:
            raise UsageError(f"kernel parameter '{key}' cannot be set to '{value}'") from None
    return Kernel(**kwargs)


def dual_objective(alphas: np.ndarray, signs: np.ndarray, gram: np.ndarray) -> float:
    weighted = alphas * signs
    return float(alphas.sum() - 0.5 * weighted @ gram @ weighted)


@dataclass(frozen=True)
class SmoResult:
    alphas: np.ndarray
    bias: float
    objective_trace: Tuple[float, ...]
    sweeps: int


class _Smo:
    def __init__(self, gram: np.ndarray, signs: np.ndarray, c: float, tol: float) -> None:
        self.k = gram
        self.y = signs
        self.c = c
        self.tol = tol
        self.alphas = np.zeros(len(signs))
        self.b = 0.0
        # decision values f(x_i), kept up to date after every step
        self.f = np.zeros(len(signs))

    def errors(self) -> np.ndarray:
        return self.f - self.y

    def violates_kkt(self, i: int) -> bool:
        r = self.y[i] * (self.f[i] - self.y[i])
        half = self.tol / 2.0
        return bool((r < -half and self.alphas[i] < self.c) or (r > half and self.alphas[i] > 0.0))

    def _endpoint_objective(self, i: int, j: int, a_j: float) -> float:
        alphas = self.alphas.copy()
        alphas[i] += self.y[i] * self.y[j] * (self.alphas[j] - a_j)
        alphas[j] = a_j
        return dual_objective(alphas, self.y, self.k)

    def take_step(self, i: int, j: int) -> bool:
        if i == j:
            return False
        y_i, y_j = self.y[i], self.y[j]
        a_i, a_j = self.alphas[i], self.alphas[j]
        e = self.errors()
        e_i, e_j = e[i], e[j]
        if y_i != y_j:
            low, high = max(0.0, a_j - a_i), min(self.c, self.c + a_j - a_i)
        else:
            low, high = max(0.0, a_i + a_j - self.c), min(self.c, a_i + a_j)
        if high - low < 1e-12:
            return False
        eta = self.k[i, i] + self.k[j, j] - 2.0 * self.k[i, j]
        if eta > 1e-12:
            new_j = float(np.clip(a_j + y_j * (e_i - e_j) / eta, low, high))
        else:
            at_low, at_high = self._endpoint_objective(i, j, low), self._endpoint_objective(i, j, high)
            if abs(at_low - at_high) < 1e-12:
                return False
            new_j = low if at_low > at_high else high
        if abs(new_j - a_j) < 1e-12 * (1.0 + new_j + a_j):
            return False
        new_i = a_i + y_i * y_j * (a_j - new_j)
        # snap round-off onto the box
        new_i = float(min(max(new_i, 0.0), self.c))

        delta_i, delta_j = new_i - a_i, new_j - a_j
        b_i = self.b - e_i - y_i * delta_i * self.k[i, i] - y_j * delta_j * self.k[i, j]
        b_j = self.b - e_j - y_i * delta_i * self.k[i, j] - y_j * delta_j * self.k[j, j]
        if 0.0 < new_i < self.c:
            new_b = b_i
        elif 0.0 < new_j < self.c:
            new_b = b_j
        else:
            new_b = (b_i + b_j) / 2.0

        self.f += y_i * delta_i * self.k[i] + y_j * delta_j * self.k[j] + (new_b - self.b)
        self.alphas[i], self.alphas[j], self.b = new_i, new_j, new_b
        return True

    def examine(self, i: int) -> bool:
        if not self.violates_kkt(i):
            return False
        e = self.errors()
        gaps = np.abs(e[i] - e)
        gaps[i] = -1.0
        first = int(np.argmax(gaps))
        for j in [first] + [j for j in range(len(self.y)) if j not in (i, first)]:
            if self.take_step(i, j):
                return True
        return False

    def final_bias(self) -> float:
        """Mean over the free support vectors; without any, the middle of the interval the bounded ones allow."""
        g = self.f - self.b
        eps = BOUND_EPS * self.c
        free = (self.alphas > eps) & (self.alphas < self.c - eps)
        if np.any(free):
            return float(np.mean(self.y[free] - g[free]))
        lower, upper = -np.inf, np.inf
        for i in range(len(self.y)):
            at_zero = self.alphas[i] <= eps
            if (self.y[i] > 0) == at_zero:
                lower = max(lower, self.y[i] - g[i])
            else:
                upper = min(upper, self.y[i] - g[i])
        if np.isfinite(lower) and np.isfinite(upper):
            return 0.5 * (lower + upper)
        return float(lower if np.isfinite(lower) else upper)


def smo(
    gram: np.ndarray, signs: np.ndarray, c: float, tol: float = 1e-3, max_passes: int = 5, max_iter: int = 1000
) -> SmoResult:
    """Maximises the dual for a precomputed Gram matrix and labels in -1/+1."""
    solver = _Smo(gram, signs, c, tol)
    trace = [dual_objective(solver.alphas, signs, gram)]
    passes, sweeps = 0, 0
    while passes < max_passes:
        if sweeps >= max_iter:
            raise NoConvergence("SMO", max_iter)
        changed = sum(1 for i in range(len(signs)) if solver.examine(i))
        sweeps += 1
        trace.append(dual_objective(solver.alphas, signs, gram))
        logger.debug("SMO sweep %d: %d pairs changed, dual objective %.10g", sweeps, changed, trace[-1])
        passes = passes + 1 if changed == 0 else 0
    return SmoResult(alphas=solver.alphas, bias=solver.final_bias(), objective_trace=tuple(trace), sweeps=sweeps)


@register_model("svm")
@dataclass(frozen=True)
class SvmModel(Model):
    """Only the support vectors (rows with a positive multiplier) are kept.

    ``classes[0]`` is the -1 class, ``classes[1]`` the +1 class.
    """

    names: Tuple[str, ...]
    classes: Tuple[Label, Label]
    kernel: Kernel
    c: float
    support_vectors: np.ndarray
    alphas: np.ndarray
    signs: np.ndarray
    bias: float
    objective_trace: Tuple[float, ...] = ()

    def decision_function(self, rows: Any) -> np.ndarray:
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        if len(self.alphas) == 0:
            return np.full(len(rows), self.bias)
        return self.kernel.gram(rows, self.support_vectors) @ (self.alphas * self.signs) + self.bias

    def predict_matrix(self, rows: Any) -> List[Label]:
        return [self.classes[1] if value >= 0.0 else self.classes[0] for value in self.decision_function(rows)]

    def predict(self, dataset: Dataset) -> List[Label]:
        return self.predict_matrix(dataset.matrix(self.names))


def svm_fit(
    dataset: Dataset,
    c: float = 1.0,
    kernel: Kernel = Kernel(),
    tol: float = 1e-3,
    max_passes: int = 5,
    max_iter: int = 1000,
) -> SvmModel:
    """Binary soft-margin SVM; the label first in label order becomes -1."""
    if not c > 0:
        raise UsageError(f"the penalty 'C' must be positive, got {c}")
    labels = require_labels(dataset, "svm")
    classes = binary_classes(labels, "svm")
    matrix = dataset.matrix()
    signs = to_signs(labels, classes)
    result = smo(kernel.gram(matrix, matrix), signs, c, tol, max_passes, max_iter)
    support = result.alphas > 0.0
    logger.info(
        "SVM: %d support vectors of %d rows after %d sweeps, bias %.6g",
        int(support.sum()),
        len(labels),
        result.sweeps,
        result.bias,
    )
    return SvmModel(
        names=dataset.names,
        classes=classes,
        kernel=kernel,
        c=c,
        support_vectors=matrix[support],
        alphas=result.alphas[support],
        signs=signs[support],
        bias=result.bias,
        objective_trace=result.objective_trace,
    )


def decision_function(model: SvmModel, rows: Any) -> np.ndarray:
    return model.decision_function(rows)


def svm_predict(model: SvmModel, rows: Any) -> List[Label]:
    return model.predict_matrix(rows)


@register_model("svm-ovr")
@dataclass(frozen=True)
class OvrSvmModel(Model):
    """One binary machine per class (that class +1, all others -1); the largest decision value wins."""

    names: Tuple[str, ...]
    classes: Tuple[Label, ...]
    members: Tuple[SvmModel, ...]

    def decision_matrix(self, rows: Any) -> np.ndarray:
        return np.column_stack([member.decision_function(rows) for member in self.members])

    def predict(self, dataset: Dataset) -> List[Label]:
        scores = self.decision_matrix(dataset.matrix(self.names))
        return [self.classes[int(i)] for i in np.argmax(scores, axis=1)]


def ovr_fit(
    dataset: Dataset,
    c: float = 1.0,
    kernel: Kernel = Kernel(),
    tol: float = 1e-3,
    max_passes: int = 5,
    max_iter: int = 1000,
) -> OvrSvmModel:
    labels = require_labels(dataset, "svm")
    classes = dataset.classes()
    members = []
    for label in classes:
        # "rest" sorts before "this", so the class itself becomes +1
        one_vs_rest = Column.categorical("target", ["this" if value == label else "rest" for value in labels])
        members.append(svm_fit(dataset.with_labels(one_vs_rest), c, kernel, tol, max_passes, max_iter))
    logger.info("one-vs-rest SVM: %d machines", len(members))
    return OvrSvmModel(names=dataset.names, classes=tuple(classes), members=tuple(members))


@register_spec("svm")
@dataclass(frozen=True)
class SvmSpec(EstimatorSpec):
    """Binary problems get one machine, more classes a one-vs-rest ensemble.

    ``gamma``, when given, overrides ``sigma`` through ``sigma = sqrt(1 / (2 gamma))``.
    """

    C: float = 1.0
    kernel: KernelKind = KernelKind.RBF
    d: int = 2
    sigma: float = 1.0
    gamma: Optional[float] = None
    alpha: float = 1.0
    c: float = 0.0
    tol: float = 1e-3
    max_passes: int = 5
    max_iter: int = 1000

    def __post_init__(self) -> None:
        if not self.C > 0:
            raise UsageError(f"the penalty 'C' of 'svm' must be positive, got {self.C}")
        self.make_kernel()

    def make_kernel(self) -> Kernel:
        sigma = sigma_from_gamma(self.gamma) if self.gamma is not None else self.sigma
        return Kernel(kind=self.kernel, d=self.d, sigma=sigma, alpha=self.alpha, c=self.c)

    def fit(self, dataset: Dataset) -> Model:
        labels = require_labels(dataset, "svm")
        kernel = self.make_kernel()
        if len(set(labels)) > 2:
            return ovr_fit(dataset, self.C, kernel, self.tol, self.max_passes, self.max_iter)
        return svm_fit(dataset, self.C, kernel, self.tol, self.max_passes, self.max_iter)
