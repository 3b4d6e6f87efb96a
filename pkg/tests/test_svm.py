import math

import numpy as np
import pytest

from tabula.dataset import Dataset
from tabula.errors import NotBinary, UsageError
from tabula.estimators import (
    Kernel,
    KernelKind,
    OvrSvmModel,
    SvmModel,
    SvmSpec,
    decision_function,
    kernel_eval,
    parse_kernel,
    parse_spec,
    svm_fit,
    svm_predict,
)


def test_kernels():
    assert kernel_eval(Kernel(KernelKind.POLYNOMIAL, d=2), [2, 3, 4], [3, 4, 5]) == 1444.0
    assert kernel_eval(Kernel(KernelKind.LINEAR), [1, 2], [3, 4]) == 11.0
    assert kernel_eval(Kernel(KernelKind.RBF, sigma=2.0), [0, 0], [3, 4]) == pytest.approx(math.exp(-25 / 8))
    assert kernel_eval(Kernel(KernelKind.LAPLACIAN, sigma=2.0), [0, 0], [3, 4]) == pytest.approx(math.exp(-2.5))
    assert kernel_eval(Kernel(KernelKind.SIGMOID, alpha=0.5, c=-1), [1, 2], [3, 4]) == pytest.approx(math.tanh(4.5))
    assert kernel_eval(Kernel(KernelKind.RBF), [1, 2], [1, 2]) == 1.0


def test_parse_kernel():
    assert parse_kernel("poly:d=3") == Kernel(KernelKind.POLYNOMIAL, d=3)
    assert parse_kernel("rbf:gamma=2").sigma == pytest.approx(0.5)
    assert parse_kernel("linear").kind is KernelKind.LINEAR
    for text in ("cosine", "rbf:width=2", "poly:d=x", "rbf:sigma=0"):
        with pytest.raises(UsageError):
            parse_kernel(text)


def test_two_point_margin():
    dataset = Dataset.from_matrix([[0, 0], [2, 2]], labels=["neg", "pos"])
    model = svm_fit(dataset, c=100.0, kernel=Kernel(KernelKind.LINEAR))
    assert model.classes == ("neg", "pos")
    assert model.alphas == pytest.approx([0.25, 0.25])
    assert model.bias == pytest.approx(-1.0)
    assert decision_function(model, [[0, 0], [2, 2], [1, 1]]) == pytest.approx([-1.0, 1.0, 0.0])
    assert svm_predict(model, [[-1, 0], [3, 1]]) == ["neg", "pos"]


def test_dual_objective_never_decreases(iris):
    binary = iris.take(range(50, 150))
    model = svm_fit(binary, c=1.0, kernel=Kernel(KernelKind.RBF, sigma=1.0))
    trace = model.objective_trace
    assert all(later >= earlier - 1e-9 for earlier, later in zip(trace, trace[1:]))
    assert np.all((model.alphas > 0) & (model.alphas <= 1.0 + 1e-12))
    assert model.alphas @ model.signs == pytest.approx(0.0, abs=1e-9)


def test_linearly_separable_classes(iris):
    binary = iris.take(range(100))
    model = SvmSpec(C=10.0, kernel=KernelKind.LINEAR).fit(binary)
    assert isinstance(model, SvmModel)
    assert model.predict(binary) == binary.label_values()


def test_one_vs_rest(iris):
    model = parse_spec("svm:C=1,kernel=rbf,gamma=0.5").fit(iris)
    assert isinstance(model, OvrSvmModel)
    assert model.classes == ("Iris-setosa", "Iris-versicolor", "Iris-virginica")
    predicted = model.predict(iris)
    assert sum(p == t for p, t in zip(predicted, iris.label_values())) / 150 > 0.9


def test_errors(iris):
    with pytest.raises(NotBinary):
        svm_fit(iris)
    with pytest.raises(UsageError):
        SvmSpec(C=0.0)
    with pytest.raises(UsageError):
        Kernel(KernelKind.POLYNOMIAL, d=0)
    with pytest.raises(UsageError):
        SvmSpec(gamma=-1.0)


@pytest.mark.parametrize("seed", range(10))
def test_kkt_conditions_hold_on_separable_blobs(seed):
    rng = np.random.default_rng(seed)
    signs = np.repeat([-1.0, 1.0], 20)
    rows = rng.normal(size=(40, 2)) + 3.0 * signs[:, None]
    dataset = Dataset.from_matrix(rows, names=["x", "y"], labels=["neg" if s < 0 else "pos" for s in signs])
    tol, c = 1e-3, 10.0
    model = svm_fit(dataset, c=c, kernel=Kernel(KernelKind.LINEAR), tol=tol)

    margins = signs * model.decision_function(rows)
    alphas = np.zeros(40)
    for vector, alpha in zip(model.support_vectors, model.alphas):
        alphas[np.flatnonzero(np.all(rows == vector, axis=1))] = alpha
    assert abs(model.alphas @ model.signs) <= 1e-6
    assert np.all((alphas >= 0.0) & (alphas <= c))
    assert np.all(margins[alphas == 0.0] >= 1.0 - tol - 1e-9)
    free = (alphas > 0.0) & (alphas < c)
    assert np.any(free)
    assert np.all(np.abs(margins[free] - 1.0) <= tol + 1e-9)
    assert np.all(margins[alphas == c] <= 1.0 + tol + 1e-9)
