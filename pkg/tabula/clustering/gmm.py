"""Gaussian mixture clustering with full covariances, fitted by expectation maximization.

The E-step computes responsibilities ``gamma[j, i] = P(component i | x_j)``; the M-step re-estimates mixing
weights, means and covariances from them. The covariance update is the weighted scatter plus a ridge ``eps * I``.
A ridged covariance that would lower its component's expected complete-data log-likelihood is not taken, the
component keeps its previous covariance instead; so LL(D) never decreases and every eigenvalue stays ``>= eps``.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, List, Tuple, Union

import numpy as np

from ..dataset import Dataset
from ..errors import KTooLarge, NoConvergence, ShapeMismatch, SingularCovariance, UsageError
from ..serialization import register_model
from .assignment import ClusterAssignment
from .kmeans import Init, as_assignment, initial_centers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GmmInit:
    """Explicit starting parameters: ``weights`` (k,), ``means`` (k, p), ``covariances`` (k, p, p)."""

    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray

    def __post_init__(self) -> None:
        k, p = np.shape(self.means)
        if np.shape(self.weights) != (k,) or np.shape(self.covariances) != (k, p, p):
            raise ShapeMismatch(
                f"mixture parameters of inconsistent shapes {np.shape(self.weights)}, {np.shape(self.means)}"
                f" and {np.shape(self.covariances)}"
            )


@register_model("gmm")
@dataclass(frozen=True)
class GmmModel:
    names: Tuple[str, ...]
    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    ridge_eps: float
    iterations: int
    # LL(D) after every E-step, starting with the initial parameters
    log_likelihood: Tuple[float, ...] = ()

    @property
    def k(self) -> int:
        return len(self.weights)

    def responsibilities(self, rows: Any) -> np.ndarray:
        gamma, _ = _e_step(np.atleast_2d(np.asarray(rows, dtype=float)), self.weights, self.means, self.covariances)
        return gamma

    def predict(self, dataset: Dataset) -> ClusterAssignment:
        return as_assignment(np.argmax(self.responsibilities(dataset.matrix(self.names)), axis=1), self.k)


def _log_densities(rows: np.ndarray, means: np.ndarray, covariances: np.ndarray) -> np.ndarray:
    """``(n, k)`` log Gaussian densities via Cholesky factors."""
    n, p = rows.shape
    result = np.empty((n, len(means)))
    for i, (mean, covariance) in enumerate(zip(means, covariances)):
        try:
            factor = np.linalg.cholesky(covariance)
        except np.linalg.LinAlgError:
            raise SingularCovariance(f"the covariance of component {i} is not positive definite") from None
        z = np.linalg.solve(factor, (rows - mean).T)
        log_det = 2.0 * float(np.sum(np.log(np.diag(factor))))
        result[:, i] = -0.5 * (p * math.log(2.0 * math.pi) + log_det + np.sum(z * z, axis=0))
    return result


def _e_step(
    rows: np.ndarray, weights: np.ndarray, means: np.ndarray, covariances: np.ndarray
) -> Tuple[np.ndarray, float]:
    with np.errstate(divide="ignore"):
        joint = np.log(weights)[None, :] + _log_densities(rows, means, covariances)
    top = joint.max(axis=1, keepdims=True)
    log_total = top + np.log(np.exp(joint - top).sum(axis=1, keepdims=True))
    return np.exp(joint - log_total), float(log_total.sum())


def _expected_log_density(scatter: np.ndarray, size: float, covariance: np.ndarray) -> float:
    """Covariance dependent part of ``sum_j gamma_j log N(x_j | mu, Sigma)``, ``-inf`` for a singular ``Sigma``."""
    sign, log_det = np.linalg.slogdet(covariance)
    if sign <= 0:
        return -math.inf
    return -0.5 * (size * float(log_det) + float(np.trace(np.linalg.solve(covariance, scatter))))


def _m_step(
    rows: np.ndarray, gamma: np.ndarray, previous: Tuple[np.ndarray, np.ndarray], ridge_eps: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    n, p = rows.shape
    sizes = gamma.sum(axis=0)
    weights = sizes / n
    means, covariances = previous[0].copy(), previous[1].copy()
    for i, size in enumerate(sizes):
        if size <= 1e-12 * n:
            logger.warning("mixture component %d has lost all its weight and keeps its parameters", i)
            continue
        means[i] = gamma[:, i] @ rows / size
        centered = rows - means[i]
        scatter = (gamma[:, i, None] * centered).T @ centered
        ridged = scatter / size + ridge_eps * np.eye(p)
        if _expected_log_density(scatter, size, ridged) >= _expected_log_density(scatter, size, covariances[i]):
            covariances[i] = ridged
        else:
            logger.debug("component %d keeps its covariance, the ridged update would lower the likelihood", i)
    return weights, means, covariances


def gmm_responsibilities(parameters: Union[GmmModel, GmmInit], rows: Any) -> np.ndarray:
    """``(n, k)`` posterior component probabilities of the rows, each row sums to 1."""
    gamma, _ = _e_step(
        np.atleast_2d(np.asarray(rows, dtype=float)), parameters.weights, parameters.means, parameters.covariances
    )
    return gamma


def data_covariance(rows: np.ndarray) -> np.ndarray:
    centered = rows - rows.mean(axis=0)
    return centered.T @ centered / len(rows)


def gmm_em(
    dataset: Dataset,
    k: int,
    init: Union[Init, GmmInit] = Init.RANDOM,
    seed: int = 0,
    max_iter: int = 100,
    tol: float = 1e-6,
    ridge: float = 1e-6,
    strict: bool = False,
) -> Tuple[GmmModel, ClusterAssignment]:
    """Fits a ``k`` component mixture and assigns every row to its most responsible component.

    ``ridge`` is relative: the covariance ridge is ``ridge * trace(data covariance) / dim``. With
    :class:`Init` the mixture starts from uniform weights, ``k`` rows as means (the first ones, or a seeded
    random choice) and the ridged data covariance for every component. Iteration stops when LL(D)
    changes by less than ``tol``.
    """
    rows = dataset.matrix()
    n, p = rows.shape
    if k < 1:
        raise UsageError(f"'k' of 'gmm' must be at least 1, got {k}")
    if k > n:
        raise KTooLarge(f"'k' = {k} exceeds the {n} rows")
    if max_iter < 1:
        raise UsageError(f"'max_iter' of 'gmm' must be at least 1, got {max_iter}")
    if ridge < 0:
        raise UsageError(f"'ridge' of 'gmm' must be non-negative, got {ridge}")
    ridge_eps = ridge * float(np.trace(data_covariance(rows))) / p

    if isinstance(init, GmmInit):
        if init.means.shape != (k, p):
            raise ShapeMismatch(f"initial means must have shape {(k, p)}, got {init.means.shape}")
        weights, means, covariances = (
            np.array(init.weights, dtype=float),
            np.array(init.means, dtype=float),
            np.array(init.covariances, dtype=float),
        )
    else:
        weights = np.full(k, 1.0 / k)
        means = initial_centers(rows, k, init, seed)
        covariances = np.repeat((data_covariance(rows) + ridge_eps * np.eye(p))[None, :, :], k, axis=0)

    gamma, ll = _e_step(rows, weights, means, covariances)
    lls: List[float] = [ll]
    converged = False
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        weights, means, covariances = _m_step(rows, gamma, (means, covariances), ridge_eps)
        gamma, ll = _e_step(rows, weights, means, covariances)
        lls.append(ll)
        logger.debug("EM iteration %d: LL = %.10g", iterations, ll)
        if abs(lls[-1] - lls[-2]) < tol:
            converged = True
            break
    if not converged:
        if strict:
            raise NoConvergence("EM", max_iter)
        logger.warning("EM stopped after %d iterations, last change %.3g", max_iter, lls[-1] - lls[-2])

    model = GmmModel(
        names=dataset.names,
        weights=weights,
        means=means,
        covariances=covariances,
        ridge_eps=ridge_eps,
        iterations=iterations,
        log_likelihood=tuple(lls),
    )
    logger.info("EM: k=%d, LL = %.6g after %d iterations", k, ll, iterations)
    return model, as_assignment(np.argmax(gamma, axis=1), k)


def gmm_init(weights: Any, means: Any, covariances: Any) -> GmmInit:
    return GmmInit(
        np.asarray(weights, dtype=float), np.asarray(means, dtype=float), np.asarray(covariances, dtype=float)
    )


def rows_init(rows: Any, indices: List[int], scale: float) -> GmmInit:
    """Uniform weights, the given rows as means and ``scale * I`` as every covariance."""
    rows = np.asarray(rows, dtype=float)
    k, p = len(indices), rows.shape[1]
    return GmmInit(np.full(k, 1.0 / k), rows[list(indices)].copy(), np.repeat(scale * np.eye(p)[None, :, :], k, axis=0))
