import numpy as np
import pytest

from tabula.clustering import GmmSpec, Init, gmm_em, gmm_init, gmm_responsibilities, parse_clusterer, rows_init
from tabula.errors import KTooLarge, NoConvergence, ShapeMismatch, SingularCovariance, UsageError

# the sixth, 22nd and 27th melon
START = [5, 21, 26]


def test_first_responsibilities(melons):
    init = rows_init(melons.matrix(), START, 0.1)
    gamma = gmm_responsibilities(init, melons.matrix())
    assert gamma.shape == (30, 3)
    assert gamma.sum(axis=1) == pytest.approx(np.ones(30))
    assert gamma[0] == pytest.approx([0.219, 0.404, 0.377], abs=5e-3)


def test_one_em_round(melons):
    model, _ = gmm_em(melons, 3, rows_init(melons.matrix(), START, 0.1), max_iter=1, ridge=0.0)
    assert model.weights == pytest.approx([0.361, 0.323, 0.316], abs=2e-3)
    assert model.means[0] == pytest.approx([0.491, 0.251], abs=2e-3)
    assert model.iterations == 1
    assert len(model.log_likelihood) == 2


def never_decreases(values):
    return all(later >= earlier - 1e-9 for earlier, later in zip(values, values[1:]))


def test_log_likelihood_never_decreases(melons):
    model, assignment = gmm_em(melons, 3, rows_init(melons.matrix(), START, 0.1), max_iter=50)
    assert never_decreases(model.log_likelihood)
    assert model.weights.sum() == pytest.approx(1.0)
    assert assignment.n_rows == 30
    assert model.predict(melons) == assignment


def test_log_likelihood_never_decreases_from_random_starts(melons):
    for seed in range(50):
        model, _ = gmm_em(melons, 3, Init.RANDOM, seed=seed, max_iter=100)
        assert never_decreases(model.log_likelihood), seed
        for covariance in model.covariances:
            assert np.linalg.eigvalsh(covariance).min() >= model.ridge_eps - 1e-12, seed


def test_stops_on_small_likelihood_change(melons):
    model, _ = gmm_em(melons, 2, Init.FIRST_K, max_iter=500, tol=1e-4)
    assert model.iterations < 500
    assert abs(model.log_likelihood[-1] - model.log_likelihood[-2]) < 1e-4


def test_single_component_is_the_ridged_data_covariance(melons):
    model, assignment = gmm_em(melons, 1, Init.FIRST_K)
    rows = melons.matrix()
    centered = rows - rows.mean(axis=0)
    expected = centered.T @ centered / len(rows) + model.ridge_eps * np.eye(2)
    assert model.means[0] == pytest.approx(rows.mean(axis=0))
    assert np.allclose(model.covariances[0], expected)
    assert set(assignment.ids) == {0}


def test_covariances_stay_positive_definite(melons):
    fitted = GmmSpec(k=3, seed=4).run(melons).artifact
    for covariance in fitted.covariances:
        assert np.all(np.linalg.eigvalsh(covariance) > 0)
        assert np.allclose(covariance, covariance.T)


def test_seeded_runs_repeat(melons):
    first, _ = gmm_em(melons, 2, Init.RANDOM, seed=9)
    second, _ = gmm_em(melons, 2, Init.RANDOM, seed=9)
    assert np.array_equal(first.means, second.means)


def test_strict_iteration_budget(melons):
    with pytest.raises(NoConvergence):
        gmm_em(melons, 3, Init.FIRST_K, max_iter=1, tol=0.0, strict=True)


def test_singular_starting_covariance(melons):
    init = gmm_init([0.5, 0.5], [[0.5, 0.2], [0.6, 0.3]], np.zeros((2, 2, 2)))
    with pytest.raises(SingularCovariance):
        gmm_responsibilities(init, melons.matrix())


def test_argument_checks(melons):
    with pytest.raises(KTooLarge):
        gmm_em(melons, 31)
    with pytest.raises(UsageError):
        gmm_em(melons, 2, ridge=-1.0)
    with pytest.raises(ShapeMismatch):
        gmm_em(melons, 2, rows_init(melons.matrix(), START, 0.1))
    with pytest.raises(ShapeMismatch):
        gmm_init([1.0], [[0.0, 0.0]], np.eye(3)[None, :, :])


def test_spec():
    assert parse_clusterer("gmm:k=3,init=first-k,max_iter=20") == GmmSpec(k=3, init=Init.FIRST_K, max_iter=20)
