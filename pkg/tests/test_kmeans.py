import numpy as np
import pytest

from tabula.clustering import ClusterAssignment, Init, KMeansModel, KMeansSpec, kmeans, parse_clusterer
from tabula.errors import DataError, KTooLarge, NoConvergence, ShapeMismatch, UsageError


def test_six_point_run(six_points):
    model, assignment = kmeans(six_points, 2, init=Init.FIRST_K)
    assert assignment.ids == (0, 0, 0, 0, 1, 1)
    assert model.centers.tolist() == [[2.0, 1.75], [4.5, 4.0]]
    assert model.iterations == 3
    assert model.history == pytest.approx((20.0, 86 / 9, 7.25))
    assert model.objective == pytest.approx(7.25)


def test_objective_never_increases(melons):
    model, _ = kmeans(melons, 3, init=Init.RANDOM, seed=5)
    history = model.history
    assert all(later <= earlier + 1e-12 for earlier, later in zip(history, history[1:]))


def test_equal_distances_go_to_the_first_center():
    model = KMeansModel(("x", "y"), np.array([[2.0, 1.0], [2.0, 3.0]]), objective=0.0, iterations=0)
    # (3, 2) is as far from (2, 1) as from (2, 3)
    assert model.assign([[3, 2], [3, 2.5]]).tolist() == [0, 1]


def test_explicit_centers(six_points):
    model, assignment = kmeans(six_points, 2, centers=[[5, 5], [1, 1]])
    assert assignment.ids == (1, 1, 1, 1, 0, 0)
    with pytest.raises(ShapeMismatch):
        kmeans(six_points, 2, centers=[[0, 0]])


def test_random_init_is_seeded(melons):
    first, _ = kmeans(melons, 3, init=Init.RANDOM, seed=2)
    second, _ = kmeans(melons, 3, init=Init.RANDOM, seed=2)
    assert np.array_equal(first.centers, second.centers)


def test_predict_new_rows(six_points):
    model, assignment = kmeans(six_points, 2)
    assert model.predict(six_points) == assignment


def test_iteration_budget(melons):
    model, assignment = kmeans(melons, 4, init=Init.RANDOM, seed=1, max_iter=1)
    assert model.iterations == 1
    assert assignment.n_rows == 30
    with pytest.raises(NoConvergence):
        kmeans(melons, 4, init=Init.RANDOM, seed=1, max_iter=1, strict=True)


def test_argument_checks(six_points):
    with pytest.raises(UsageError):
        kmeans(six_points, 0)
    with pytest.raises(KTooLarge):
        kmeans(six_points, 7)
    with pytest.raises(UsageError):
        kmeans(six_points, 2, max_iter=0)


def test_spec(six_points):
    spec = parse_clusterer("kmeans:k=2,init=first-k")
    assert spec == KMeansSpec(k=2)
    run = spec.run(six_points)
    assert run.assignment.ids == (0, 0, 0, 0, 1, 1)
    with pytest.raises(UsageError):
        spec.run(six_points, precomputed=True)


def test_assignment_ids_have_no_gaps():
    with pytest.raises(DataError):
        ClusterAssignment((0, 2))
    assert ClusterAssignment.from_labels(["b", "a", "b", "x"], noise="x").ids == (0, 1, 0, -1)
