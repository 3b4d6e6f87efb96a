import numpy as np
import pytest

from tabula.errors import RankDeficient, ShapeMismatch
from tabula.linalg import jacobi_eigh, solve


def test_solve():
    assert solve(np.array([[2.0, 1.0], [1.0, 3.0]]), np.array([3.0, 5.0])) == pytest.approx([0.8, 1.4])


def test_solve_swaps_rows_for_a_zero_pivot():
    assert solve(np.array([[0.0, 1.0], [1.0, 0.0]]), np.array([2.0, 3.0])).tolist() == [3.0, 2.0]


def test_solve_several_right_sides():
    a = np.array([[4.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]])
    b = np.arange(6.0).reshape(3, 2)
    assert np.allclose(a @ solve(a, b), b)


def test_solve_errors():
    with pytest.raises(RankDeficient):
        solve(np.array([[1.0, 2.0], [2.0, 4.0]]), np.array([1.0, 2.0]))
    with pytest.raises(ShapeMismatch):
        solve(np.ones((2, 3)), np.ones(2))


def test_jacobi_two_by_two():
    values, vectors = jacobi_eigh(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert values == pytest.approx([3.0, 1.0])
    root = 1 / np.sqrt(2)
    assert vectors[:, 0] == pytest.approx([root, root])
    assert np.abs(vectors[:, 1]) == pytest.approx([root, root])
    assert vectors[:, 0] @ vectors[:, 1] == pytest.approx(0.0, abs=1e-12)


def test_jacobi_matches_numpy():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(5, 5))
    symmetric = a + a.T
    values, vectors = jacobi_eigh(symmetric)
    assert values == pytest.approx(sorted(np.linalg.eigvalsh(symmetric), reverse=True))
    assert np.allclose(vectors @ np.diag(values) @ vectors.T, symmetric)
    assert np.allclose(vectors.T @ vectors, np.eye(5))
    for column in vectors.T:
        assert column[np.argmax(np.abs(column))] > 0


def test_jacobi_diagonal_input():
    values, vectors = jacobi_eigh(np.diag([1.0, 5.0, 3.0]))
    assert values.tolist() == [5.0, 3.0, 1.0]
    assert vectors[:, 0].tolist() == [0.0, 1.0, 0.0]
    with pytest.raises(ShapeMismatch):
        jacobi_eigh(np.ones((2, 3)))
