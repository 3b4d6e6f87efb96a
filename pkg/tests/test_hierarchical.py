import numpy as np
import pytest

from tabula.clustering import (
    AggloSpec,
    DianaSpec,
    Linkage,
    Merge,
    agglomerative,
    cut_dendrogram,
    diana,
    parse_clusterer,
)
from tabula.dataset import load_csv
from tabula.errors import AsymmetricMatrix, KTooLarge, NegativeDistance, ShapeMismatch

NAMES = ["a", "b", "c", "d", "e"]
D = np.array(
    [
        [0, 9, 3, 6, 11],
        [9, 0, 7, 5, 10],
        [3, 7, 0, 9, 2],
        [6, 5, 9, 0, 8],
        [11, 10, 2, 8, 0],
    ],
    dtype=float,
)


def test_complete_linkage():
    dendrogram = agglomerative(D, Linkage.COMPLETE)
    assert dendrogram.merges == (Merge(2, 4, 2.0), Merge(1, 3, 5.0), Merge(0, 6, 9.0), Merge(7, 5, 11.0))
    assert dendrogram.to_newick(NAMES) == "((a:9,(b:5,d:5):4):2,(c:2,e:2):9);"
    assert cut_dendrogram(dendrogram, 2).as_sets() == [frozenset({0, 1, 3}), frozenset({2, 4})]


def test_single_linkage():
    assert agglomerative(D, Linkage.SINGLE).heights() == [2.0, 3.0, 5.0, 6.0]


def test_average_linkage_heights_grow():
    heights = agglomerative(D, Linkage.AVERAGE).heights()
    assert heights == sorted(heights)
    assert heights[0] == 2.0


def test_cut_sizes():
    dendrogram = agglomerative(D)
    assert cut_dendrogram(dendrogram, 1).ids == (0,) * 5
    assert cut_dendrogram(dendrogram, 5).ids == (0, 1, 2, 3, 4)
    assert cut_dendrogram(dendrogram, 3).as_sets() == [frozenset({0}), frozenset({1, 3}), frozenset({2, 4})]
    with pytest.raises(KTooLarge):
        cut_dendrogram(dendrogram, 6)


def test_diana():
    dendrogram = diana(D)
    root = dendrogram.merge(dendrogram.root)
    assert root.height == 11.0
    assert sorted([dendrogram.leaves(root.left), dendrogram.leaves(root.right)]) == [[0, 2, 4], [1, 3]]
    assert cut_dendrogram(dendrogram, 2).ids == (0, 1, 0, 1, 0)
    assert len(dendrogram.merges) == 4


def test_tree_export():
    tree = agglomerative(D).to_tree(NAMES)
    assert tree["height"] == 11.0
    assert tree["right"]["left"] == {"leaf": 2, "name": "c"}


@pytest.mark.parametrize(
    "matrix, error",
    [
        (np.ones((2, 3)), ShapeMismatch),
        (np.array([[0.0, -1.0], [-1.0, 0.0]]), NegativeDistance),
        (np.array([[0.0, 1.0], [2.0, 0.0]]), AsymmetricMatrix),
        (np.array([[1.0, 1.0], [1.0, 0.0]]), AsymmetricMatrix),
    ],
)
def test_matrix_checks(matrix, error):
    with pytest.raises(error):
        agglomerative(matrix)


def test_specs_on_a_distance_file(data_dir):
    matrix = load_csv(data_dir / "distances_5.csv")
    run = parse_clusterer("agglo:linkage=complete,k=2").run(matrix, precomputed=True)
    assert run.assignment.ids == (0, 0, 1, 0, 1)
    assert run.artifact.to_newick(list(matrix.names)) == "((a:9,(b:5,d:5):4):2,(c:2,e:2):9);"
    assert DianaSpec(k=2).run(matrix, precomputed=True).assignment.ids == (0, 1, 0, 1, 0)


def test_specs_on_feature_rows(six_points):
    run = AggloSpec(linkage=Linkage.SINGLE, k=2).run(six_points)
    assert run.assignment.ids == (0, 0, 0, 0, 0, 1)
