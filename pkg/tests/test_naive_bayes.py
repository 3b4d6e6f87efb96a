import math

import numpy as np
import pytest

from tabula.errors import NotBinary, UnknownCategoryAtPredict, UsageError
from tabula.estimators import NbSpec, nb_fit, nb_predict_proba, nb_score

# a ripe melon: green, curly root, muffled sound, clear texture, hollow umbilicus, hard surface
MELON = ("green", "curly", "muffled", "clear", "hollow", "hard", 0.697, 0.460)


def test_priors_and_class_statistics(watermelon):
    model = nb_fit(watermelon, smoothing=0.0)
    assert model.classes == ("false", "true")
    assert model.priors == pytest.approx([9 / 17, 8 / 17])
    density, sugar = model.gaussian
    assert density.means[1] == pytest.approx(0.57375)
    assert density.sds[1] == pytest.approx(0.129, abs=5e-4)
    assert sugar.means[1] == pytest.approx(0.27875)
    assert sugar.sds[1] == pytest.approx(0.101, abs=5e-4)


def test_frequency_tables(watermelon):
    model = nb_fit(watermelon, smoothing=0.0)
    color = model.categorical[0]
    assert color.categories == ("dark", "green", "light")
    assert np.exp(color.log_probabilities[1]) == pytest.approx([4 / 8, 3 / 8, 1 / 8])


def test_ripe_melon_score(watermelon):
    model = nb_fit(watermelon, smoothing=0.0)
    scores = nb_score(model, MELON)
    categorical = 8 / 17 * 3 / 8 * 5 / 8 * 6 / 8 * 7 / 8 * 5 / 8 * 6 / 8
    assert math.exp(scores["true"]) == pytest.approx(categorical * 1.959 * 0.788, rel=0.01)
    assert scores["true"] > scores["false"]
    assert model.predict(watermelon.take([0])) == ["true"]


def test_laplace_smoothing(watermelon):
    model = nb_fit(watermelon)
    color = model.categorical[0]
    # (count + 1) / (class size + 3 categories)
    assert np.exp(color.log_probabilities[1]) == pytest.approx([5 / 11, 4 / 11, 2 / 11])
    assert model.predict(watermelon.take([0])) == ["true"]


def test_unseen_category(watermelon):
    row = ("purple",) + MELON[1:]
    with pytest.raises(UnknownCategoryAtPredict):
        nb_fit(watermelon, smoothing=0.0).score(row)
    scores = nb_fit(watermelon).score(row)
    assert all(math.isfinite(value) for value in scores.values())


def test_probabilities_sum_to_one(watermelon, iris):
    assert nb_predict_proba(nb_fit(watermelon), watermelon).sum(axis=1) == pytest.approx(np.ones(17))
    assert nb_predict_proba(nb_fit(iris), iris).shape == (150, 3)


def test_iris_training_accuracy(iris):
    predicted = nb_fit(iris).predict(iris)
    assert sum(p == t for p, t in zip(predicted, iris.label_values())) / 150 > 0.9


def test_decision_threshold(watermelon):
    ripe = watermelon.take([0])
    assert NbSpec(threshold=0.5, positive="true").fit(watermelon).predict(ripe) == ["true"]
    assert NbSpec(threshold=1.0, positive="true").fit(watermelon).predict(ripe) == ["false"]


def test_threshold_errors(watermelon, iris):
    with pytest.raises(UsageError):
        NbSpec(threshold=0.5)
    with pytest.raises(UsageError):
        NbSpec(threshold=1.5, positive="true")
    with pytest.raises(UsageError):
        NbSpec(threshold=0.5, positive="maybe").fit(watermelon)
    with pytest.raises(NotBinary):
        NbSpec(threshold=0.5, positive="Iris-setosa").fit(iris)
    with pytest.raises(UsageError):
        NbSpec(smoothing=-1.0)
