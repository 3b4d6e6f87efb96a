import math

import pytest

from tabula.errors import Empty, LengthMismatch, UnknownColumn, UsageError
from tabula.metrics import (
    UNDEFINED,
    ConfusionMatrix,
    accuracy,
    classification_report,
    confusion,
    defined_mean,
    error_rate,
    f1,
    get_scorer,
    micro_recall,
    mse,
    precision,
    recall,
    specificity,
    to_json_value,
)

TRUTH = ["cat", "cat", "cat", "dog", "dog", "fish"]
PREDICTED = ["cat", "cat", "dog", "dog", "cat", "dog"]


def test_confusion_counts():
    cm = confusion(TRUTH, PREDICTED)
    assert cm.classes == ("cat", "dog", "fish")
    assert cm.counts == ((2, 1, 0), (1, 1, 0), (0, 1, 0))
    assert cm.total == 6
    assert cm.binary_counts("cat") == (2, 1, 1, 2)


def test_accuracy_and_error_rate():
    cm = confusion(TRUTH, PREDICTED)
    assert accuracy(cm) == pytest.approx(0.5)
    assert error_rate(cm) == pytest.approx(0.5)
    assert micro_recall(cm) == accuracy(cm)


def test_hold_out_error_count():
    truth = ["a"] * 300
    predicted = ["b"] * 90 + ["a"] * 210
    cm = confusion(truth, predicted)
    assert error_rate(cm) == pytest.approx(0.30)
    assert accuracy(cm) == pytest.approx(0.70)


def test_binary_metrics():
    cm = confusion(TRUTH, PREDICTED)
    assert precision(cm, "cat") == pytest.approx(2 / 3)
    assert recall(cm, "cat") == pytest.approx(2 / 3)
    assert specificity(cm, "cat") == pytest.approx(2 / 3)
    assert f1(cm, "dog") == pytest.approx(2 * (1 / 3) * (1 / 2) / (1 / 3 + 1 / 2))


def test_zero_denominators_are_undefined():
    cm = confusion(TRUTH, PREDICTED)
    # "fish" is never predicted
    assert precision(cm, "fish") is UNDEFINED
    assert recall(cm, "fish") == 0.0
    assert f1(cm, "fish") is UNDEFINED


def test_report_averages_skip_undefined():
    report = classification_report(confusion(TRUTH, PREDICTED))
    assert [row.support for row in report.per_class] == [3, 2, 1]
    # macro precision over cat and dog only
    assert report.macro[0] == pytest.approx((2 / 3 + 1 / 3) / 2)
    assert report.weighted[1] == pytest.approx((3 * 2 / 3 + 2 * 1 / 2 + 1 * 0.0) / 6)
    payload = report.to_json()
    assert payload["per_class"][2]["precision"] == "undefined"
    assert payload["support"] == 6
    assert "undef" in report.to_text()


def test_mse():
    assert mse([1, 2, 3], [1, 2, 5]) == pytest.approx(4 / 3)
    with pytest.raises(LengthMismatch):
        mse([1, 2], [1])
    with pytest.raises(Empty):
        mse([], [])


def test_confusion_errors():
    with pytest.raises(LengthMismatch):
        confusion(["a"], ["a", "b"])
    with pytest.raises(Empty):
        confusion([], [])
    with pytest.raises(UnknownColumn):
        precision(confusion(["a"], ["a"]), "b")
    with pytest.raises(LengthMismatch):
        ConfusionMatrix(classes=("a", "b"), counts=((1, 0),))


def test_scorers():
    assert get_scorer("accuracy")(TRUTH, PREDICTED) == pytest.approx(0.5)
    error = get_scorer("error_rate")
    assert not error.greater_is_better
    assert error.better(0.1, 0.2)
    assert not get_scorer("mse").better(1.0, 1.0)
    assert get_scorer("f1:cat")(TRUTH, PREDICTED) == pytest.approx(2 / 3)
    assert math.isnan(get_scorer("f1:bird")(TRUTH, PREDICTED))
    with pytest.raises(UsageError):
        get_scorer("auc")


def test_nan_never_beats_a_number():
    scorer = get_scorer("accuracy")
    assert scorer.better(0.3, float("nan"))
    assert not scorer.better(float("nan"), 0.3)


def test_undefined_scores_are_tagged_in_json():
    undefined = get_scorer("f1:bird")(TRUTH, PREDICTED)
    assert to_json_value(undefined) == "undefined"
    assert to_json_value(UNDEFINED) == "undefined"
    assert to_json_value(0.25) == 0.25
    assert defined_mean([0.5, undefined, 1.0]) == 0.75
    assert to_json_value(defined_mean([undefined, undefined])) == "undefined"
