import numpy as np
import pytest

from masstex.evaluation import (
    ConfusionMatrix,
    EmptyInput,
    LengthMismatch,
    classify,
    confusion,
    metrics,
    render_report,
    threshold_score,
)
from masstex.mlp import Topology
from masstex.rng import Lcg
from masstex.training import init_model


def test_threshold_rule_and_tie():
    assert threshold_score(0.9, 0.5) == 1
    assert threshold_score(0.1, 0.5) == 0
    assert threshold_score(0.5, 0.5) == 1  # ties go malignant


def test_classify_runs_model():
    model = init_model(Topology(7, 5, 1), Lcg(3), 0.5)
    decision = classify(model, np.zeros(7))
    assert decision in (0, 1)
    # forcing threshold to the extremes flips the decision deterministically
    assert classify(model, np.zeros(7), threshold=1e-9) == 1
    assert classify(model, np.zeros(7), threshold=1.0 - 1e-9) == 0


def test_confusion_all_malignant():
    cm = confusion([1, 1, 1], [1, 1, 1])
    assert (cm.tp, cm.tn, cm.fp, cm.fn) == (3, 0, 0, 0)


def test_confusion_crossed_pair():
    cm = confusion([0, 1], [1, 0])
    assert (cm.fp, cm.fn) == (1, 1)
    assert (cm.tp, cm.tn) == (0, 0)


def test_confusion_reconstructed_published_counts():
    # 22 malignant of which 20 caught, 31 benign of which 26 cleared
    truth = [1] * 22 + [0] * 31
    predicted = [1] * 20 + [0] * 2 + [0] * 26 + [1] * 5
    cm = confusion(truth, predicted)
    assert (cm.tp, cm.tn, cm.fp, cm.fn) == (20, 26, 5, 2)
    rep = metrics(cm)
    assert abs(100 * rep.sensitivity - 90.91) < 0.01
    assert abs(100 * rep.specificity - 83.87) < 0.01


def test_confusion_errors():
    with pytest.raises(LengthMismatch):
        confusion([1], [1, 0])
    with pytest.raises(EmptyInput):
        confusion([], [])


def test_metrics_perfect():
    rep = metrics(ConfusionMatrix(1, 1, 0, 0))
    assert rep.sensitivity == 1.0 and rep.specificity == 1.0
    assert rep.accuracy_malignant == 1.0 and rep.accuracy_benign == 1.0


def test_metrics_undefined_flagged_not_zeroed():
    rep = metrics(ConfusionMatrix(0, 5, 0, 0))
    assert rep.sensitivity is None
    assert rep.specificity == 1.0
    rep = metrics(ConfusionMatrix(3, 0, 0, 0))
    assert rep.specificity is None
    assert rep.sensitivity == 1.0


def test_metrics_identities_random_sweep():
    rng = Lcg(12345)
    for _ in range(10000):
        tp, tn, fp, fn = (rng.below(51) for _ in range(4))
        cm = ConfusionMatrix(tp, tn, fp, fn)
        rep = metrics(cm)
        if tp + fn > 0:
            assert rep.sensitivity == tp / (tp + fn)
        else:
            assert rep.sensitivity is None
        if tn + fp > 0:
            assert rep.specificity == tn / (tn + fp)
        else:
            assert rep.specificity is None


def test_metrics_permutation_invariant():
    rng = Lcg(777)
    truth = [rng.below(2) for _ in range(40)]
    predicted = [rng.below(2) for _ in range(40)]
    base = confusion(truth, predicted)
    order = list(range(40))
    rng.shuffle(order)
    shuffled = confusion([truth[i] for i in order], [predicted[i] for i in order])
    assert base == shuffled
    assert metrics(base) == metrics(shuffled)


def test_threshold_monotonicity_on_scores():
    rng = Lcg(888)
    truth = [rng.below(2) for _ in range(60)]
    scores = [rng.next_float() for _ in range(60)]
    previous_tp, previous_tn = None, None
    for threshold in np.linspace(0.01, 0.99, 25):
        predicted = [threshold_score(s, threshold) for s in scores]
        cm = confusion(truth, predicted)
        if previous_tp is not None:
            assert cm.tp <= previous_tp  # raising the bar never adds positives
            assert cm.tn >= previous_tn
        previous_tp, previous_tn = cm.tp, cm.tn


def test_render_report_layout():
    cm = ConfusionMatrix(20, 26, 5, 2)
    text = render_report(cm, metrics(cm))
    lines = text.splitlines()
    assert lines[0] == "tp,tn,fp,fn,sensitivity,specificity,threshold"
    assert lines[1] == "20,26,5,2,90.91,83.87,0.5"
    assert "TP" in lines[3] and "SN (%)" in lines[3]
    assert "90.91" in lines[4] and "83.87" in lines[4]


def test_render_report_undefined_cells():
    cm = ConfusionMatrix(0, 5, 0, 0)
    text = render_report(cm, metrics(cm))
    assert "undefined" in text.splitlines()[1]
