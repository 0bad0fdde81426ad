"""Thresholding model outputs and confusion-matrix metrics.

Malignant is the positive class throughout:

    sensitivity SN = TP / (TP + FN)    specificity SP = TN / (TN + FP)

Sensitivity equals the per-class accuracy on malignant cases and
specificity the per-class accuracy on benign ones, so the report carries
both names for the same two quantities. Zero-denominator metrics are
reported as explicitly undefined (None), never silently as 0.
"""

from dataclasses import dataclass
from pathlib import Path

from .features import LABEL_BENIGN, LABEL_MALIGNANT
from .mlp import MlpModel, forward

DEFAULT_THRESHOLD = 0.5  # midpoint of the 0.1 / 0.9 target coding


class LengthMismatch(Exception):
    pass


class EmptyInput(Exception):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class MetricsReport:
    """Fractions in [0, 1]; None marks an undefined (0/0) metric."""

    sensitivity: float | None
    specificity: float | None
    accuracy_benign: float | None
    accuracy_malignant: float | None
    threshold: float


def threshold_score(score: float, threshold: float = DEFAULT_THRESHOLD) -> int:
    """Class decision for one raw output; ties (score == threshold) go malignant."""
    return LABEL_MALIGNANT if score >= threshold else LABEL_BENIGN


def classify(model: MlpModel, features, threshold: float = DEFAULT_THRESHOLD) -> int:
    """Run the model and threshold its single output."""
    out, _ = forward(model, features)
    return threshold_score(float(out[0]), threshold)


def confusion(truth, predicted) -> ConfusionMatrix:
    """Count TP/TN/FP/FN over paired 0/1 label sequences."""
    truth = list(truth)
    predicted = list(predicted)
    if len(truth) != len(predicted):
        raise LengthMismatch(f"{len(truth)} truth labels vs {len(predicted)} predictions")
    if not truth:
        raise EmptyInput("no samples to evaluate")
    tp = tn = fp = fn = 0
    for t, p in zip(truth, predicted):
        if t == LABEL_MALIGNANT:
            if p == LABEL_MALIGNANT:
                tp += 1
            else:
                fn += 1
        else:
            if p == LABEL_BENIGN:
                tn += 1
            else:
                fp += 1
    return ConfusionMatrix(tp, tn, fp, fn)


def metrics(cm: ConfusionMatrix, threshold: float = DEFAULT_THRESHOLD) -> MetricsReport:
    sn = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn > 0 else None
    sp = cm.tn / (cm.tn + cm.fp) if cm.tn + cm.fp > 0 else None
    return MetricsReport(
        sensitivity=sn,
        specificity=sp,
        accuracy_benign=sp,
        accuracy_malignant=sn,
        threshold=threshold,
    )


def _percent(value: float | None) -> str:
    return "undefined" if value is None else f"{100.0 * value:.2f}"


def render_report(cm: ConfusionMatrix, rep: MetricsReport) -> str:
    """CSV row plus a readable table of the same counts and percentages."""
    lines = [
        "tp,tn,fp,fn,sensitivity,specificity,threshold",
        f"{cm.tp},{cm.tn},{cm.fp},{cm.fn},{_percent(rep.sensitivity)},"
        f"{_percent(rep.specificity)},{format(rep.threshold, 'g')}",
        "",
        f"{'TP':<6}{'TN':<6}{'FP':<6}{'FN':<6}{'SN (%)':<10}{'SP (%)':<10}",
        f"{cm.tp:<6}{cm.tn:<6}{cm.fp:<6}{cm.fn:<6}"
        f"{_percent(rep.sensitivity):<10}{_percent(rep.specificity):<10}",
    ]
    return "\n".join(lines) + "\n"


def write_report(cm: ConfusionMatrix, rep: MetricsReport, path) -> None:
    Path(path).write_text(render_report(cm, rep))
