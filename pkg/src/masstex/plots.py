"""Figure rendering for the report-producing pipeline steps.

Each report CSV gets a PNG sibling: the training report a convergence
curve, the evaluation report an annotated confusion matrix. Rendering uses
the Agg backend so it works headless, and avoids any time-dependent
content so re-runs write identical files.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evaluation import ConfusionMatrix, MetricsReport
from .training import TrainReport

_DPI = 120


def _pct(value: float | None) -> str:
    return "undefined" if value is None else f"{100.0 * value:.2f}%"


def save_training_curve(report: TrainReport, path) -> None:
    """Total objective per epoch, log-scaled when the trace allows it."""
    epochs = np.arange(len(report.epoch_mse))
    values = np.asarray(report.epoch_mse)
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    if (values > 0).all():
        ax.semilogy(epochs, values, lw=1.2)
    else:
        ax.plot(epochs, values, lw=1.2)
    ax.axhline(report.config.target_total_mse, color="tab:red", ls="--", lw=0.8,
               label=f"target {report.config.target_total_mse:g}")
    ax.set_xlabel("epoch")
    ax.set_ylabel("total MSE")
    ax.set_title(f"training ({report.stop_reason}, {report.epochs_used} epochs)")
    ax.legend(loc="upper right", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_confusion_matrix(cm: ConfusionMatrix, rep: MetricsReport, path) -> None:
    """2x2 count matrix with sensitivity/specificity in the title."""
    counts = np.array([[cm.tn, cm.fp], [cm.fn, cm.tp]])
    fig, ax = plt.subplots(figsize=(4.2, 3.8))
    ax.imshow(counts, cmap="Blues")
    for row in range(2):
        for col in range(2):
            ax.text(col, row, str(counts[row, col]), ha="center", va="center",
                    color="black", fontsize=14)
    ax.set_xticks([0, 1], ["benign", "malignant"])
    ax.set_yticks([0, 1], ["benign", "malignant"])
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    ax.set_title(f"SN {_pct(rep.sensitivity)}  SP {_pct(rep.specificity)}"
                 f"  (threshold {rep.threshold:g})", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
