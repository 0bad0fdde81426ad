"""Dataset encoding, train/test splitting, and gradient-descent fitting.

Everything here is deterministic: the split and the trainer draw all
randomness (weight init, per-epoch sample order) from the seeded LCG in
masstex.rng, so a (records, config, seed) triple fixes the output model
bit-for-bit. The training report echoes every resolved hyperparameter so
a run is reproducible from its own output.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .features import LABEL_BENIGN, LABEL_MALIGNANT, FeatureRecord
from .mlp import (
    DimensionMismatch,
    EmptySampleSet,
    Gradient,
    LabeledSample,
    MlpModel,
    Topology,
    backprop_gradient,
    sigmoid,
)
from .rng import Lcg

TARGET_BENIGN = 0.1
TARGET_MALIGNANT = 0.9


class UnlabeledRecord(Exception):
    def __init__(self, record_id: str):
        super().__init__(f"record {record_id!r} carries no label")
        self.record_id = record_id


class ClassMissing(Exception):
    pass


class NonFiniteLoss(Exception):
    pass


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    max_epochs: int = 10000
    target_total_mse: float = 0.01
    seed: int = 42
    init_range: float = 0.5
    update_mode: str = "per-sample"  # or "batch"

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.init_range <= 0:
            raise ValueError("init_range must be positive")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be positive")
        if self.target_total_mse <= 0:
            raise ValueError("target_total_mse must be positive")
        if self.update_mode not in ("per-sample", "batch"):
            raise ValueError(f"unknown update_mode {self.update_mode!r}")


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.25
    stratified: bool = True
    seed: int = 42

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie strictly between 0 and 1")


@dataclass
class TrainReport:
    """Per-epoch objective trace plus the fully resolved run configuration."""

    epoch_mse: list[float] = field(default_factory=list)  # index 0 = before training
    stop_reason: str = ""
    epochs_used: int = 0
    final_total_mse: float = 0.0
    per_sample_mse: float = 0.0
    config: TrainConfig | None = None
    topology: Topology | None = None

    def to_csv(self) -> str:
        lines = ["epoch,total_mse"]
        lines += [f"{epoch},{format(v, '.17g')}" for epoch, v in enumerate(self.epoch_mse)]
        cfg = self.config
        topo = self.topology
        lines += [
            f"stop_reason={self.stop_reason}",
            f"seed={cfg.seed}",
            f"learning_rate={format(cfg.learning_rate, 'g')}",
            f"epochs_used={self.epochs_used}",
            f"max_epochs={cfg.max_epochs}",
            f"target_total_mse={format(cfg.target_total_mse, 'g')}",
            f"init_range={format(cfg.init_range, 'g')}",
            f"update_mode={cfg.update_mode}",
            f"topology={topo.inputs}-{topo.hidden}-{topo.outputs}",
            f"bias={int(topo.bias_enabled)}",
            f"final_total_mse={format(self.final_total_mse, '.17g')}",
            f"per_sample_mse={format(self.per_sample_mse, '.17g')}",
        ]
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_csv())


def encode_targets(records) -> list[LabeledSample]:
    """Map labeled feature records to training samples.

    Benign becomes target [0.1], malignant [0.9]; features keep the fixed
    classifier order. Unlabeled records are an error, not a silent skip.
    """
    samples = []
    for rec in records:
        if rec.label is None:
            raise UnlabeledRecord(rec.id)
        target = TARGET_MALIGNANT if rec.label == LABEL_MALIGNANT else TARGET_BENIGN
        samples.append(LabeledSample(rec.vector(), np.array([target])))
    return samples


def split(records, spec: SplitSpec) -> tuple[list[FeatureRecord], list[FeatureRecord]]:
    """Partition records into (train, test) with |train| = floor(fraction * N).

    Stratified mode takes floor(fraction * N_c) per class, then tops up from
    the larger class (ties favour benign) until the overall count is met.
    Original record order is preserved inside each part; the same seed
    always yields the same partition.
    """
    records = list(records)
    n_total = len(records)
    n_train = int(spec.train_fraction * n_total)
    rng = Lcg(spec.seed)

    if not spec.stratified:
        order = list(range(n_total))
        rng.shuffle(order)
        chosen = set(order[:n_train])
    else:
        by_class: dict[int, list[int]] = {LABEL_BENIGN: [], LABEL_MALIGNANT: []}
        for idx, rec in enumerate(records):
            if rec.label is None:
                raise UnlabeledRecord(rec.id)
            by_class[rec.label].append(idx)
        for label, members in by_class.items():
            if not members:
                raise ClassMissing(f"stratified split needs both classes; class {label} is empty")
        chosen = set()
        taken: dict[int, int] = {}
        for label in (LABEL_BENIGN, LABEL_MALIGNANT):
            members = by_class[label]
            rng.shuffle(members)
            taken[label] = int(spec.train_fraction * len(members))
            chosen.update(members[: taken[label]])
        # flooring per class can fall one short of the overall floor
        deficit = n_train - len(chosen)
        if deficit > 0:
            larger = max(
                (LABEL_BENIGN, LABEL_MALIGNANT),
                key=lambda lb: (len(by_class[lb]), lb == LABEL_BENIGN),
            )
            pool = by_class[larger]
            chosen.update(pool[taken[larger] : taken[larger] + deficit])

    train = [rec for idx, rec in enumerate(records) if idx in chosen]
    test = [rec for idx, rec in enumerate(records) if idx not in chosen]
    return train, test


def init_model(topology: Topology, rng: Lcg, init_range: float) -> MlpModel:
    """Draw initial weights uniformly from [-init_range, +init_range].

    Draw order is fixed: w_ih row-major, then w_ho row-major, then the
    hidden and output biases when enabled.
    """

    def draw(count: int) -> np.ndarray:
        return np.array([rng.uniform(-init_range, init_range) for _ in range(count)])

    w_ih = draw(topology.hidden * topology.inputs).reshape(topology.hidden, topology.inputs)
    w_ho = draw(topology.outputs * topology.hidden).reshape(topology.outputs, topology.hidden)
    b_h = b_o = None
    if topology.bias_enabled:
        b_h = draw(topology.hidden)
        b_o = draw(topology.outputs)
    return MlpModel(topology, w_ih, w_ho, b_h, b_o)


def _apply_gradient(model: MlpModel, grad: Gradient, learning_rate: float) -> None:
    model.w_ih -= learning_rate * grad.w_ih
    model.w_ho -= learning_rate * grad.w_ho
    if model.b_h is not None:
        model.b_h -= learning_rate * grad.b_h
        model.b_o -= learning_rate * grad.b_o


def _total_mse(model: MlpModel, x: np.ndarray, t: np.ndarray) -> float:
    """Vectorized objective over the whole sample matrix."""
    h = sigmoid(x @ model.w_ih.T + (model.b_h if model.b_h is not None else 0.0))
    out = sigmoid(h @ model.w_ho.T + (model.b_o if model.b_o is not None else 0.0))
    diff = t - out
    return 0.5 * float((diff * diff).sum())


def train(samples, topology: Topology, cfg: TrainConfig) -> tuple[MlpModel, TrainReport]:
    """Fit a model by plain gradient descent.

    Per-sample mode applies w <- w - lr * gradient after every sample, in a
    freshly shuffled order each epoch; batch mode accumulates the epoch's
    gradients and updates once. Training stops when the total objective
    drops to target_total_mse or the epoch cap is hit. The RNG stream is
    consumed in a fixed order (weight init first, then one shuffle per
    epoch), which makes runs bit-reproducible.
    """
    samples = list(samples)
    if not samples:
        raise EmptySampleSet("cannot train on zero samples")
    for s in samples:
        if s.features.shape != (topology.inputs,) or s.target.shape != (topology.outputs,):
            raise DimensionMismatch(
                f"sample shaped {s.features.shape}/{s.target.shape} does not fit "
                f"{topology.inputs}-{topology.hidden}-{topology.outputs}"
            )

    rng = Lcg(cfg.seed)
    model = init_model(topology, rng, cfg.init_range)
    x = np.stack([s.features for s in samples])
    t = np.stack([s.target for s in samples])

    trace = [_total_mse(model, x, t)]
    if not np.isfinite(trace[0]):
        raise NonFiniteLoss(f"objective is {trace[0]} before training")

    epochs_used = 0
    stop_reason = "epoch_cap"
    if trace[0] <= cfg.target_total_mse:
        stop_reason = "target_reached"
    else:
        order = list(range(len(samples)))
        for epoch in range(1, cfg.max_epochs + 1):
            if cfg.update_mode == "per-sample":
                rng.shuffle(order)
                for idx in order:
                    _apply_gradient(model, backprop_gradient(model, samples[idx]), cfg.learning_rate)
            else:
                total = None
                for sample in samples:
                    g = backprop_gradient(model, sample)
                    if total is None:
                        total = g
                    else:
                        total.w_ih += g.w_ih
                        total.w_ho += g.w_ho
                        if total.b_h is not None:
                            total.b_h += g.b_h
                            total.b_o += g.b_o
                _apply_gradient(model, total, cfg.learning_rate)

            current = _total_mse(model, x, t)
            trace.append(current)
            epochs_used = epoch
            if not np.isfinite(current):
                raise NonFiniteLoss(f"objective became {current} at epoch {epoch}")
            if current <= cfg.target_total_mse:
                stop_reason = "target_reached"
                break

    final = trace[-1]
    report = TrainReport(
        epoch_mse=trace,
        stop_reason=stop_reason,
        epochs_used=epochs_used,
        final_total_mse=final,
        per_sample_mse=final / len(samples),
        config=cfg,
        topology=topology,
    )
    return model, report
