"""Feed-forward network with one sigmoid hidden layer and sigmoid outputs.

The objective minimized during training is half the total squared error
over a sample set,

    E = (1/2) * sum_j sum_i (T_ij - O_ij)^2,

summed over samples j and output units i with no division by the sample
count. Targets are coded 0.1 (benign) and 0.9 (malignant) so the sigmoid
outputs never need to saturate. Gradients are exact partial derivatives of
the single-sample term, using sigmoid'(a) = a * (1 - a) on activations.

Models are treated as immutable values for inference; only the trainer
mutates weights, and it owns the model exclusively while doing so.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DimensionMismatch(Exception):
    pass


class EmptySampleSet(Exception):
    pass


@dataclass(frozen=True)
class Topology:
    """Layer sizes; bias vectors exist only when bias_enabled."""

    inputs: int
    hidden: int
    outputs: int
    bias_enabled: bool = True

    @property
    def weight_count(self) -> int:
        count = self.inputs * self.hidden + self.hidden * self.outputs
        if self.bias_enabled:
            count += self.hidden + self.outputs
        return count


def hidden_units(n: int) -> int:
    """Hidden-layer size rule floor((n + 1) * 2/3), at least 1; 7 inputs -> 5."""
    if n < 1:
        raise ValueError("input count must be positive")
    return max(1, (n + 1) * 2 // 3)


@dataclass(eq=False)
class MlpModel:
    """Weights of a single-hidden-layer network.

    w_ih is (hidden, inputs), w_ho is (outputs, hidden); b_h and b_o are
    None when the topology has biases disabled.
    """

    topology: Topology
    w_ih: np.ndarray
    w_ho: np.ndarray
    b_h: np.ndarray | None = None
    b_o: np.ndarray | None = None


@dataclass(eq=False)
class Gradient:
    """Partial derivatives with the same shapes as the model weights."""

    w_ih: np.ndarray
    w_ho: np.ndarray
    b_h: np.ndarray | None = None
    b_o: np.ndarray | None = None


@dataclass(eq=False)
class LabeledSample:
    """Feature vector plus target outputs, each target 0.1 or 0.9."""

    features: np.ndarray
    target: np.ndarray


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Logistic function, strictly inside (0, 1) for every finite input.

    Arguments are clamped to [-36.5, 36.5] before exponentiation. Beyond
    that the true value differs from the clamped one by about a float64
    ulp, and the clamp keeps the result strictly between 0 and 1 instead
    of letting it round to an exact endpoint.
    """
    return 1.0 / (1.0 + np.exp(-np.clip(z, -36.5, 36.5)))


def forward(model: MlpModel, features) -> tuple[np.ndarray, np.ndarray]:
    """One inference pass; returns (outputs, hidden activations)."""
    x = np.asarray(features, dtype=np.float64)
    topo = model.topology
    if x.shape != (topo.inputs,):
        raise DimensionMismatch(f"expected {topo.inputs} features, got shape {x.shape}")
    z_h = model.w_ih @ x
    if model.b_h is not None:
        z_h = z_h + model.b_h
    h = sigmoid(z_h)
    z_o = model.w_ho @ h
    if model.b_o is not None:
        z_o = z_o + model.b_o
    return sigmoid(z_o), h


def half_squared_error(targets, outputs) -> float:
    """(1/2) * sum of squared residuals over paired target/output rows."""
    total = 0.0
    for t, o in zip(targets, outputs, strict=True):
        diff = np.asarray(t, dtype=np.float64) - np.asarray(o, dtype=np.float64)
        total += float((diff * diff).sum())
    return 0.5 * total


def mse(model: MlpModel, samples) -> float:
    """Total objective over a sample set (no division by the sample count)."""
    if len(samples) == 0:
        raise EmptySampleSet("cannot evaluate the objective on zero samples")
    total = 0.0
    for sample in samples:
        out, _ = forward(model, sample.features)
        diff = sample.target - out
        total += float((diff * diff).sum())
    return 0.5 * total


def backprop_gradient(model: MlpModel, sample: LabeledSample) -> Gradient:
    """Exact gradient of the single-sample objective term."""
    topo = model.topology
    x = np.asarray(sample.features, dtype=np.float64)
    t = np.asarray(sample.target, dtype=np.float64)
    if t.shape != (topo.outputs,):
        raise DimensionMismatch(f"expected {topo.outputs} targets, got shape {t.shape}")
    out, h = forward(model, x)

    delta_o = (out - t) * out * (1.0 - out)
    g_w_ho = np.outer(delta_o, h)
    delta_h = (model.w_ho.T @ delta_o) * h * (1.0 - h)
    g_w_ih = np.outer(delta_h, x)
    if topo.bias_enabled:
        return Gradient(g_w_ih, g_w_ho, delta_h.copy(), delta_o.copy())
    return Gradient(g_w_ih, g_w_ho)


MODEL_MAGIC = "MLP1"


def dump_model(model: MlpModel) -> str:
    """Serialize to the text model format.

    Line 1 is the magic, line 2 "inputs hidden outputs bias", then one real
    per line: w_ih row-major, w_ho row-major, b_h and b_o when biases are
    enabled. 17 significant digits make the round-trip bit-exact.
    """
    topo = model.topology
    lines = [MODEL_MAGIC, f"{topo.inputs} {topo.hidden} {topo.outputs} {int(topo.bias_enabled)}"]
    parts = [model.w_ih.ravel(), model.w_ho.ravel()]
    if topo.bias_enabled:
        parts += [model.b_h, model.b_o]
    for part in parts:
        lines.extend(format(float(v), ".17g") for v in part)
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> MlpModel:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != MODEL_MAGIC:
        raise ValueError(f"not a {MODEL_MAGIC} model file")
    fields = lines[1].split()
    if len(fields) != 4:
        raise ValueError(f"bad topology line {lines[1]!r}")
    try:
        n, hidden, k, bias_flag = (int(f) for f in fields)
    except ValueError:
        raise ValueError(f"bad topology line {lines[1]!r}") from None
    if bias_flag not in (0, 1):
        raise ValueError(f"bias flag must be 0 or 1, got {bias_flag}")
    topo = Topology(n, hidden, k, bool(bias_flag))
    expected = topo.weight_count
    raw = lines[2:]
    if len(raw) != expected:
        raise ValueError(f"expected {expected} weights, found {len(raw)}")
    try:
        values = np.array([float(v) for v in raw], dtype=np.float64)
    except ValueError as err:
        raise ValueError(f"bad weight value: {err}") from None
    if not np.isfinite(values).all():
        raise ValueError("model weights must be finite")

    pos = 0
    w_ih = values[pos : pos + hidden * n].reshape(hidden, n)
    pos += hidden * n
    w_ho = values[pos : pos + k * hidden].reshape(k, hidden)
    pos += k * hidden
    b_h = b_o = None
    if topo.bias_enabled:
        b_h = values[pos : pos + hidden].copy()
        pos += hidden
        b_o = values[pos : pos + k].copy()
    return MlpModel(topo, w_ih.copy(), w_ho.copy(), b_h, b_o)


def save_model(model: MlpModel, path) -> None:
    Path(path).write_text(dump_model(model))


def load_model(path) -> MlpModel:
    return parse_model(Path(path).read_text())
