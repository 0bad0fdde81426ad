"""Synthetic data and numeric cross-checks for exercising the pipeline.

Real annotated mammogram sets are large and unredistributable, so the
acceptance path trains on a small synthetic feature cloud instead: two
clusters in the 7-feature space, far enough apart that a brute-force
threshold sweep on a single feature already separates them. The module
also provides finite-difference gradients as an independent check of the
analytic backpropagation.
"""

from dataclasses import dataclass

import numpy as np

from .features import LABEL_BENIGN, LABEL_MALIGNANT, FeatureRecord
from .mlp import Gradient, LabeledSample, MlpModel, Topology, forward
from .rng import Lcg
from .roi import MaskedRegion
from .pgm import GrayImage

# Fixed dataset used by the acceptance suite. The centroids differ by far
# more than 4 * spread (entropy alone is 2.6 apart), so the classes stay
# cleanly separable after jitter.
DEFAULT_SYNTH_SEED = 424242
DEFAULT_N_PER_CLASS = 100
DEFAULT_SPREAD = 0.15
BENIGN_CENTER = (0.34, 0.10, 0.012, 3.0, 0.45, -0.30, 0.060)
MALIGNANT_CENTER = (0.62, 0.22, 0.047, 5.6, -0.55, 1.10, 0.014)

# (low, high) clip bounds per feature; None leaves the value unclipped
FEATURE_BOUNDS = (
    (0.0, 1.0),     # mean
    (0.0, 0.5),     # std
    (0.0, 0.2),     # smoothness
    (0.0, 8.0),     # entropy
    None,           # skewness
    None,           # kurtosis
    (1e-9, 1.0),    # uniformity (must stay positive)
)


@dataclass(frozen=True)
class SynthSpec:
    n_per_class: int = DEFAULT_N_PER_CLASS
    class_centers: tuple = (BENIGN_CENTER, MALIGNANT_CENTER)
    spread: float = DEFAULT_SPREAD
    seed: int = DEFAULT_SYNTH_SEED

    def __post_init__(self):
        if self.n_per_class < 1:
            raise ValueError("n_per_class must be positive")
        if self.spread <= 0:
            raise ValueError("spread must be positive")


def gen_synthetic(spec: SynthSpec = SynthSpec()) -> list[FeatureRecord]:
    """Two jittered clusters of labeled feature records, benign first.

    Each feature is its class centroid plus uniform jitter in [-spread,
    +spread], clipped back into the valid feature ranges. The same seed
    always produces the identical dataset.
    """
    rng = Lcg(spec.seed)
    records = []
    for label, prefix, center in (
        (LABEL_BENIGN, "b", spec.class_centers[0]),
        (LABEL_MALIGNANT, "m", spec.class_centers[1]),
    ):
        for i in range(spec.n_per_class):
            values = []
            for mid, bounds in zip(center, FEATURE_BOUNDS, strict=True):
                v = mid + rng.uniform(-spec.spread, spec.spread)
                if bounds is not None:
                    v = min(max(v, bounds[0]), bounds[1])
                values.append(v)
            records.append(FeatureRecord(f"{prefix}{i:03d}", *values, label=label))
    return records


def best_single_feature_accuracy(records) -> float:
    """Exhaustive threshold sweep over every feature, both polarities.

    Returns the best achievable accuracy of a rule "feature >= cut" (or its
    flip) across all features and all candidate cuts. Used to certify that
    a dataset is separable before any training happens.
    """
    records = list(records)
    labels = np.array([rec.label for rec in records])
    best = 0.0
    matrix = np.stack([rec.vector() for rec in records])
    for col in range(matrix.shape[1]):
        values = matrix[:, col]
        for cut in np.unique(values):
            pred = (values >= cut).astype(int)
            acc = float((pred == labels).mean())
            best = max(best, acc, 1.0 - acc)
    return best


def fd_gradient(model: MlpModel, sample: LabeledSample, step: float = 1e-5) -> Gradient:
    """Central-difference gradient of the single-sample objective term.

    Perturbs one weight at a time: (E(w + step) - E(w - step)) / (2 * step).
    Independent of the analytic backward pass, so the two can check each
    other.
    """
    if step <= 0:
        raise ValueError("step must be positive")

    def objective(m: MlpModel) -> float:
        out, _ = forward(m, sample.features)
        diff = sample.target - out
        return 0.5 * float((diff * diff).sum())

    def perturbed(arr: np.ndarray) -> np.ndarray:
        grad = np.zeros_like(arr)
        flat = arr.ravel()
        gflat = grad.ravel()
        for i in range(flat.size):
            keep = flat[i]
            flat[i] = keep + step
            e_plus = objective(model)
            flat[i] = keep - step
            e_minus = objective(model)
            flat[i] = keep
            gflat[i] = (e_plus - e_minus) / (2.0 * step)
        return grad

    g_w_ih = perturbed(model.w_ih)
    g_w_ho = perturbed(model.w_ho)
    if model.topology.bias_enabled:
        return Gradient(g_w_ih, g_w_ho, perturbed(model.b_h), perturbed(model.b_o))
    return Gradient(g_w_ih, g_w_ho)


GRADCHECK_TOPOLOGIES = (
    Topology(2, 2, 1, bias_enabled=True),
    Topology(7, 5, 1, bias_enabled=False),
    Topology(3, 2, 2, bias_enabled=True),
)


def _component_errors(analytic: Gradient, numeric: Gradient) -> list[float]:
    errors = []
    pairs = [(analytic.w_ih, numeric.w_ih), (analytic.w_ho, numeric.w_ho)]
    if analytic.b_h is not None:
        pairs += [(analytic.b_h, numeric.b_h), (analytic.b_o, numeric.b_o)]
    for a_arr, n_arr in pairs:
        for a, n in zip(a_arr.ravel(), n_arr.ravel()):
            scale = abs(a) + abs(n)
            diff = abs(a - n)
            errors.append(diff if scale < 1e-8 else diff / scale)
    return errors


def gradient_check(cases: int = 100, step: float = 1e-5, seed: int = 42) -> float:
    """Max discrepancy between backprop and central differences.

    Runs ``cases`` seeded (model, sample) pairs cycling through three
    topologies; components with |analytic| + |numeric| < 1e-8 are compared
    absolutely, the rest relatively. A healthy implementation stays below
    1e-4.
    """
    from .mlp import backprop_gradient
    from .training import init_model

    rng = Lcg(seed)
    worst = 0.0
    for case in range(cases):
        topo = GRADCHECK_TOPOLOGIES[case % len(GRADCHECK_TOPOLOGIES)]
        model = init_model(topo, rng, 1.0)
        features = np.array([rng.uniform(-2.0, 2.0) for _ in range(topo.inputs)])
        target = np.array([0.9 if rng.next_float() < 0.5 else 0.1 for _ in range(topo.outputs)])
        sample = LabeledSample(features, target)
        errors = _component_errors(
            backprop_gradient(model, sample), fd_gradient(model, sample, step)
        )
        worst = max(worst, max(errors))
    return worst


def random_region(rng: Lcg, width: int = 4, height: int = 4, levels=(0, 85, 170, 255)) -> MaskedRegion:
    """Fully masked region with pixels drawn uniformly from ``levels``."""
    flat = [levels[rng.below(len(levels))] for _ in range(width * height)]
    img = GrayImage.from_flat(width, height, flat)
    mask = np.ones((height, width), dtype=bool)
    return MaskedRegion(img, mask, width * height)


def random_image(rng: Lcg, width: int, height: int) -> GrayImage:
    """Image with uniformly random 0..255 pixels from the seeded stream."""
    flat = [rng.below(256) for _ in range(width * height)]
    return GrayImage.from_flat(width, height, flat)
