import numpy as np
import pytest

from masstex.features import LABEL_BENIGN, LABEL_MALIGNANT
from masstex.rng import Lcg
from masstex.testkit import (
    FEATURE_BOUNDS,
    SynthSpec,
    best_single_feature_accuracy,
    gen_synthetic,
    random_region,
)


def test_rng_is_reproducible_and_fully_specified():
    a = Lcg(1)
    # first state from seed 1: (6364136223846793005 * 1 + 1442695040888963407) mod 2**64
    assert a.next_u64() == (6364136223846793005 + 1442695040888963407) % 2**64
    b = Lcg(1)
    assert [b.next_u64() for _ in range(3)] == [
        7806831264735756412,
        9396908728118811419,
        11960119808228829710,
    ]
    assert 0.0 <= Lcg(99).next_float() < 1.0


def test_rng_shuffle_deterministic():
    items1 = list(range(10))
    items2 = list(range(10))
    Lcg(5).shuffle(items1)
    Lcg(5).shuffle(items2)
    assert items1 == items2
    assert sorted(items1) == list(range(10))


def test_gen_synthetic_deterministic():
    a = gen_synthetic(SynthSpec(n_per_class=10, seed=77))
    b = gen_synthetic(SynthSpec(n_per_class=10, seed=77))
    assert [(r.id, r.label) + tuple(r.vector()) for r in a] == [
        (r.id, r.label) + tuple(r.vector()) for r in b
    ]


def test_gen_synthetic_counts_and_labels():
    records = gen_synthetic(SynthSpec(n_per_class=12, seed=3))
    assert len(records) == 24
    assert sum(1 for r in records if r.label == LABEL_BENIGN) == 12
    assert sum(1 for r in records if r.label == LABEL_MALIGNANT) == 12
    assert records[0].id == "b000" and records[12].id == "m000"


def test_gen_synthetic_respects_bounds():
    records = gen_synthetic(SynthSpec(n_per_class=200, spread=0.5, seed=9))
    for rec in records:
        for value, bounds in zip(rec.vector(), FEATURE_BOUNDS):
            if bounds is not None:
                assert bounds[0] <= value <= bounds[1]


def test_gen_synthetic_zero_spread_rejected():
    with pytest.raises(ValueError):
        SynthSpec(spread=0.0)


def test_point_clusters_trivially_separable():
    records = gen_synthetic(SynthSpec(n_per_class=5, spread=1e-12, seed=4))
    assert best_single_feature_accuracy(records) == 1.0


def test_default_spec_separable_by_threshold_sweep():
    records = gen_synthetic()
    assert len(records) == 200
    assert best_single_feature_accuracy(records) >= 0.99


def test_default_centroid_distance_vs_spread():
    spec = SynthSpec()
    a = np.array(spec.class_centers[0])
    b = np.array(spec.class_centers[1])
    assert np.linalg.norm(a - b) >= 4 * spec.spread


def test_random_region_alphabet_and_mask():
    region = random_region(Lcg(8))
    assert region.image.pixels.shape == (4, 4)
    assert set(np.unique(region.image.pixels)) <= {0, 85, 170, 255}
    assert region.active_count == 16
