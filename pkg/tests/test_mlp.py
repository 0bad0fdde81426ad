import math

import numpy as np
import pytest

from masstex.mlp import (
    DimensionMismatch,
    EmptySampleSet,
    LabeledSample,
    MlpModel,
    Topology,
    backprop_gradient,
    dump_model,
    forward,
    half_squared_error,
    hidden_units,
    load_model,
    mse,
    parse_model,
    save_model,
    sigmoid,
)
from masstex.rng import Lcg
from masstex.testkit import fd_gradient
from masstex.training import init_model


def test_hidden_units_rule():
    assert hidden_units(7) == 5
    assert hidden_units(2) == 2
    assert hidden_units(10) == 7
    assert hidden_units(1) == 1


def test_weight_counts():
    assert Topology(7, 5, 1, bias_enabled=False).weight_count == 40
    assert Topology(7, 5, 1, bias_enabled=True).weight_count == 46
    assert Topology(3, 2, 2, bias_enabled=True).weight_count == 6 + 4 + 2 + 2


def test_forward_zero_weights_gives_half():
    topo = Topology(7, 5, 1, bias_enabled=True)
    model = MlpModel(topo, np.zeros((5, 7)), np.zeros((1, 5)), np.zeros(5), np.zeros(1))
    out, hidden = forward(model, np.zeros(7))
    assert np.allclose(out, 0.5) and np.allclose(hidden, 0.5)


def test_forward_hand_evaluation():
    topo = Topology(1, 1, 1, bias_enabled=False)
    model = MlpModel(topo, np.ones((1, 1)), np.ones((1, 1)))
    out, hidden = forward(model, np.array([0.0]))
    assert hidden[0] == 0.5
    assert abs(out[0] - 0.622459) < 1e-6
    assert out[0] == 1.0 / (1.0 + math.exp(-0.5))


def test_forward_deterministic():
    model = init_model(Topology(7, 5, 1), Lcg(5), 0.5)
    x = np.zeros(7)
    a, _ = forward(model, x)
    b, _ = forward(model, x)
    assert np.array_equal(a, b)


def test_forward_dimension_mismatch():
    model = init_model(Topology(7, 5, 1), Lcg(5), 0.5)
    with pytest.raises(DimensionMismatch):
        forward(model, np.zeros(6))


def test_forward_strictly_inside_unit_interval():
    rng = Lcg(99)
    for scale in (0.5, 5.0, 50.0, 500.0):
        model = init_model(Topology(7, 5, 1), rng, scale)
        x = np.array([rng.uniform(-10, 10) for _ in range(7)])
        out, hidden = forward(model, x)
        assert np.isfinite(out).all() and np.isfinite(hidden).all()
        assert ((out > 0) & (out < 1)).all()
        assert ((hidden > 0) & (hidden < 1)).all()


def test_sigmoid_extremes_stay_strict():
    z = np.array([-1e308, -1000.0, 0.0, 1000.0, 1e308])
    v = sigmoid(z)
    assert np.isfinite(v).all()
    assert ((v > 0) & (v < 1)).all()


def test_half_squared_error_forced_outputs():
    assert half_squared_error([[0.9]], [[0.9]]) == 0.0
    value = half_squared_error([[0.9], [0.1]], [[0.5], [0.1]])
    assert abs(value - 0.08) < 1e-15


def test_mse_empty_set():
    model = init_model(Topology(2, 2, 1), Lcg(1), 0.5)
    with pytest.raises(EmptySampleSet):
        mse(model, [])


def test_mse_matches_manual_forward():
    model = init_model(Topology(2, 2, 1), Lcg(2), 0.5)
    samples = [
        LabeledSample(np.array([0.1, 0.9]), np.array([0.9])),
        LabeledSample(np.array([0.8, 0.2]), np.array([0.1])),
    ]
    expected = 0.0
    for s in samples:
        out, _ = forward(model, s.features)
        expected += 0.5 * float(((s.target - out) ** 2).sum())
    assert abs(mse(model, samples) - expected) < 1e-15


def test_mse_additivity_over_disjoint_sets():
    model = init_model(Topology(3, 2, 2), Lcg(3), 0.5)
    rng = Lcg(4)
    samples = [
        LabeledSample(
            np.array([rng.uniform(-1, 1) for _ in range(3)]),
            np.array([0.9 if rng.next_float() < 0.5 else 0.1 for _ in range(2)]),
        )
        for _ in range(8)
    ]
    whole = mse(model, samples)
    parts = mse(model, samples[:5]) + mse(model, samples[5:])
    assert math.isclose(whole, parts, rel_tol=1e-12)


def test_mse_nonnegative_and_zero_only_at_fit():
    model = init_model(Topology(2, 2, 1), Lcg(6), 0.5)
    sample = LabeledSample(np.array([0.3, 0.4]), np.array([0.9]))
    assert mse(model, [sample]) > 0.0


def test_backprop_hand_case():
    topo = Topology(1, 1, 1, bias_enabled=False)
    model = MlpModel(topo, np.zeros((1, 1)), np.zeros((1, 1)))
    sample = LabeledSample(np.array([1.0]), np.array([0.9]))
    grad = backprop_gradient(model, sample)
    # output 0.5, delta_o = (0.5 - 0.9) * 0.25 = -0.1
    assert abs(grad.w_ho[0, 0] - (-0.05)) < 1e-15
    assert grad.w_ih[0, 0] == 0.0


def test_backprop_near_zero_at_exact_fit():
    # drive the output to the 0.9 target: output weights force sigmoid(z) ~ 0.9
    topo = Topology(1, 1, 1, bias_enabled=True)
    logit = math.log(0.9 / 0.1)
    model = MlpModel(topo, np.zeros((1, 1)), np.zeros((1, 1)), np.zeros(1), np.array([logit]))
    sample = LabeledSample(np.array([0.0]), np.array([0.9]))
    grad = backprop_gradient(model, sample)
    for arr in (grad.w_ih, grad.w_ho, grad.b_h, grad.b_o):
        assert np.abs(arr).max() < 1e-12


def test_backprop_matches_finite_differences_random():
    rng = Lcg(77)
    for topo in (Topology(2, 2, 1), Topology(7, 5, 1, bias_enabled=False), Topology(3, 2, 2)):
        for _ in range(5):
            model = init_model(topo, rng, 1.0)
            sample = LabeledSample(
                np.array([rng.uniform(-2, 2) for _ in range(topo.inputs)]),
                np.array([0.9 if rng.next_float() < 0.5 else 0.1 for _ in range(topo.outputs)]),
            )
            analytic = backprop_gradient(model, sample)
            numeric = fd_gradient(model, sample, 1e-5)
            pairs = [(analytic.w_ih, numeric.w_ih), (analytic.w_ho, numeric.w_ho)]
            if topo.bias_enabled:
                pairs += [(analytic.b_h, numeric.b_h), (analytic.b_o, numeric.b_o)]
            for a, n in pairs:
                denom = np.abs(a) + np.abs(n)
                err = np.where(denom < 1e-8, np.abs(a - n), np.abs(a - n) / np.where(denom == 0, 1, denom))
                assert err.max() < 1e-4


def test_backprop_dimension_mismatch():
    model = init_model(Topology(2, 2, 1), Lcg(1), 0.5)
    with pytest.raises(DimensionMismatch):
        backprop_gradient(model, LabeledSample(np.array([1.0]), np.array([0.9])))
    with pytest.raises(DimensionMismatch):
        backprop_gradient(model, LabeledSample(np.array([1.0, 2.0]), np.array([0.9, 0.1])))


def test_model_file_round_trip_bit_exact(tmp_path):
    for bias in (True, False):
        model = init_model(Topology(7, 5, 1, bias_enabled=bias), Lcg(123), 0.5)
        text = dump_model(model)
        lines = text.splitlines()
        assert lines[0] == "MLP1"
        assert lines[1] == f"7 5 1 {int(bias)}"
        assert len(lines) == 2 + model.topology.weight_count
        back = parse_model(text)
        assert back.topology == model.topology
        assert back.w_ih.tobytes() == model.w_ih.tobytes()
        assert back.w_ho.tobytes() == model.w_ho.tobytes()
        if bias:
            assert back.b_h.tobytes() == model.b_h.tobytes()
            assert back.b_o.tobytes() == model.b_o.tobytes()
        assert dump_model(back) == text

        path = tmp_path / f"model_{int(bias)}.txt"
        save_model(model, path)
        assert dump_model(load_model(path)) == text


def test_parse_model_rejects_garbage():
    with pytest.raises(ValueError):
        parse_model("NOPE\n1 1 1 0\n0\n0\n")
    with pytest.raises(ValueError):
        parse_model("MLP1\n1 1 1 0\n0\n")  # one weight short
    with pytest.raises(ValueError):
        parse_model("MLP1\n1 1 1 2\n0\n0\n")  # bad bias flag
    with pytest.raises(ValueError):
        parse_model("MLP1\n1 1 1 0\n0\nnan\n")  # non-finite weight
