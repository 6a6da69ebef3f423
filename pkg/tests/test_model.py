import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlid.errors import UsageError
from rlid.model import (
    ModelConfig,
    backward,
    cross_entropy,
    forward,
    init_parameters,
    parameter_shapes,
    softmax,
)
from rlid.tokenizer import CLS_ID, PAD_ID, SEP_ID, TokenSequence

TINY = ModelConfig(vocab_size=12, hidden_dim=8, n_layers=1, n_heads=2,
                   ff_dim=16, max_len=8, n_classes=3, dropout_rate=0.0)


def make_seq(body_ids, max_len):
    ids = [CLS_ID] + list(body_ids) + [SEP_ID]
    true_length = len(ids)
    ids += [PAD_ID] * (max_len - true_length)
    mask = [1] * true_length + [0] * (max_len - true_length)
    return TokenSequence(ids=tuple(ids), mask=tuple(mask), true_length=true_length)


def random_batch(config, rng, batch_size, lengths=None):
    out = []
    for i in range(batch_size):
        n_body = lengths[i] if lengths else int(rng.integers(0, config.max_len - 2))
        body = rng.integers(4, config.vocab_size, size=n_body).tolist()
        out.append(make_seq(body, config.max_len))
    return out


class TestConfig:
    def test_heads_must_divide_hidden(self):
        with pytest.raises(UsageError):
            ModelConfig(vocab_size=10, hidden_dim=10, n_heads=3)

    def test_round_trip_dict(self):
        assert ModelConfig.from_dict(TINY.to_dict()) == TINY


class TestInit:
    def test_same_seed_bit_identical(self):
        a = init_parameters(TINY, seed=5)
        b = init_parameters(TINY, seed=5)
        assert all(np.array_equal(a[n], b[n]) for n in a)

    def test_norm_scales_are_ones(self):
        params = init_parameters(TINY, seed=5)
        assert np.all(params["block0.norm1.scale"] == 1.0)
        assert np.all(params["block0.norm2.shift"] == 0.0)
        assert np.all(params["head.bias"] == 0.0)

    def test_weight_statistics(self):
        config = ModelConfig(vocab_size=200, hidden_dim=64, n_layers=1, n_heads=2,
                             ff_dim=64, max_len=16, n_classes=3)
        params = init_parameters(config, seed=123)
        weights = params["embed.token"].ravel()
        assert weights.size >= 10000
        assert abs(float(weights.mean())) < 0.001
        assert float(np.abs(weights).max()) <= 2 * 0.02 + 1e-9

    def test_shapes_match_declaration(self):
        params = init_parameters(TINY, seed=0)
        shapes = parameter_shapes(TINY)
        assert set(params) == set(shapes)
        assert all(params[n].shape == shapes[n] for n in shapes)


class TestSoftmax:
    def test_uniform(self):
        np.testing.assert_allclose(softmax(np.zeros(3)), np.full(3, 1 / 3), atol=1e-9)

    def test_extreme_values_stable(self):
        probs = softmax(np.array([1000.0, 0.0, -1000.0]))
        assert np.all(np.isfinite(probs))
        assert probs[0] == pytest.approx(1.0, abs=1e-9)

    @given(st.lists(st.floats(-50, 50), min_size=2, max_size=8), st.floats(-30, 30))
    @settings(max_examples=200)
    def test_shift_invariance(self, row, shift):
        x = np.array(row)
        np.testing.assert_allclose(softmax(x + shift), softmax(x), atol=1e-7)

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(0)
        probs = softmax(rng.normal(size=(5, 7)))
        np.testing.assert_allclose(probs.sum(axis=1), np.ones(5), atol=1e-6)


class TestCrossEntropy:
    def test_uniform_logits_three_classes(self):
        logits = np.zeros((2, 3))
        assert cross_entropy(logits, [0, 2]) == pytest.approx(math.log(3), abs=1e-9)

    def test_saturated_true_class(self):
        logits = np.array([[30.0, 0.0, 0.0]])
        assert cross_entropy(logits, [0]) < 1e-9

    def test_matches_scalar_recomputation(self):
        rng = np.random.default_rng(7)
        logits = rng.normal(size=(4, 3))
        labels = [2, 0, 1, 1]
        expected = 0.0
        for row, label in zip(logits, labels):
            denom = sum(math.exp(v) for v in row)
            expected += -math.log(math.exp(row[label]) / denom)
        expected /= 4
        assert cross_entropy(logits, labels) == pytest.approx(expected, abs=1e-6)

    def test_label_out_of_range(self):
        with pytest.raises(UsageError):
            cross_entropy(np.zeros((1, 3)), [3])


class TestForward:
    def test_logit_shape_and_finite(self):
        rng = np.random.default_rng(1)
        params = init_parameters(TINY, seed=1)
        logits = forward(params, TINY, random_batch(TINY, rng, 4))
        assert logits.shape == (4, 3)
        assert np.all(np.isfinite(logits))

    def test_infer_deterministic(self):
        rng = np.random.default_rng(2)
        params = init_parameters(TINY, seed=2)
        batch = random_batch(TINY, rng, 3)
        a = forward(params, TINY, batch)
        b = forward(params, TINY, batch)
        assert np.array_equal(a, b)

    def test_pad_invariance(self):
        # same content padded to different lengths gives identical logits
        config = ModelConfig(vocab_size=12, hidden_dim=8, n_layers=2, n_heads=2,
                             ff_dim=16, max_len=32, n_classes=3, dropout_rate=0.0)
        params = init_parameters(config, seed=3)
        body = [4, 7, 9, 5]
        short = forward(params, config, [make_seq(body, 8)])
        long = forward(params, config, [make_seq(body, 32)])
        np.testing.assert_allclose(short, long, atol=1e-5)

    def test_attention_rows_sum_to_one_over_unmasked(self):
        rng = np.random.default_rng(4)
        params = init_parameters(TINY, seed=4)
        batch = random_batch(TINY, rng, 2, lengths=[3, 1])
        _, cache = forward(params, TINY, batch, mode="train")
        attn = cache["layers"][0]["attn"]  # [B, heads, L, L]
        np.testing.assert_allclose(attn.sum(axis=-1), np.ones(attn.shape[:-1]), atol=1e-6)
        mask = np.array([s.mask for s in batch])
        # no attention mass on padded keys
        assert float(attn[:, :, :, :][..., mask[0] == 0][0].max()) < 1e-12

    def test_train_mode_with_dropout_needs_rng(self):
        config = ModelConfig(vocab_size=12, hidden_dim=8, n_layers=1, n_heads=2,
                             ff_dim=16, max_len=8, n_classes=3, dropout_rate=0.5)
        params = init_parameters(config, seed=0)
        batch = random_batch(config, np.random.default_rng(0), 2)
        with pytest.raises(UsageError):
            forward(params, config, batch, mode="train")

    def test_sequence_longer_than_max_len_rejected(self):
        params = init_parameters(TINY, seed=0)
        seq = make_seq([4] * 10, 12)
        with pytest.raises(UsageError):
            forward(params, TINY, [seq])

    def test_id_out_of_range_rejected(self):
        params = init_parameters(TINY, seed=0)
        seq = make_seq([11, 12], TINY.max_len)
        with pytest.raises(UsageError):
            forward(params, TINY, [seq])


class TestBackward:
    def test_closed_form_classifier_bias_gradient(self):
        # single example: dCE/d(bias_c) = softmax_c - onehot_c
        params = init_parameters(TINY, seed=6)
        batch = random_batch(TINY, np.random.default_rng(6), 1)
        logits, cache = forward(params, TINY, batch, mode="train")
        probs = softmax(logits[0])
        _, grads = backward(params, TINY, batch, [1], cache)
        expected = probs.copy()
        expected[1] -= 1.0
        np.testing.assert_allclose(grads["head.bias"], expected, atol=1e-6)
        # untouched class rows equal the raw softmax probability
        assert grads["head.bias"][0] == pytest.approx(probs[0], abs=1e-6)
        assert grads["head.bias"][2] == pytest.approx(probs[2], abs=1e-6)

    def test_duplicated_example_equals_single(self):
        params = init_parameters(TINY, seed=7)
        seq = random_batch(TINY, np.random.default_rng(7), 1)[0]
        _, cache1 = forward(params, TINY, [seq], mode="train")
        loss1, grads1 = backward(params, TINY, [seq], [2], cache1)
        _, cache2 = forward(params, TINY, [seq, seq], mode="train")
        loss2, grads2 = backward(params, TINY, [seq, seq], [2, 2], cache2)
        assert loss1 == pytest.approx(loss2, abs=1e-7)
        for name in grads1:
            np.testing.assert_allclose(grads1[name], grads2[name], atol=1e-6)

    def test_gradient_shapes_congruent(self):
        params = init_parameters(TINY, seed=8)
        batch = random_batch(TINY, np.random.default_rng(8), 2)
        _, cache = forward(params, TINY, batch, mode="train")
        _, grads = backward(params, TINY, batch, [0, 1], cache)
        assert set(grads) == set(params)
        for name in params:
            assert grads[name].shape == params[name].shape
            assert np.all(np.isfinite(grads[name]))

    def test_backward_requires_cache(self):
        params = init_parameters(TINY, seed=9)
        batch = random_batch(TINY, np.random.default_rng(9), 2)
        with pytest.raises(UsageError):
            backward(params, TINY, batch, [0, 1], None)

    def test_cache_batch_mismatch_rejected(self):
        params = init_parameters(TINY, seed=9)
        batch = random_batch(TINY, np.random.default_rng(9), 2)
        _, cache = forward(params, TINY, batch, mode="train")
        with pytest.raises(UsageError):
            backward(params, TINY, batch, [0, 1, 2], cache)

    def test_dropout_masks_reused_from_forward(self):
        config = ModelConfig(vocab_size=12, hidden_dim=8, n_layers=1, n_heads=2,
                             ff_dim=16, max_len=8, n_classes=3, dropout_rate=0.3)
        params = init_parameters(config, seed=10, dtype=np.float64)
        batch = random_batch(config, np.random.default_rng(10), 2)
        rng = np.random.default_rng(77)
        logits, cache = forward(params, config, batch, mode="train", rng=rng)
        loss, grads = backward(params, config, batch, [0, 1], cache)
        # finite-difference check against the SAME dropout masks: perturb a
        # parameter and re-run the forward computation manually via cache masks
        # is impractical; instead verify determinism: same rng seed gives the
        # same loss and gradients.
        rng2 = np.random.default_rng(77)
        logits2, cache2 = forward(params, config, batch, mode="train", rng=rng2)
        loss2, grads2 = backward(params, config, batch, [0, 1], cache2)
        assert np.array_equal(logits, logits2)
        assert loss == loss2
        assert all(np.array_equal(grads[n], grads2[n]) for n in grads)


class TestShapeCongruenceProperty:
    @given(
        hidden=st.sampled_from([4, 8, 12]),
        heads=st.sampled_from([1, 2]),
        layers=st.integers(1, 2),
        ff=st.sampled_from([6, 10]),
        classes=st.integers(2, 4),
    )
    @settings(max_examples=25, deadline=None)
    def test_random_configs(self, hidden, heads, layers, ff, classes):
        if hidden % heads:
            hidden += heads - hidden % heads
        config = ModelConfig(vocab_size=9, hidden_dim=hidden, n_layers=layers,
                             n_heads=heads, ff_dim=ff, max_len=6,
                             n_classes=classes, dropout_rate=0.0)
        params = init_parameters(config, seed=1)
        batch = random_batch(config, np.random.default_rng(1), 2)
        _, cache = forward(params, config, batch, mode="train")
        _, grads = backward(params, config, batch, [0, 1], cache)
        for name, shape in parameter_shapes(config).items():
            assert params[name].shape == shape
            assert grads[name].shape == shape
