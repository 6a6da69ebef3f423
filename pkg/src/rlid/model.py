"""BERT-style transformer encoder with a classification head, in numpy.

Forward pass, cached activations, and exact gradients for every
parameter are implemented by hand; numpy supplies only array arithmetic.
Parameters live in a flat name -> array dict whose shapes are declared
by ``parameter_shapes`` so the optimizer and checkpoint code can stay
generic.

Block layout (post-norm): masked multi-head self-attention, residual
add, layer norm, feed-forward with tanh-approximated GELU, residual add,
layer norm. Classification logits come from the CLS position of the
final layer. Dropout (train mode only) is applied to each sublayer
output before its residual add, with masks cached for backward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError

LAYER_NORM_EPS = 1e-12
INIT_STD = 0.02

# tanh-approximation constants for GELU
_GELU_C = math.sqrt(2.0 / math.pi)
_GELU_A = 0.044715


@dataclass(frozen=True)
class ModelConfig:
    vocab_size: int
    hidden_dim: int = 128
    n_layers: int = 2
    n_heads: int = 2
    ff_dim: int = 256
    max_len: int = 64
    n_classes: int = 3
    dropout_rate: float = 0.1

    def __post_init__(self):
        if self.vocab_size < 5:
            raise UsageError(f"vocab_size must be at least 5, got {self.vocab_size}")
        if self.hidden_dim % self.n_heads != 0:
            raise UsageError(
                f"hidden_dim {self.hidden_dim} not divisible by n_heads {self.n_heads}"
            )
        if self.n_classes < 2:
            raise UsageError(f"n_classes must be at least 2, got {self.n_classes}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise UsageError(f"dropout_rate must be in [0,1), got {self.dropout_rate}")

    @property
    def head_dim(self) -> int:
        return self.hidden_dim // self.n_heads

    def to_dict(self) -> dict:
        return {
            "vocab_size": self.vocab_size,
            "hidden_dim": self.hidden_dim,
            "n_layers": self.n_layers,
            "n_heads": self.n_heads,
            "ff_dim": self.ff_dim,
            "max_len": self.max_len,
            "n_classes": self.n_classes,
            "dropout_rate": self.dropout_rate,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelConfig":
        return cls(**doc)


def parameter_shapes(config: ModelConfig) -> dict[str, tuple[int, ...]]:
    """Declared name -> shape map; iteration order is the manifest order."""
    h, f = config.hidden_dim, config.ff_dim
    shapes: dict[str, tuple[int, ...]] = {
        "embed.token": (config.vocab_size, h),
        "embed.position": (config.max_len, h),
    }
    for i in range(config.n_layers):
        p = f"block{i}"
        for proj in ("wq", "wk", "wv", "wo"):
            shapes[f"{p}.attn.{proj}"] = (h, h)
        for bias in ("bq", "bk", "bv", "bo"):
            shapes[f"{p}.attn.{bias}"] = (h,)
        shapes[f"{p}.norm1.scale"] = (h,)
        shapes[f"{p}.norm1.shift"] = (h,)
        shapes[f"{p}.ff.w1"] = (h, f)
        shapes[f"{p}.ff.b1"] = (f,)
        shapes[f"{p}.ff.w2"] = (f, h)
        shapes[f"{p}.ff.b2"] = (h,)
        shapes[f"{p}.norm2.scale"] = (h,)
        shapes[f"{p}.norm2.shift"] = (h,)
    shapes["head.weight"] = (h, config.n_classes)
    shapes["head.bias"] = (config.n_classes,)
    return shapes


def _truncated_normal(rng: np.random.Generator, shape, std: float) -> np.ndarray:
    """normal(0, std) with draws beyond 2 std resampled."""
    out = rng.normal(0.0, std, size=shape)
    bad = np.abs(out) > 2.0 * std
    while bad.any():
        out[bad] = rng.normal(0.0, std, size=int(bad.sum()))
        bad = np.abs(out) > 2.0 * std
    return out


def init_parameters(config: ModelConfig, seed: int, dtype=np.float32) -> dict[str, np.ndarray]:
    """Seeded init: truncated-normal weights, zero biases, unit norm scales."""
    rng = np.random.default_rng(seed)
    params: dict[str, np.ndarray] = {}
    for name, shape in parameter_shapes(config).items():
        if len(shape) == 2:
            params[name] = _truncated_normal(rng, shape, INIT_STD).astype(dtype)
        elif name.endswith(".scale"):
            params[name] = np.ones(shape, dtype=dtype)
        else:
            params[name] = np.zeros(shape, dtype=dtype)
    return params


def softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Stable softmax via max subtraction."""
    x = np.asarray(x)
    shifted = x - np.max(x, axis=axis, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=axis, keepdims=True)


def log_softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    shifted = x - np.max(x, axis=axis, keepdims=True)
    return shifted - np.log(np.sum(np.exp(shifted), axis=axis, keepdims=True))


def cross_entropy(logits: np.ndarray, labels) -> float:
    """Mean negative log-likelihood of the true classes."""
    logits = np.asarray(logits)
    labels = np.asarray(labels)
    if labels.min() < 0 or labels.max() >= logits.shape[-1]:
        raise UsageError("label out of range for logits")
    logp = log_softmax(logits, axis=-1)
    return float(-np.mean(logp[np.arange(len(labels)), labels]))


def _gelu(x: np.ndarray) -> np.ndarray:
    inner = _GELU_C * (x + _GELU_A * x**3)
    return 0.5 * x * (1.0 + np.tanh(inner))


def _gelu_grad(x: np.ndarray) -> np.ndarray:
    inner = _GELU_C * (x + _GELU_A * x**3)
    t = np.tanh(inner)
    return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t**2) * _GELU_C * (1.0 + 3.0 * _GELU_A * x**2)


def _layer_norm(x: np.ndarray, scale: np.ndarray, shift: np.ndarray):
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + LAYER_NORM_EPS)
    xhat = (x - mean) * inv_std
    return xhat * scale + shift, xhat, inv_std


def _layer_norm_backward(dy, xhat, inv_std, scale):
    dscale = np.sum(dy * xhat, axis=(0, 1))
    dshift = np.sum(dy, axis=(0, 1))
    dxhat = dy * scale
    dx = inv_std * (
        dxhat
        - dxhat.mean(axis=-1, keepdims=True)
        - xhat * (dxhat * xhat).mean(axis=-1, keepdims=True)
    )
    return dx, dscale, dshift


def _split_heads(x: np.ndarray, n_heads: int) -> np.ndarray:
    b, l, h = x.shape
    return x.reshape(b, l, n_heads, h // n_heads).transpose(0, 2, 1, 3)


def _merge_heads(x: np.ndarray) -> np.ndarray:
    b, nh, l, dh = x.shape
    return x.transpose(0, 2, 1, 3).reshape(b, l, nh * dh)


def batch_arrays(batch) -> tuple[np.ndarray, np.ndarray]:
    """Stack TokenSequences into (ids, mask) arrays of uniform length."""
    ids = np.array([seq.ids for seq in batch], dtype=np.int64)
    mask = np.array([seq.mask for seq in batch], dtype=np.int64)
    return ids, mask


def forward(params, config: ModelConfig, batch, mode: str = "infer", rng=None):
    """Run the encoder; in train mode also return cached activations.

    Sequences may be shorter than config.max_len (uniform within the
    batch); padded key positions are excluded from attention by masking
    their scores to -inf before the softmax, so logits depend only on
    real content.
    """
    if mode not in ("infer", "train"):
        raise UsageError(f"unknown mode {mode!r}")
    ids, int_mask = batch_arrays(batch)
    b, l = ids.shape
    if l > config.max_len:
        raise UsageError(f"sequence length {l} exceeds max_len {config.max_len}")
    if ids.max() >= config.vocab_size:
        raise UsageError(f"token id {ids.max()} out of range for vocab_size")
    dtype = params["embed.token"].dtype
    train = mode == "train"
    dropout = config.dropout_rate if train else 0.0
    if dropout > 0.0 and rng is None:
        raise UsageError("train-mode forward with dropout needs a seeded rng")

    def drop_mask(shape):
        if dropout == 0.0:
            return None
        keep = (rng.random(shape) >= dropout).astype(dtype)
        return keep / dtype.type(1.0 - dropout)

    x = params["embed.token"][ids] + params["embed.position"][:l]
    key_mask = int_mask[:, None, None, :] > 0  # [B,1,1,L] broadcast over heads/queries
    scale = 1.0 / math.sqrt(config.head_dim)
    neg_inf = np.array(-np.inf, dtype=dtype)

    cache = {"ids": ids, "mask": int_mask, "layers": [], "seq_len": l}
    for i in range(config.n_layers):
        p = f"block{i}"
        layer: dict = {"x_in": x}
        q = _split_heads(x @ params[f"{p}.attn.wq"] + params[f"{p}.attn.bq"], config.n_heads)
        k = _split_heads(x @ params[f"{p}.attn.wk"] + params[f"{p}.attn.bk"], config.n_heads)
        v = _split_heads(x @ params[f"{p}.attn.wv"] + params[f"{p}.attn.bv"], config.n_heads)
        scores = np.where(key_mask, (q @ k.transpose(0, 1, 3, 2)) * scale, neg_inf)
        attn = softmax(scores, axis=-1)
        ctx = _merge_heads(attn @ v)
        out = ctx @ params[f"{p}.attn.wo"] + params[f"{p}.attn.bo"]
        out_drop = drop_mask(out.shape)
        if out_drop is not None:
            out = out * out_drop
        x1, ln1_xhat, ln1_inv = _layer_norm(
            x + out, params[f"{p}.norm1.scale"], params[f"{p}.norm1.shift"]
        )
        ff_pre = x1 @ params[f"{p}.ff.w1"] + params[f"{p}.ff.b1"]
        ff_act = _gelu(ff_pre)
        ff_out = ff_act @ params[f"{p}.ff.w2"] + params[f"{p}.ff.b2"]
        ff_drop = drop_mask(ff_out.shape)
        if ff_drop is not None:
            ff_out = ff_out * ff_drop
        x2, ln2_xhat, ln2_inv = _layer_norm(
            x1 + ff_out, params[f"{p}.norm2.scale"], params[f"{p}.norm2.shift"]
        )
        layer.update(
            q=q, k=k, v=v, attn=attn, ctx=ctx, out_drop=out_drop,
            ln1_xhat=ln1_xhat, ln1_inv=ln1_inv, x1=x1,
            ff_pre=ff_pre, ff_act=ff_act, ff_drop=ff_drop,
            ln2_xhat=ln2_xhat, ln2_inv=ln2_inv,
        )
        cache["layers"].append(layer)
        x = x2

    cls = x[:, 0, :]
    logits = cls @ params["head.weight"] + params["head.bias"]
    if not train:
        return logits
    cache["cls"] = cls
    cache["logits"] = logits
    return logits, cache


def backward(params, config: ModelConfig, batch, labels, cache):
    """Exact gradients of the mean cross-entropy for every parameter."""
    if cache is None or "logits" not in cache:
        raise UsageError("backward needs the activation cache from a train-mode forward")
    ids = cache["ids"]
    if ids.shape[0] != len(labels) or len(cache["layers"]) != config.n_layers:
        raise UsageError("activation cache does not match this batch/config")
    labels = np.asarray(labels)
    logits = cache["logits"]
    b = logits.shape[0]
    l = cache["seq_len"]
    dtype = params["embed.token"].dtype

    loss = cross_entropy(logits, labels)
    probs = softmax(logits, axis=-1)
    dlogits = probs.copy()
    dlogits[np.arange(b), labels] -= 1.0
    dlogits = (dlogits / b).astype(dtype)

    grads = {name: np.zeros_like(arr) for name, arr in params.items()}
    grads["head.weight"] = cache["cls"].T @ dlogits
    grads["head.bias"] = dlogits.sum(axis=0)
    dx = np.zeros((b, l, config.hidden_dim), dtype=dtype)
    dx[:, 0, :] = dlogits @ params["head.weight"].T

    scale = 1.0 / math.sqrt(config.head_dim)
    for i in reversed(range(config.n_layers)):
        p = f"block{i}"
        layer = cache["layers"][i]
        x_in, x1 = layer["x_in"], layer["x1"]

        # second layer norm
        dr2, grads[f"{p}.norm2.scale"], grads[f"{p}.norm2.shift"] = _layer_norm_backward(
            dx, layer["ln2_xhat"], layer["ln2_inv"], params[f"{p}.norm2.scale"]
        )
        dff_out = dr2 if layer["ff_drop"] is None else dr2 * layer["ff_drop"]

        # feed-forward
        ff_act2 = layer["ff_act"].reshape(-1, config.ff_dim)
        dff2 = dff_out.reshape(-1, config.hidden_dim)
        grads[f"{p}.ff.w2"] = ff_act2.T @ dff2
        grads[f"{p}.ff.b2"] = dff2.sum(axis=0)
        dff_act = dff_out @ params[f"{p}.ff.w2"].T
        dff_pre = dff_act * _gelu_grad(layer["ff_pre"])
        x1_2 = x1.reshape(-1, config.hidden_dim)
        dpre2 = dff_pre.reshape(-1, config.ff_dim)
        grads[f"{p}.ff.w1"] = x1_2.T @ dpre2
        grads[f"{p}.ff.b1"] = dpre2.sum(axis=0)
        dx1 = dr2 + dff_pre @ params[f"{p}.ff.w1"].T

        # first layer norm
        dr1, grads[f"{p}.norm1.scale"], grads[f"{p}.norm1.shift"] = _layer_norm_backward(
            dx1, layer["ln1_xhat"], layer["ln1_inv"], params[f"{p}.norm1.scale"]
        )
        dattn_out = dr1 if layer["out_drop"] is None else dr1 * layer["out_drop"]

        # attention output projection
        ctx2 = layer["ctx"].reshape(-1, config.hidden_dim)
        dout2 = dattn_out.reshape(-1, config.hidden_dim)
        grads[f"{p}.attn.wo"] = ctx2.T @ dout2
        grads[f"{p}.attn.bo"] = dout2.sum(axis=0)
        dctx = _split_heads(dattn_out @ params[f"{p}.attn.wo"].T, config.n_heads)

        # attention weights; masked entries have attn == 0, so their
        # score gradient vanishes without special-casing the -inf mask
        attn, q, k, v = layer["attn"], layer["q"], layer["k"], layer["v"]
        dattn = dctx @ v.transpose(0, 1, 3, 2)
        dv = attn.transpose(0, 1, 3, 2) @ dctx
        dscores = attn * (dattn - np.sum(dattn * attn, axis=-1, keepdims=True))
        dq = (dscores @ k) * scale
        dk = (dscores.transpose(0, 1, 3, 2) @ q) * scale

        x_in2 = x_in.reshape(-1, config.hidden_dim)
        dr1_total = dr1
        for name, dhead in (("q", dq), ("k", dk), ("v", dv)):
            dflat = _merge_heads(dhead)
            d2 = dflat.reshape(-1, config.hidden_dim)
            grads[f"{p}.attn.w{name}"] = x_in2.T @ d2
            grads[f"{p}.attn.b{name}"] = d2.sum(axis=0)
            dr1_total = dr1_total + dflat @ params[f"{p}.attn.w{name}"].T
        dx = dr1_total

    grads["embed.position"][:l] = dx.sum(axis=0)
    np.add.at(grads["embed.token"], ids.reshape(-1), dx.reshape(-1, config.hidden_dim))
    return loss, grads
