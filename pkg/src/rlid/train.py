"""AdamW training loop and binary checkpoint persistence.

The optimizer applies decoupled weight decay to weight matrices only
(anything 2-D); biases and layer-norm parameters are exempt. All
randomness derives from the TrainConfig seed: epoch shuffles use
``seed XOR epoch`` and the dropout stream uses a fixed offset, so runs
are bit-reproducible single-threaded.

Checkpoint layout: 8-byte magic ``RLIDCKPT``, little-endian u32 version
(=1), little-endian u32 header length, UTF-8 JSON header holding the
model config, the vocabulary, and a tensor manifest (name, shape, byte
offset, byte length), then raw little-endian float32 tensor payloads in
manifest order.
"""

from __future__ import annotations

import json
import math
import random
import struct
from dataclasses import dataclass, field

import numpy as np

from . import tokenizer as tok
from .errors import (
    BadMagicError,
    ManifestMismatchError,
    NumericError,
    TruncatedPayloadError,
    UnsupportedVersionError,
    UsageError,
)
from .model import ModelConfig, backward, forward, parameter_shapes

CHECKPOINT_MAGIC = b"RLIDCKPT"
CHECKPOINT_VERSION = 1

# Offset mixed into the seed for the dropout stream so it cannot collide
# with the per-epoch shuffle seeds (seed XOR epoch).
_DROPOUT_SEED_OFFSET = 0x9E3779B9


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 5e-5
    epochs: int = 5
    batch_size: int = 4
    seed: int = 42
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    weight_decay: float = 0.01

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise UsageError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 1 or self.batch_size < 1:
            raise UsageError("epochs and batch_size must be at least 1")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise UsageError("betas must lie in [0, 1)")


@dataclass
class OptimizerState:
    t: int
    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]

    @classmethod
    def zeros_like(cls, params) -> "OptimizerState":
        return cls(
            t=0,
            m={n: np.zeros_like(a) for n, a in params.items()},
            v={n: np.zeros_like(a) for n, a in params.items()},
        )


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    val_accuracy: float


@dataclass
class TrainHistory:
    records: list[EpochRecord] = field(default_factory=list)


def _decays(name: str, array: np.ndarray) -> bool:
    # Weight matrices are the 2-D arrays; biases and norm params are 1-D.
    return array.ndim == 2


def adamw_step(params, grads, state: OptimizerState, config: TrainConfig):
    """One decoupled-weight-decay Adam update; returns new params/state."""
    t = state.t + 1
    bias1 = 1.0 - config.beta1**t
    bias2 = 1.0 - config.beta2**t
    new_params, new_m, new_v = {}, {}, {}
    for name, theta in params.items():
        if name not in grads:
            raise UsageError(f"missing gradient for parameter {name!r}")
        g = grads[name]
        if g.shape != theta.shape:
            raise UsageError(
                f"gradient shape {g.shape} does not match parameter {name!r} {theta.shape}"
            )
        if not np.all(np.isfinite(g)):
            raise NumericError(f"non-finite gradient for parameter {name!r}")
        m = config.beta1 * state.m[name] + (1.0 - config.beta1) * g
        v = config.beta2 * state.v[name] + (1.0 - config.beta2) * g * g
        update = (m / bias1) / (np.sqrt(v / bias2) + config.epsilon)
        if config.weight_decay and _decays(name, theta):
            update = update + config.weight_decay * theta
        new_params[name] = theta - config.learning_rate * update
        new_m[name] = m
        new_v[name] = v
    return new_params, OptimizerState(t=t, m=new_m, v=new_v)


def encode_pairs(pairs, vocab, max_len: int):
    """Encode labeled sentences once for reuse across epochs."""
    sequences = [tok.encode(p.text, vocab, max_len) for p in pairs]
    labels = [p.label.id for p in pairs]
    return sequences, labels


def _accuracy(params, config, sequences, labels, chunk: int = 64) -> float:
    correct = 0
    for start in range(0, len(sequences), chunk):
        batch = sequences[start : start + chunk]
        logits = forward(params, config, batch, mode="infer")
        pred = np.argmax(logits, axis=1)
        correct += int(np.sum(pred == np.asarray(labels[start : start + chunk])))
    return correct / len(sequences)


def train(params, config: ModelConfig, train_config: TrainConfig, dataset, vocab,
          on_epoch=None):
    """Run the full supervised loop; returns (trained params, history)."""
    if not dataset.train:
        raise UsageError("training split is empty")
    if len(vocab) != config.vocab_size:
        raise UsageError(
            f"vocabulary size {len(vocab)} does not match config.vocab_size {config.vocab_size}"
        )
    train_seqs, train_labels = encode_pairs(dataset.train, vocab, config.max_len)
    val_seqs, val_labels = encode_pairs(dataset.validation, vocab, config.max_len)

    state = OptimizerState.zeros_like(params)
    dropout_rng = np.random.default_rng(train_config.seed + _DROPOUT_SEED_OFFSET)
    history = TrainHistory()
    n = len(train_seqs)
    for epoch in range(1, train_config.epochs + 1):
        order = list(range(n))
        random.Random(train_config.seed ^ epoch).shuffle(order)
        loss_sum = 0.0
        for start in range(0, n, train_config.batch_size):
            idx = order[start : start + train_config.batch_size]
            batch = [train_seqs[i] for i in idx]
            labels = [train_labels[i] for i in idx]
            _, cache = forward(params, config, batch, mode="train", rng=dropout_rng)
            loss, grads = backward(params, config, batch, labels, cache)
            if not math.isfinite(loss):
                raise NumericError(f"non-finite training loss at epoch {epoch}")
            loss_sum += loss * len(idx)
            params, state = adamw_step(params, grads, state, train_config)
        val_acc = _accuracy(params, config, val_seqs, val_labels) if val_seqs else 0.0
        record = EpochRecord(
            epoch=epoch, train_loss=loss_sum / n, val_accuracy=val_acc
        )
        history.records.append(record)
        if on_epoch is not None:
            on_epoch(record)
    return params, history


def save_checkpoint(params, config: ModelConfig, vocab, path) -> None:
    shapes = parameter_shapes(config)
    manifest = []
    payload = bytearray()
    for name, shape in shapes.items():
        if name not in params:
            raise UsageError(f"parameters missing declared tensor {name!r}")
        arr = np.ascontiguousarray(params[name], dtype="<f4")
        if arr.shape != shape:
            raise UsageError(f"tensor {name!r} has shape {arr.shape}, declared {shape}")
        data = arr.tobytes()
        manifest.append(
            {"name": name, "shape": list(shape), "offset": len(payload), "length": len(data)}
        )
        payload.extend(data)
    header = json.dumps(
        {
            "config": config.to_dict(),
            "vocab": tok.vocab_to_dict(vocab),
            "manifest": manifest,
        },
        ensure_ascii=False,
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<II", CHECKPOINT_VERSION, len(header)))
        fh.write(header)
        fh.write(payload)


def load_checkpoint(path):
    """Read a checkpoint back as (params, config, vocab)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:8] != CHECKPOINT_MAGIC:
        raise BadMagicError(f"{path}: bad magic {blob[:8]!r}")
    if len(blob) < 16:
        raise TruncatedPayloadError(f"{path}: file too short for header")
    version, header_len = struct.unpack("<II", blob[8:16])
    if version != CHECKPOINT_VERSION:
        raise UnsupportedVersionError(f"{path}: unsupported version {version}")
    if len(blob) < 16 + header_len:
        raise TruncatedPayloadError(f"{path}: truncated header")
    try:
        header = json.loads(blob[16 : 16 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ManifestMismatchError(f"{path}: unreadable header: {exc}") from None
    config = ModelConfig.from_dict(header["config"])
    vocab = tok.vocab_from_dict(header["vocab"], where=str(path))
    payload = blob[16 + header_len :]

    shapes = parameter_shapes(config)
    entries = {entry["name"]: entry for entry in header["manifest"]}
    params = {}
    for name, shape in shapes.items():
        if name not in entries:
            raise ManifestMismatchError(f"{path}: manifest missing tensor {name!r}")
        entry = entries.pop(name)
        declared = tuple(entry["shape"])
        expected_len = int(np.prod(shape)) * 4
        if declared != shape or entry["length"] != expected_len:
            raise ManifestMismatchError(
                f"{path}: tensor {name!r} declares shape {declared} / "
                f"{entry['length']} bytes, expected {shape} / {expected_len}"
            )
        start, end = entry["offset"], entry["offset"] + entry["length"]
        if end > len(payload):
            raise TruncatedPayloadError(f"{path}: payload truncated at tensor {name!r}")
        params[name] = np.frombuffer(payload[start:end], dtype="<f4").reshape(shape).copy()
    if entries:
        extra = next(iter(entries))
        raise ManifestMismatchError(f"{path}: manifest has unknown tensor {extra!r}")
    return params, config, vocab
