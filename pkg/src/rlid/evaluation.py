"""Inference, classification metrics, and an independent n-gram baseline.

The confusion matrix is indexed [true, predicted]. Per-class precision,
recall and F1 report undefined divisions (0/0) as 0.0 together with a
flag naming which statistics were undefined, so the report schema is
stable even for degenerate data.

The character n-gram Naive Bayes model is deliberately simple (add-one
smoothing, pooled 1..3-grams) so it can serve as an auditable
cross-check on the transformer pipeline.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .corpus import LanguageLabel
from .errors import DataError, UsageError
from .model import forward, softmax
from .tokenizer import encode, normalize


@dataclass(frozen=True)
class Prediction:
    label: LanguageLabel
    probabilities: tuple[float, ...]


@dataclass(frozen=True)
class ClassMetrics:
    label: str
    precision: float
    recall: float
    f1: float
    undefined: tuple[str, ...] = ()


@dataclass(frozen=True)
class Metrics:
    confusion: np.ndarray
    accuracy: float
    per_class: tuple[ClassMetrics, ...]

    @property
    def total(self) -> int:
        return int(self.confusion.sum())


def _argmax_lowest(probs) -> int:
    # np.argmax already returns the first (lowest-id) maximum.
    return int(np.argmax(probs))


def default_label_names(n: int, labels=None) -> list[str]:
    names = [f"class{i}" for i in range(n)]
    for label in labels or ():
        if 0 <= label.id < n:
            names[label.id] = label.name
    return names


def predict(params, config, vocab, text: str, labels=None) -> Prediction:
    """Encode, run the encoder in infer mode, argmax over class softmax."""
    seq = encode(text, vocab, config.max_len)
    logits = forward(params, config, [seq], mode="infer")[0]
    probs = softmax(logits)
    idx = _argmax_lowest(probs)
    names = default_label_names(config.n_classes, labels)
    return Prediction(
        label=LanguageLabel(id=idx, name=names[idx]),
        probabilities=tuple(float(p) for p in probs),
    )


def _batched_predictions(params, config, vocab, texts, chunk: int = 64):
    preds = []
    for start in range(0, len(texts), chunk):
        batch = [encode(t, vocab, config.max_len) for t in texts[start : start + chunk]]
        logits = forward(params, config, batch, mode="infer")
        preds.extend(int(np.argmax(row)) for row in logits)
    return preds


def compute_metrics(confusion: np.ndarray, label_names=None) -> Metrics:
    """Derive accuracy and per-class statistics from a confusion matrix."""
    confusion = np.asarray(confusion, dtype=np.int64)
    if confusion.ndim != 2 or confusion.shape[0] != confusion.shape[1]:
        raise UsageError(f"confusion matrix must be square, got {confusion.shape}")
    if (confusion < 0).any():
        raise UsageError("confusion matrix entries must be non-negative")
    total = int(confusion.sum())
    if total == 0:
        raise DataError("cannot compute metrics over zero examples")
    names = label_names or [f"class{i}" for i in range(confusion.shape[0])]
    accuracy = float(np.trace(confusion)) / total
    per_class = []
    for c in range(confusion.shape[0]):
        tp = int(confusion[c, c])
        col = int(confusion[:, c].sum())
        row = int(confusion[c, :].sum())
        undefined = []
        if col == 0:
            precision, undefined = 0.0, undefined + ["precision"]
        else:
            precision = tp / col
        if row == 0:
            recall, undefined = 0.0, undefined + ["recall"]
        else:
            recall = tp / row
        if precision + recall == 0.0:
            f1 = 0.0
            if col == 0 and row == 0:
                undefined.append("f1")
        else:
            f1 = 2 * precision * recall / (precision + recall)
        per_class.append(
            ClassMetrics(
                label=names[c], precision=precision, recall=recall, f1=f1,
                undefined=tuple(undefined),
            )
        )
    return Metrics(confusion=confusion, accuracy=accuracy, per_class=tuple(per_class))


def evaluate(params, config, vocab, data, labels=None) -> Metrics:
    """One prediction per example; order of the data does not matter."""
    if not data:
        raise DataError("cannot evaluate an empty dataset")
    n = config.n_classes
    for pair in data:
        if pair.label.id >= n:
            raise DataError(
                f"label {pair.label.name!r} (id {pair.label.id}) outside model classes"
            )
    if labels is None:
        labels = sorted({p.label for p in data}, key=lambda l: l.id)
    predicted = _batched_predictions(params, config, vocab, [p.text for p in data])
    confusion = np.zeros((n, n), dtype=np.int64)
    for pair, pred in zip(data, predicted):
        confusion[pair.label.id, pred] += 1
    return compute_metrics(confusion, default_label_names(n, labels))


# ---------------------------------------------------------------------------
# Character n-gram Naive Bayes baseline
# ---------------------------------------------------------------------------


@dataclass
class NgramModel:
    n_range: tuple[int, int]
    labels: list[LanguageLabel]
    log_prior: dict[int, float]
    log_likelihood: list[dict[str, float]]  # per class id
    log_floor: list[float]  # smoothed unseen-gram cost per class
    vocabulary: set[str] = field(repr=False, default_factory=set)


def _ngrams(text: str, n_range) -> Counter:
    text = normalize(text)
    grams: Counter[str] = Counter()
    lo, hi = n_range
    for n in range(lo, hi + 1):
        for i in range(len(text) - n + 1):
            grams[text[i : i + n]] += 1
    return grams


def ngram_train(data, n_range=(1, 3)) -> NgramModel:
    """Multinomial Naive Bayes over pooled character n-grams, add-one."""
    if not data:
        raise DataError("cannot train the baseline on an empty dataset")
    labels = sorted({p.label for p in data}, key=lambda l: l.id)
    class_counts: dict[int, Counter] = {l.id: Counter() for l in labels}
    class_examples: Counter[int] = Counter()
    for pair in data:
        class_counts[pair.label.id].update(_ngrams(pair.text, n_range))
        class_examples[pair.label.id] += 1
    for label in labels:
        if class_examples[label.id] == 0:
            raise DataError(f"class {label.name!r} has no training examples")
    vocabulary = set()
    for counts in class_counts.values():
        vocabulary.update(counts)
    v = len(vocabulary)
    total_examples = sum(class_examples.values())
    log_prior = {
        l.id: math.log(class_examples[l.id] / total_examples) for l in labels
    }
    log_likelihood: list[dict[str, float]] = []
    log_floor: list[float] = []
    for label in labels:
        counts = class_counts[label.id]
        denom = sum(counts.values()) + v + 1
        log_likelihood.append(
            {g: math.log((c + 1) / denom) for g, c in counts.items()}
        )
        log_floor.append(math.log(1.0 / denom))
    return NgramModel(
        n_range=tuple(n_range),
        labels=labels,
        log_prior=log_prior,
        log_likelihood=log_likelihood,
        log_floor=log_floor,
        vocabulary=vocabulary,
    )


def ngram_predict(model: NgramModel, text: str) -> Prediction:
    """argmax of log-prior plus summed n-gram log-likelihoods."""
    grams = _ngrams(text, model.n_range)
    scores = []
    for slot, label in enumerate(model.labels):
        table = model.log_likelihood[slot]
        floor = model.log_floor[slot]
        score = model.log_prior[label.id]
        for gram, count in grams.items():
            score += count * table.get(gram, floor)
        scores.append(score)
    scores = np.asarray(scores)
    probs = np.exp(scores - scores.max())
    probs = probs / probs.sum()
    idx = _argmax_lowest(probs)
    return Prediction(
        label=model.labels[idx], probabilities=tuple(float(p) for p in probs)
    )


# ---------------------------------------------------------------------------
# Report formatting
# ---------------------------------------------------------------------------


def metrics_to_dict(metrics: Metrics) -> dict:
    return {
        "total": metrics.total,
        "accuracy": metrics.accuracy,
        "confusion": metrics.confusion.tolist(),
        "per_class": [
            {
                "label": c.label,
                "precision": c.precision,
                "recall": c.recall,
                "f1": c.f1,
                "undefined": list(c.undefined),
            }
            for c in metrics.per_class
        ],
    }


def format_metrics(metrics: Metrics) -> str:
    """Aligned plain-text confusion matrix plus per-class statistics."""
    names = [c.label for c in metrics.per_class]
    width = max([len(n) for n in names] + [8])
    num_w = max(len(str(int(metrics.confusion.max()))), 5)
    lines = []
    header = " " * (width + 2) + " ".join(f"{n[:num_w]:>{num_w}}" for n in names)
    lines.append("confusion matrix (rows = true, columns = predicted)")
    lines.append(header)
    for i, name in enumerate(names):
        row = " ".join(f"{int(v):>{num_w}}" for v in metrics.confusion[i])
        lines.append(f"{name:>{width}}  {row}")
    lines.append("")
    lines.append(f"{'class':>{width}}  {'prec':>6} {'recall':>6} {'f1':>6}")
    for c in metrics.per_class:
        flag = f"  (undefined: {', '.join(c.undefined)})" if c.undefined else ""
        lines.append(
            f"{c.label:>{width}}  {c.precision:6.4f} {c.recall:6.4f} {c.f1:6.4f}{flag}"
        )
    lines.append("")
    lines.append(f"accuracy {metrics.accuracy:.4f} over {metrics.total} examples")
    return "\n".join(lines)
