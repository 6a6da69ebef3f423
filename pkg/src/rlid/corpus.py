"""Source-corpus ingestion and labeled-dataset generation.

The pipeline: load an English corpus, filter it, then for every surviving
sentence and every language label emit one labeled record. English keeps
the (normalized) source text; every other label goes through a
translation provider and a transliteration table. Records are ordered by
source index then label id, so generation is deterministic.

Dataset files are UTF-8 TSV, one ``text<TAB>label-name`` record per line,
LF endings, no header.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import DataError, ProviderError, UsageError
from .tokenizer import normalize
from .translit import TransliterationTable, transliterate, validate_latin


@dataclass(frozen=True)
class RawSentence:
    text: str
    source_index: int


@dataclass(frozen=True)
class LanguageLabel:
    id: int
    name: str


@dataclass(frozen=True)
class LabeledSentence:
    text: str
    label: LanguageLabel


@dataclass(frozen=True)
class DatasetSplit:
    train: list[LabeledSentence]
    validation: list[LabeledSentence]
    seed: int
    ratio: float


@dataclass(frozen=True)
class FilterRules:
    min_chars: int = 3
    max_chars: int = 200
    charset: str = "romanized"  # "romanized" restricts to the dataset alphabet
    dedup: bool = True

    def __post_init__(self):
        if self.min_chars < 1 or self.min_chars > self.max_chars:
            raise UsageError(
                f"need 1 <= min_chars <= max_chars, got {self.min_chars}..{self.max_chars}"
            )
        if self.charset not in ("romanized", "any"):
            raise UsageError(f"unknown charset {self.charset!r}")


DEFAULT_LABELS = ("english", "hindi", "russian")


def make_labels(names) -> list[LanguageLabel]:
    """Contiguous ids in listed order; names must be unique lowercase."""
    labels = []
    seen = set()
    for i, name in enumerate(names):
        if name != name.lower() or not name:
            raise UsageError(f"label names must be non-empty lowercase, got {name!r}")
        if name in seen:
            raise UsageError(f"duplicate label name {name!r}")
        seen.add(name)
        labels.append(LanguageLabel(id=i, name=name))
    return labels


def _clean_record(text: str) -> str:
    # RawSentence invariant: no tabs or newlines survive ingestion.
    return text.replace("\t", " ").replace("\n", " ").replace("\r", " ")


def load_corpus(path, format: str = "plain-lines", column: int = 0) -> list[RawSentence]:
    """One RawSentence per logical record, indexed in file order."""
    if format not in ("plain-lines", "tsv-column"):
        raise UsageError(f"unknown corpus format {format!r}")
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        content = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: malformed UTF-8 at byte offset {exc.start}") from None
    sentences = []
    for lineno, line in enumerate(content.splitlines()):
        if format == "plain-lines":
            text = _clean_record(line)
        else:
            parts = line.split("\t")
            if column >= len(parts):
                raise DataError(
                    f"{path}:{lineno + 1}: line has {len(parts)} columns, need index {column}"
                )
            text = _clean_record(parts[column])
        sentences.append(RawSentence(text=text, source_index=lineno))
    return sentences


def filter_sentences(sentences, rules: FilterRules) -> list[RawSentence]:
    """Order-preserving filtration; with dedup the first occurrence wins."""
    out = []
    seen: set[str] = set()
    for sentence in sentences:
        text = " ".join(sentence.text.split())
        if not (rules.min_chars <= len(text) <= rules.max_chars):
            continue
        if rules.charset == "romanized" and not validate_latin(text.lower()):
            continue
        if rules.dedup:
            if text in seen:
                continue
            seen.add(text)
        out.append(RawSentence(text=text, source_index=sentence.source_index))
    return out


@dataclass
class GenerationResult:
    pairs: list[LabeledSentence]
    per_label: dict[str, int] = field(default_factory=dict)
    dropped: dict[str, int] = field(default_factory=dict)
    skipped: dict[str, int] = field(default_factory=dict)


def generate_dataset(
    sources,
    labels,
    provider=None,
    tables: dict[str, TransliterationTable] | None = None,
    on_provider_error: str = "abort",
    english_label: str = "english",
) -> GenerationResult:
    """Emit one record per (source, label), grouped by source then label id.

    Non-English labels need a provider and a transliteration table. Records
    whose transliteration comes out empty or leaves the romanized alphabet
    are dropped and counted. Provider failures abort by default; with
    on_provider_error="skip" they are counted instead.
    """
    tables = tables or {}
    labels = sorted(labels, key=lambda l: l.id)
    for label in labels:
        if label.name == english_label:
            continue
        if provider is None:
            raise UsageError(f"label {label.name!r} needs a translation provider")
        if label.name not in tables:
            raise UsageError(f"label {label.name!r} has no transliteration table")
    if on_provider_error not in ("abort", "skip"):
        raise UsageError(f"on_provider_error must be abort or skip")

    result = GenerationResult(pairs=[], per_label={l.name: 0 for l in labels},
                              dropped={l.name: 0 for l in labels},
                              skipped={l.name: 0 for l in labels})
    for source in sorted(sources, key=lambda s: s.source_index):
        text = normalize(source.text)
        for label in labels:
            if label.name == english_label:
                romanized = text
            else:
                try:
                    translated = provider.translate(text, label.name)
                except ProviderError:
                    if on_provider_error == "abort":
                        raise
                    result.skipped[label.name] += 1
                    continue
                romanized = normalize(transliterate(translated, tables[label.name]))
            if not romanized or not validate_latin(romanized):
                result.dropped[label.name] += 1
                continue
            result.pairs.append(LabeledSentence(text=romanized, label=label))
            result.per_label[label.name] += 1
    return result


def split_dataset(pairs, ratio: float, seed: int) -> DatasetSplit:
    """Seeded uniform shuffle; the first round(ratio*N) records train."""
    if not 0 < ratio < 1:
        raise UsageError(f"split ratio must be in (0,1), got {ratio}")
    if not pairs:
        raise DataError("cannot split an empty dataset")
    order = list(range(len(pairs)))
    random.Random(seed).shuffle(order)
    n_train = int(math.floor(ratio * len(pairs) + 0.5))
    shuffled = [pairs[i] for i in order]
    return DatasetSplit(
        train=shuffled[:n_train],
        validation=shuffled[n_train:],
        seed=seed,
        ratio=ratio,
    )


def write_dataset(pairs, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in pairs:
            fh.write(f"{pair.text}\t{pair.label.name}\n")


def read_dataset(path, labels) -> list[LabeledSentence]:
    """Read a TSV dataset; label names must exist in the active label set."""
    by_name = {label.name: label for label in labels}
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise DataError(f"{path}:{lineno}: record has no tab separator")
            text, _, name = line.rpartition("\t")
            if name not in by_name:
                raise DataError(f"{path}:{lineno}: unknown label {name!r}")
            pairs.append(LabeledSentence(text=text, label=by_name[name]))
    return pairs
