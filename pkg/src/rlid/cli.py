"""Command-line surface: generate, split, vocab, train, eval, predict, inspect.

Exit codes: 0 success, 1 usage error, 2 data/file error, 3 numeric
failure. All randomness flows from --seed (default 42); reruns with
identical flags and files produce byte-identical artifacts.

Every subcommand accepts ``--config FILE`` (a JSON object keyed by flag
name with dashes or underscores); explicit flags override config values,
and flag-only operation needs no config at all.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus, evaluation, tokenizer, train as training, translit
from .errors import DataError, NumericError, RlidError, UsageError
from .model import ModelConfig, init_parameters
from .provider import ProviderConfig, Translator

DEFAULT_SEED = 42

# Flags that would normally be argparse-required; kept optional so a
# config file can supply them, then validated after parsing.
_REQUIRED = {
    "generate": ("corpus", "out"),
    "split": ("dataset", "train_out", "val_out"),
    "vocab": ("dataset", "out"),
    "train": ("train", "vocab", "out"),
    "eval": ("checkpoint", "dataset"),
    "predict": ("checkpoint",),
    "inspect": ("checkpoint",),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we own the exit codes
        raise UsageError(message)


def _apply_config(subparsers, argv):
    """Seed subcommand defaults from --config before the real parse."""
    scan = _Parser(add_help=False)
    scan.add_argument("--config")
    known, _ = scan.parse_known_args(argv)
    if not known.config:
        return
    with open(known.config, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{known.config}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DataError(f"{known.config}: expected a JSON object")
    command = next((a for a in argv if not a.startswith("-")), None)
    sub = subparsers.get(command)
    if sub is None:
        return  # the real parse will report the unknown command
    valid = {a.dest for a in sub._actions}
    defaults = {}
    for key, value in doc.items():
        dest = key.replace("-", "_")
        if dest not in valid:
            raise UsageError(f"{known.config}: unknown option {key!r} for {command}")
        defaults[dest] = value
    sub.set_defaults(**defaults)


def _check_required(args):
    missing = [
        name for name in _REQUIRED.get(args.command, ())
        if getattr(args, name, None) is None
    ]
    if missing:
        flags = ", ".join("--" + name.replace("_", "-") for name in missing)
        raise UsageError(f"missing required option(s): {flags}")


def _add_labels_flag(parser):
    parser.add_argument(
        "--labels",
        default=",".join(corpus.DEFAULT_LABELS),
        help="comma-separated label names in id order (default: %(default)s)",
    )


def _parse_labels(args) -> list[corpus.LanguageLabel]:
    return corpus.make_labels([n.strip() for n in args.labels.split(",") if n.strip()])


def _load_table_spec(spec: str) -> translit.TransliterationTable:
    if spec in translit.BUILTIN_TABLES:
        return translit.builtin_table(spec)
    path = Path(spec)
    script = "devanagari" if path.stem == "devanagari" else (
        "cyrillic" if path.stem == "cyrillic" else "other"
    )
    return translit.load_table(path, script=script)


def cmd_generate(args) -> int:
    labels = _parse_labels(args)
    tables = {}
    for item in args.table or []:
        if "=" not in item:
            raise UsageError(f"--table expects LABEL=NAME_OR_PATH, got {item!r}")
        name, spec = item.split("=", 1)
        tables[name] = _load_table_spec(spec)
    for label in labels:
        if label.name != args.english_label and label.name not in tables:
            raise UsageError(f"missing --table for label {label.name!r}")

    provider = None
    if any(label.name != args.english_label for label in labels):
        config = ProviderConfig(
            kind=args.provider,
            fixture_path=args.fixtures,
            endpoint=args.endpoint,
            api_key_env=args.api_key_env,
            cache_dir=args.cache_dir,
        )
        provider = Translator(config)

    rules = corpus.FilterRules(
        min_chars=args.min_chars,
        max_chars=args.max_chars,
        charset=args.charset,
        dedup=not args.no_dedup,
    )
    sources = corpus.load_corpus(args.corpus, format=args.corpus_format, column=args.column)
    kept = corpus.filter_sentences(sources, rules)
    result = corpus.generate_dataset(
        kept, labels, provider=provider, tables=tables,
        on_provider_error=args.on_provider_error,
        english_label=args.english_label,
    )
    corpus.write_dataset(result.pairs, args.out)
    print(f"sources: {len(sources)} loaded, {len(kept)} after filtering")
    for label in labels:
        line = f"{label.name}: {result.per_label[label.name]} records"
        if result.dropped[label.name]:
            line += f", {result.dropped[label.name]} dropped"
        if result.skipped[label.name]:
            line += f", {result.skipped[label.name]} skipped"
        print(line)
    print(f"wrote {len(result.pairs)} records to {args.out}")
    return 0


def cmd_split(args) -> int:
    labels = _parse_labels(args)
    pairs = corpus.read_dataset(args.dataset, labels)
    split = corpus.split_dataset(pairs, ratio=args.ratio, seed=args.seed)
    corpus.write_dataset(split.train, args.train_out)
    corpus.write_dataset(split.validation, args.val_out)
    print(f"train: {len(split.train)} -> {args.train_out}")
    print(f"validation: {len(split.validation)} -> {args.val_out}")
    return 0


def cmd_vocab(args) -> int:
    labels = _parse_labels(args)
    pairs = corpus.read_dataset(args.dataset, labels)
    vocab = tokenizer.build_vocab(pairs, max_size=args.max_size)
    tokenizer.save_vocab(vocab, args.out)
    print(f"vocabulary of {len(vocab)} tokens -> {args.out}")
    return 0


def _model_config(args, vocab_size: int, n_classes: int) -> ModelConfig:
    return ModelConfig(
        vocab_size=vocab_size,
        hidden_dim=args.hidden_dim,
        n_layers=args.n_layers,
        n_heads=args.n_heads,
        ff_dim=args.ff_dim,
        max_len=args.max_len,
        n_classes=n_classes,
        dropout_rate=args.dropout,
    )


def cmd_train(args) -> int:
    labels = _parse_labels(args)
    vocab = tokenizer.load_vocab(args.vocab)
    train_pairs = corpus.read_dataset(args.train, labels)
    val_pairs = corpus.read_dataset(args.val, labels) if args.val else []
    split = corpus.DatasetSplit(
        train=train_pairs, validation=val_pairs, seed=args.seed, ratio=0.0 if not val_pairs else 1.0,
    )
    config = _model_config(args, vocab_size=len(vocab), n_classes=len(labels))
    train_config = training.TrainConfig(
        learning_rate=args.lr,
        epochs=args.epochs,
        batch_size=args.batch_size,
        seed=args.seed,
        weight_decay=args.weight_decay,
    )
    params = init_parameters(config, seed=args.seed)

    def report(record):
        print(
            f"epoch {record.epoch}: train loss {record.train_loss:.4f}, "
            f"validation accuracy {record.val_accuracy:.4f}"
        )

    params, _ = training.train(params, config, train_config, split, vocab, on_epoch=report)
    training.save_checkpoint(params, config, vocab, args.out)
    print(f"checkpoint -> {args.out}")
    return 0


def cmd_eval(args) -> int:
    labels = _parse_labels(args)
    params, config, vocab = training.load_checkpoint(args.checkpoint)
    pairs = corpus.read_dataset(args.dataset, labels)
    metrics = evaluation.evaluate(params, config, vocab, pairs, labels)
    print(evaluation.format_metrics(metrics))
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(evaluation.metrics_to_dict(metrics), fh, indent=1)
            fh.write("\n")
        print(f"report -> {args.report}")
    return 0


def cmd_predict(args) -> int:
    labels = _parse_labels(args)
    params, config, vocab = training.load_checkpoint(args.checkpoint)
    if args.text is not None:
        texts = [args.text]
    else:
        texts = [line.rstrip("\n") for line in sys.stdin if line.strip()]
    for text in texts:
        pred = evaluation.predict(params, config, vocab, text, labels)
        prob = pred.probabilities[pred.label.id]
        print(f"{pred.label.name} {prob:.4f}")
    return 0


def cmd_inspect(args) -> int:
    params, config, vocab = training.load_checkpoint(args.checkpoint)
    print(f"checkpoint {args.checkpoint}")
    print(f"config: {json.dumps(config.to_dict())}")
    print(f"vocabulary: {len(vocab)} tokens")
    total = 0
    for name, arr in params.items():
        shape = "x".join(str(d) for d in arr.shape)
        print(f"  {name}  {shape}  ({arr.size} floats)")
        total += arr.size
    print(f"total parameters: {total}")
    return 0


def build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    parser = _Parser(prog="rlid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    registry: dict[str, _Parser] = {}

    def command(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", help="JSON file of option defaults; flags win")
        registry[name] = p
        return p

    p = command("generate", "build a labeled dataset from an English corpus")
    p.add_argument("--corpus")
    p.add_argument("--corpus-format", choices=["plain-lines", "tsv-column"],
                   default="plain-lines")
    p.add_argument("--column", type=int, default=0, help="0-based column for tsv-column")
    _add_labels_flag(p)
    p.add_argument("--english-label", default="english")
    p.add_argument("--provider", choices=["fixture", "http"], default="fixture")
    p.add_argument("--fixtures", help="fixture translation TSV")
    p.add_argument("--endpoint", help="http provider endpoint URL")
    p.add_argument("--api-key-env", help="environment variable holding the API key")
    p.add_argument("--cache-dir", help="directory for the translation cache")
    p.add_argument("--table", action="append", metavar="LABEL=NAME_OR_PATH",
                   help="transliteration table per non-English label")
    p.add_argument("--on-provider-error", choices=["abort", "skip"], default="abort")
    p.add_argument("--min-chars", type=int, default=3)
    p.add_argument("--max-chars", type=int, default=200)
    p.add_argument("--charset", choices=["romanized", "any"], default="romanized")
    p.add_argument("--no-dedup", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = command("split", "shuffle and split a dataset")
    p.add_argument("--dataset")
    _add_labels_flag(p)
    p.add_argument("--ratio", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--train-out")
    p.add_argument("--val-out")
    p.set_defaults(func=cmd_split)

    p = command("vocab", "build a character vocabulary")
    p.add_argument("--dataset")
    _add_labels_flag(p)
    p.add_argument("--max-size", type=int, default=128)
    p.add_argument("--out")
    p.set_defaults(func=cmd_vocab)

    p = command("train", "train the classifier")
    p.add_argument("--train")
    p.add_argument("--val", help="validation dataset (optional)")
    p.add_argument("--vocab")
    _add_labels_flag(p)
    p.add_argument("--lr", type=float, default=5e-5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch-size", type=int, default=4)
    p.add_argument("--weight-decay", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--hidden-dim", type=int, default=128)
    p.add_argument("--n-layers", type=int, default=2)
    p.add_argument("--n-heads", type=int, default=2)
    p.add_argument("--ff-dim", type=int, default=256)
    p.add_argument("--max-len", type=int, default=64)
    p.add_argument("--dropout", type=float, default=0.1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_train)

    p = command("eval", "evaluate a checkpoint on a dataset")
    p.add_argument("--checkpoint")
    p.add_argument("--dataset")
    _add_labels_flag(p)
    p.add_argument("--report", help="optional JSON report path")
    p.set_defaults(func=cmd_eval)

    p = command("predict", "classify text (from --text or stdin lines)")
    p.add_argument("--checkpoint")
    p.add_argument("--text")
    _add_labels_flag(p)
    p.set_defaults(func=cmd_predict)

    p = command("inspect", "dump a checkpoint manifest")
    p.add_argument("--checkpoint")
    p.set_defaults(func=cmd_inspect)
    return parser, registry


def main(argv=None) -> int:
    parser, registry = build_parser()
    try:
        _apply_config(registry, list(argv if argv is not None else sys.argv[1:]))
        args = parser.parse_args(argv)
        _check_required(args)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except RlidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
