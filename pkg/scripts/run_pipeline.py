#!/usr/bin/env python3
"""Run the full desk-scale experiment on the bundled fixtures.

Drives the CLI end to end: generate the 3,000-pair dataset from the
fixture corpus, split 80/20, build the vocabulary, train with the
default recipe (lr 5e-5, 5 epochs, batch size 4), evaluate, and run a
few sample predictions. Artifacts land in --work-dir (default: ./work).

Usage: python scripts/run_pipeline.py [--work-dir work] [--seed 42]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from rlid.cli import main as rlid  # noqa: E402


def run(argv: list[str]) -> None:
    print(f"\n$ rlid {' '.join(argv)}")
    code = rlid(argv)
    if code != 0:
        raise SystemExit(f"command failed with exit code {code}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--work-dir", type=Path, default=ROOT / "work")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()
    work = args.work_dir
    work.mkdir(parents=True, exist_ok=True)
    data = ROOT / "data"

    started = time.time()
    run([
        "generate",
        "--corpus", str(data / "corpus_en.txt"),
        "--fixtures", str(data / "translations.tsv"),
        "--table", "hindi=devanagari",
        "--table", "russian=cyrillic",
        "--out", str(work / "dataset.tsv"),
    ])
    run([
        "split",
        "--dataset", str(work / "dataset.tsv"),
        "--ratio", "0.8",
        "--seed", str(args.seed),
        "--train-out", str(work / "train.tsv"),
        "--val-out", str(work / "val.tsv"),
    ])
    run([
        "vocab",
        "--dataset", str(work / "train.tsv"),
        "--out", str(work / "vocab.json"),
    ])
    run([
        "train",
        "--train", str(work / "train.tsv"),
        "--val", str(work / "val.tsv"),
        "--vocab", str(work / "vocab.json"),
        "--seed", str(args.seed),
        "--out", str(work / "model.ckpt"),
    ])
    run([
        "eval",
        "--checkpoint", str(work / "model.ckpt"),
        "--dataset", str(work / "val.tsv"),
        "--report", str(work / "metrics.json"),
    ])
    for text in ("ap kaise ho", "kak dela", "see you at the station"):
        run(["predict", "--checkpoint", str(work / "model.ckpt"), "--text", text])
    print(f"\ndone in {time.time() - started:.0f}s; artifacts in {work}")


if __name__ == "__main__":
    main()
