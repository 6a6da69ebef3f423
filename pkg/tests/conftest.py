import os

# Pin numpy's BLAS to one thread before it is first imported anywhere, so
# timing-sensitive tests measure single-core behaviour and results are
# reproducible run to run.
os.environ.setdefault("OMP_NUM_THREADS", "1")
os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("MKL_NUM_THREADS", "1")

from pathlib import Path

import pytest

from rlid import corpus

REPO = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return REPO / "data"


@pytest.fixture(scope="session")
def labels():
    return corpus.make_labels(["english", "hindi", "russian"])


@pytest.fixture()
def tiny_pairs(labels):
    english, hindi, russian = labels
    texts = [
        ("see you at noon", english),
        ("the bus is late again", english),
        ("main ghara ja raha hun", hindi),
        ("ap kaise ho bhai", hindi),
        ("ya idu domoy", russian),
        ("kak dela u mamy", russian),
        ("what happened to you", english),
        ("mujhe abhi fona karo", hindi),
        ("pozvoni mne pozzhe", russian),
        ("roti lao jaldi", hindi),
    ]
    return [corpus.LabeledSentence(text=t, label=l) for t, l in texts]
