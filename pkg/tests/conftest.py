import time
from dataclasses import dataclass

import pytest

from declfix.fixtures import materialize_corpus
from declfix.nnet.model import ModelConfig
from declfix.pipeline import TrainSummary, run_train


@pytest.fixture(scope="session")
def golden_corpus(tmp_path_factory):
    """The nine repairable cases, flat on disk next to their truth files."""
    root = tmp_path_factory.mktemp("golden-corpus")
    materialize_corpus(root, golden_only=True)
    return root


@pytest.fixture(scope="session")
def full_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("full-corpus")
    materialize_corpus(root, golden_only=False)
    return root


@dataclass
class TrainedRun:
    summary: TrainSummary
    config: ModelConfig
    corpus: object
    elapsed: float


def corpus_model_config():
    """The one training configuration that memorizes the bundled corpus."""
    return ModelConfig.desk_scale(
        epochs=600,
        rng_seed=20260817,
        split_fraction=1.0,
    )


@pytest.fixture(scope="session")
def corpus_model(tmp_path_factory, full_corpus):
    """One full-strength training run over the bundled corpus, shared by the
    plumbing tests and the acceptance suite (which also checks its wall
    clock and recall)."""
    out = tmp_path_factory.mktemp("model") / "corpus.dfx"
    config = corpus_model_config()
    start = time.perf_counter()
    summary = run_train(full_corpus, config, out)
    elapsed = time.perf_counter() - start
    return TrainedRun(
        summary=summary, config=config, corpus=full_corpus, elapsed=elapsed
    )
