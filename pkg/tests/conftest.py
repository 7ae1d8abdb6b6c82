"""
Test configuration and fixtures for pytest.

Sets ENVIRONMENT=test before any package module is imported, then provides
tiny float64 models, a small synthetic corpus on disk and run configs
sized for fast pipeline runs.
"""

import os
import sys

# Set ENVIRONMENT=test immediately when conftest.py is imported
os.environ["ENVIRONMENT"] = "test"
os.environ.pop("GAZBY_SEED", None)

# Clear any cached environment modules
modules_to_clear = [mod for mod in sys.modules.keys() if mod.startswith("config")]
for mod in modules_to_clear:
    del sys.modules[mod]

from unittest import mock  # noqa: E402

import numpy as np  # noqa: E402
import pytest  # noqa: E402
from fixtures.helpers import TINY_RUN, DummyClass  # noqa: E402

from config.run_config import RunConfig  # noqa: E402
from core.component_factory import ComponentFactory  # noqa: E402
from encoder import EncoderConfig  # noqa: E402
from gaze import GazeModelConfig, GazePredictor  # noqa: E402
from ranker import BiEncoderModel, CrossEncoderModel  # noqa: E402
from services.synthetic_corpus import SyntheticCorpusGenerator, write_corpus  # noqa: E402
from tokenizer import SPECIAL_TOKENS, Vocabulary  # noqa: E402

TINY_WORDS = ("alpha", "beta", "gamma", "delta", "omega", "kappa", "sigma", "##s")


@pytest.fixture(autouse=True, scope="session")
def setup_test_environment():
    """
    Ensure ENVIRONMENT=test for all tests.

    This is set at import time above, but this fixture ensures
    it stays set throughout the test session.
    """
    assert os.environ.get("ENVIRONMENT") == "test", "ENVIRONMENT should be set to 'test'"


# ---- tiny models ----


@pytest.fixture
def vocab() -> Vocabulary:
    return Vocabulary.from_tokens(list(SPECIAL_TOKENS) + list(TINY_WORDS))


@pytest.fixture
def encoder_config(vocab) -> EncoderConfig:
    return EncoderConfig(vocab_size=len(vocab), layers=2, heads=2, d_model=8, d_ff=16, max_len=32)


@pytest.fixture
def gaze_config(vocab) -> GazeModelConfig:
    return GazeModelConfig(vocab_size=len(vocab), embed_dim=6, lstm_hidden=4, layers=1, heads=2, d_ff=8)


@pytest.fixture
def gaze_model(gaze_config) -> GazePredictor:
    return GazePredictor(gaze_config, seed=3)


@pytest.fixture
def cross_model(vocab, encoder_config, gaze_model) -> CrossEncoderModel:
    return CrossEncoderModel(vocab, encoder_config, gaze_model, "last_layer", seed=5)


@pytest.fixture
def bi_model(vocab, encoder_config, gaze_model) -> BiEncoderModel:
    return BiEncoderModel(vocab, encoder_config, gaze_model, "maxsim", d_out=6, m_q=8, m_d=16, seed=5)


# ---- synthetic corpus ----


@pytest.fixture(scope="session")
def tiny_corpus():
    """Seeded corpus: 40 documents, 5 queries with 10 candidates each, 20 gaze sentences."""
    return SyntheticCorpusGenerator(
        seed=7,
        n_docs=40,
        n_queries=5,
        n_candidates=10,
        n_triples=16,
        n_dev_triples=8,
        n_gaze_sentences=20,
    ).generate()


@pytest.fixture
def corpus_dir(tmp_path, tiny_corpus):
    data_dir = tmp_path / "data"
    write_corpus(tiny_corpus, data_dir)
    return data_dir


@pytest.fixture
def make_config(corpus_dir):
    """RunConfig over the tiny corpus with desk-test dimensions; keywords override."""

    def build(**overrides) -> RunConfig:
        values = {**TINY_RUN, "data_dir": str(corpus_dir), **overrides}
        return RunConfig(**values)

    return build


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


# Component testing fixtures
@pytest.fixture
def factory(make_config):
    """ComponentFactory instance for testing."""
    return ComponentFactory(make_config())


@pytest.fixture
def mock_import_class():
    """Mock ComponentFactory.import_class to return DummyClass."""
    with mock.patch.object(ComponentFactory, "import_class") as mock_import:
        mock_import.return_value = DummyClass
        yield mock_import
