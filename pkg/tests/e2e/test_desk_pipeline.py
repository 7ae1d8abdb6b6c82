"""
Desk-scale runs: gaze learnability, retrieval quality of trained rankers,
lexical sanity of the bi-encoder and byte-for-byte reproducibility of the
CLI pipeline.
"""

import time

import numpy as np
import pytest
from fixtures.helpers import TINY_RUN

from config.run_config import RunConfig
from core.orchestrator import PipelineOrchestrator
from encoder import EncoderConfig
from evaluation import RankedRun, ndcg_at_k
from gaze import GazeModelConfig, GazePredictor, evaluate_gaze, standardize_fixations, train_gaze
from main import EXIT_OK, main
from ranker import BiEncoderModel, CrossEncoderModel, RankerTrainingConfig, train_ranker
from services.synthetic_corpus import SyntheticCorpusGenerator, write_corpus
from storage.tabular import group_candidates

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def desk_corpus():
    return SyntheticCorpusGenerator(seed=13).generate()


@pytest.fixture(scope="module")
def desk_gaze(desk_corpus):
    examples = standardize_fixations(desk_corpus.gaze_records[:400], desk_corpus.vocab)
    model = GazePredictor(GazeModelConfig(vocab_size=len(desk_corpus.vocab)), seed=0)
    train_gaze(examples, model, epochs=5, seed=0)
    return model


def _provided_order(candidates: dict[str, list[str]]) -> RankedRun:
    return RankedRun.from_scores(
        {qid: [(docid, -float(rank)) for rank, docid in enumerate(docids, start=1)] for qid, docids in candidates.items()}
    )


def _random_permutation_ndcg(candidates: dict[str, list[str]], qrels, trials: int = 100, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    means = []
    for _ in range(trials):
        shuffled = {qid: [docids[i] for i in rng.permutation(len(docids))] for qid, docids in candidates.items()}
        means.append(ndcg_at_k(_provided_order(shuffled), qrels).mean)
    return float(np.mean(means))


def test_gaze_predictor_learns_length_effect(desk_corpus):
    examples = standardize_fixations(desk_corpus.gaze_records, desk_corpus.vocab)
    assert len(examples) >= 2000
    model = GazePredictor(GazeModelConfig(vocab_size=len(desk_corpus.vocab)), seed=0)

    initial = evaluate_gaze(model, examples)
    started = time.perf_counter()
    result = train_gaze(examples, model, seed=0)
    elapsed = time.perf_counter() - started

    assert result.final_mse < 0.01
    assert result.final_mse < initial
    assert elapsed < 600


@pytest.mark.parametrize("kind, mode", [("cross", "last_layer"), ("bi", "maxsim")])
def test_trained_ranker_beats_random_and_untrained(kind, mode, desk_corpus, desk_gaze):
    vocab = desk_corpus.vocab
    encoder = EncoderConfig(vocab_size=len(vocab))
    if kind == "cross":
        model = CrossEncoderModel(vocab, encoder, desk_gaze, mode=mode, seed=0)
    else:
        model = BiEncoderModel(vocab, encoder, desk_gaze, mode=mode, seed=0)

    candidates = group_candidates(desk_corpus.candidates)
    queries, documents = desk_corpus.query_texts(), desk_corpus.document_texts()
    orchestrator = PipelineOrchestrator(RunConfig(workers=2))
    random_mean = _random_permutation_ndcg(candidates, desk_corpus.qrels)

    started = time.perf_counter()
    untrained = ndcg_at_k(orchestrator.score_candidates(model, queries, documents, candidates), desk_corpus.qrels).mean
    train_ranker(model, desk_corpus.triples, RankerTrainingConfig(freeze_gaze=True, seed=0), desk_corpus.dev_triples)
    trained = ndcg_at_k(orchestrator.score_candidates(model, queries, documents, candidates), desk_corpus.qrels).mean
    elapsed = time.perf_counter() - started

    assert trained >= random_mean + 0.30
    assert trained > untrained
    assert elapsed < 600


def test_untrained_bi_encoder_prefers_lexical_overlap():
    corpus = SyntheticCorpusGenerator(
        seed=11, n_docs=60, n_queries=10, n_candidates=12, n_triples=1, n_dev_triples=1, n_gaze_sentences=1
    ).generate()
    encoder = EncoderConfig(vocab_size=len(corpus.vocab), layers=1, heads=4, d_model=64, d_ff=128, max_len=64)
    model = BiEncoderModel(corpus.vocab, encoder, mode="baseline", d_out=64, m_q=6, m_d=48, seed=0)

    candidates = group_candidates(corpus.candidates)
    orchestrator = PipelineOrchestrator(RunConfig(workers=2))
    run = orchestrator.score_candidates(model, corpus.query_texts(), corpus.document_texts(), candidates)
    provided = _provided_order(candidates)

    reranked = ndcg_at_k(run, corpus.qrels).mean
    assert reranked >= ndcg_at_k(provided, corpus.qrels).mean + 0.05


def _run_pipeline(workdir, corpus):
    data_dir = workdir / "data"
    write_corpus(corpus, data_dir)
    settings = {**TINY_RUN, "ranker": "cross", "mode": "last_layer", "seed": 5, "data_dir": data_dir}
    config_path = workdir / "run.env"
    config_path.write_text("".join(f"{key}={value}\n" for key, value in settings.items()), encoding="utf-8")

    for command in ("train-gaze", "train-ranker", "rerank"):
        assert main([command, "--config", str(config_path)]) == EXIT_OK
    return (data_dir / "run.txt").read_bytes()


def test_pipeline_is_reproducible(tmp_path, tiny_corpus):
    first = _run_pipeline(tmp_path / "first", tiny_corpus)
    second = _run_pipeline(tmp_path / "second", tiny_corpus)
    assert first
    assert first == second
    assert np.unique([line.split()[0] for line in first.decode().splitlines()]).size == 5
