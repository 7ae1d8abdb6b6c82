"""
Integration tests for PipelineOrchestrator over the seeded tiny corpus.
"""

from unittest.mock import MagicMock, patch

import pytest

from core.orchestrator import PipelineOrchestrator
from gaze import cross_validate_gaze
from storage.checkpoint import read_manifest
from storage.trec import parse_run_file
from utils.errors import ConfigError, NumericalError, ValidationError


@pytest.fixture
def orchestrator(make_config):
    """Cross-encoder with last-layer gaze over the tiny corpus."""
    return PipelineOrchestrator(make_config(ranker="cross", mode="last_layer"))


class TestGazePipeline:
    def test_train_gaze_writes_checkpoint(self, orchestrator, corpus_dir):
        result = orchestrator.train_gaze()
        assert len(result.epoch_losses) == 1
        assert result.steps == 3  # 20 sentences in batches of 8
        assert read_manifest(corpus_dir / "gaze.ckpt").echo["kind"] == "gaze"

    def test_train_gaze_reports_trained_checkpoint(self, orchestrator):
        with patch("core.orchestrator.visual_status") as status:
            orchestrator.train_gaze()
        assert status.call_args_list[-1].args[1] == "trained"

    def test_folds_run_cross_validation_first(self, make_config):
        orchestrator = PipelineOrchestrator(make_config(folds=2))
        with patch("core.orchestrator.cross_validate_gaze", wraps=cross_validate_gaze) as spy:
            orchestrator.train_gaze()
        spy.assert_called_once()
        assert spy.call_args.kwargs["k"] == 2


class TestRankerPipeline:
    def test_cross_encoder_train_rerank_evaluate(self, orchestrator, corpus_dir):
        orchestrator.train_gaze()
        training = orchestrator.train_ranker()
        assert training.steps == 2
        assert len(training.validation) == 1
        assert read_manifest(corpus_dir / "ranker.ckpt").echo["kind"] == "cross"

        run = orchestrator.rerank()
        assert len(run) == 5
        for qid, entries in run:
            assert [e.rank for e in entries] == list(range(1, 11))

        run_path = corpus_dir / "run.txt"
        assert parse_run_file(run_path).docids("q0") == run.docids("q0")
        first = run_path.read_text(encoding="utf-8").splitlines()[0].split()
        assert (first[1], first[3], first[5]) == ("Q0", "1", "gazby")

        report = orchestrator.evaluate()
        assert set(report.means) == {"P@10", "nDCG@10", "MAP", "RR"}
        assert all(0.0 <= value <= 1.0 for value in report.means.values())

    def test_gaze_mode_needs_gaze_checkpoint(self, orchestrator):
        with pytest.raises(ConfigError, match="gaze_checkpoint"):
            orchestrator.train_ranker()

    def test_compare_cross_baseline_with_bi_tfidf(self, make_config, tmp_path):
        runs = []
        for ranker, mode in (("cross", "baseline"), ("bi", "tfidf")):
            config = make_config(
                ranker=ranker,
                mode=mode,
                tag=f"{ranker}-{mode}",
                ranker_checkpoint=str(tmp_path / f"{ranker}.ckpt"),
                run_file=str(tmp_path / f"{ranker}.txt"),
            )
            orchestrator = PipelineOrchestrator(config)
            orchestrator.train_ranker()
            orchestrator.rerank()
            runs.append(config.run_file)

        rows = PipelineOrchestrator(make_config()).compare(runs)
        assert [row.name for row in rows] == ["cross", "bi"]
        assert rows[0].deltas == {}
        assert set(rows[1].means) == {"P@10", "nDCG@10", "MAP", "RR"}

    def test_compare_rejects_same_stem(self, make_config, tmp_path):
        (tmp_path / "a").mkdir()
        (tmp_path / "b").mkdir()
        for folder in ("a", "b"):
            (tmp_path / folder / "run.txt").write_text("q0 Q0 d1 1 0.5 x\n", encoding="utf-8")
        with pytest.raises(ValidationError, match="two runs"):
            PipelineOrchestrator(make_config()).compare([tmp_path / "a" / "run.txt", tmp_path / "b" / "run.txt"])


class TestInputs:
    def test_missing_inputs(self, make_config, tmp_path):
        orchestrator = PipelineOrchestrator(make_config(data_dir=str(tmp_path / "empty")))
        with pytest.raises(ConfigError, match="missing input files"):
            orchestrator.train_ranker()
        with pytest.raises(ConfigError):
            orchestrator.rerank()

    def test_missing_run_file(self, orchestrator, tmp_path):
        with pytest.raises(ValidationError, match="run file not found"):
            orchestrator.evaluate(tmp_path / "absent.txt")

    def test_unknown_query_in_candidates(self, orchestrator):
        with pytest.raises(ValidationError, match="unknown query q2"):
            orchestrator.score_candidates(MagicMock(), {"q1": "alpha"}, {"d1": "beta"}, {"q2": ["d1"]})

    def test_unknown_document_in_candidates(self, orchestrator):
        with pytest.raises(ValidationError, match="unknown document d9"):
            orchestrator.score_candidates(MagicMock(), {"q1": "alpha"}, {"d1": "beta"}, {"q1": ["d9"]})


class TestScoring:
    def test_non_finite_score(self, orchestrator):
        model = MagicMock()
        model.score.return_value = float("nan")
        with pytest.raises(NumericalError, match="non-finite score"):
            orchestrator.score_candidates(model, {"q1": "alpha"}, {"d1": "beta"}, {"q1": ["d1"]})

    def test_concurrent_ties_rank_by_docid(self, orchestrator):
        model = MagicMock()
        model.score.return_value = 0.5
        documents = {f"d{i}": "text" for i in range(8)}
        run = orchestrator.score_candidates(model, {"q1": "alpha"}, documents, {"q1": ["d7", "d3", "d5", "d0"]})
        assert run.docids("q1") == ["d0", "d3", "d5", "d7"]
        assert model.score.call_count == 4
        model.eval.assert_called_once()


def test_gradcheck_suite_passes(orchestrator):
    results = orchestrator.gradcheck()
    assert results
    assert all(result.passed for result in results)


def test_gradcheck_failure_is_numerical(orchestrator):
    failing = MagicMock(passed=False, max_error=1.0, tolerance=1e-4)
    failing.name = "attention"
    with (
        patch("core.orchestrator.run_gradcheck_suite", return_value=[failing]),
        patch("core.orchestrator.visual_status") as status,
    ):
        with pytest.raises(NumericalError, match="attention"):
            orchestrator.gradcheck()
    assert status.call_args.args[1] == "failed"
