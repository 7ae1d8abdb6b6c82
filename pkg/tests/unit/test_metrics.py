import math

import numpy as np
import pytest

from evaluation import (
    BinaryQrels,
    Gain,
    Judgment,
    Qrels,
    RankedRun,
    binarize_qrels,
    compare_variants,
    evaluate_run,
    mean_average_precision,
    mean_reciprocal_rank,
    ndcg_at_k,
    precision_at_k,
    rank_candidates,
)
from fixtures.helpers import (
    oracle_average_precision,
    oracle_ndcg,
    oracle_precision,
    oracle_reciprocal_rank,
    random_instance,
)
from utils.errors import ValidationError


def _run(qid: str, docids: list[str]) -> RankedRun:
    """A run listing docids in the given order."""
    return RankedRun.from_scores({qid: [(d, float(len(docids) - i)) for i, d in enumerate(docids)]})


class TestBinarization:
    def test_grades_two_and_three_are_relevant(self):
        qrels = Qrels([("q", "a", 0), ("q", "b", 1), ("q", "c", 2), ("q", "d", 3)])
        assert binarize_qrels(qrels).relevant_for("q") == {"c", "d"}

    def test_all_zero_grades(self):
        binary = binarize_qrels(Qrels([("q", "a", 0), ("q", "b", 0)]))
        assert "q" in binary
        assert binary.relevant_for("q") == frozenset()

    def test_binary_qrels_pass_through(self):
        binary = BinaryQrels({"q": frozenset({"a"})})
        assert binarize_qrels(binary) is binary

    @pytest.mark.parametrize("grade", [-1, 4, True, 2.0])
    def test_invalid_grade(self, grade):
        with pytest.raises(ValidationError):
            Judgment("q", "a", grade)

    def test_duplicate_judgment(self):
        with pytest.raises(ValidationError, match="duplicate"):
            Qrels([("q", "a", 1), ("q", "a", 2)])


class TestPrecision:
    def test_three_relevant_in_top_ten(self):
        docids = [f"d{i}" for i in range(12)]
        qrels = Qrels([("q", "d0", 2), ("q", "d4", 3), ("q", "d9", 2), ("q", "d10", 3)])
        assert precision_at_k(_run("q", docids), qrels).mean == pytest.approx(0.3)

    def test_short_run_keeps_k_denominator(self):
        qrels = Qrels([("q", "a", 2), ("q", "c", 3)])
        assert precision_at_k(_run("q", ["a", "b", "c", "d"]), qrels, k=10).mean == pytest.approx(0.2)

    def test_cutoff_validated(self):
        with pytest.raises(ValidationError):
            precision_at_k(_run("q", ["a"]), Qrels([("q", "a", 2)]), k=0)


class TestNdcg:
    def test_ideal_ordering_is_one(self):
        qrels = Qrels([("q", "a", 3), ("q", "b", 2), ("q", "c", 1)])
        assert ndcg_at_k(_run("q", ["a", "b", "c", "x"]), qrels).mean == 1.0

    def test_single_perfect_document_at_top(self):
        assert ndcg_at_k(_run("q", ["a", "b"]), Qrels([("q", "a", 3)]), k=10).mean == 1.0

    def test_swapped_pair_exp_gain(self):
        qrels = Qrels([("q", "a", 1), ("q", "b", 3)])
        expected = (1 + 7 / math.log2(3)) / (7 + 1 / math.log2(3))
        assert ndcg_at_k(_run("q", ["a", "b"]), qrels).mean == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.7098, abs=1e-4)

    def test_swapped_pair_linear_gain(self):
        qrels = Qrels([("q", "a", 1), ("q", "b", 3)])
        expected = (1 + 3 / math.log2(3)) / (3 + 1 / math.log2(3))
        assert ndcg_at_k(_run("q", ["a", "b"]), qrels, gain="linear").mean == pytest.approx(expected, abs=1e-12)

    def test_no_positive_grades_scores_zero(self):
        assert ndcg_at_k(_run("q", ["a"]), Qrels([("q", "a", 0)])).mean == 0.0

    def test_needs_graded_judgments(self):
        with pytest.raises(ValidationError, match="graded"):
            ndcg_at_k(_run("q", ["a"]), BinaryQrels({"q": frozenset({"a"})}))

    def test_promoting_a_worse_document_never_helps(self):
        qrels = Qrels([("q", "a", 3), ("q", "b", 1), ("q", "c", 2)])
        good = ndcg_at_k(_run("q", ["a", "c", "b"]), qrels).mean
        swapped = ndcg_at_k(_run("q", ["a", "b", "c"]), qrels).mean
        assert swapped <= good


class TestAveragePrecisionAndRR:
    def test_both_relevant_at_top(self):
        qrels = Qrels([("q", "a", 2), ("q", "b", 3)])
        assert mean_average_precision(_run("q", ["a", "b", "c"]), qrels).mean == 1.0

    def test_relevant_at_one_and_three(self):
        qrels = Qrels([("q", "a", 2), ("q", "c", 2)])
        assert mean_average_precision(_run("q", ["a", "b", "c"]), qrels).mean == pytest.approx(0.8333, abs=1e-4)

    def test_unretrieved_relevant_counts_in_denominator(self):
        qrels = Qrels([("q", "a", 2), ("q", "z", 2)])
        assert mean_average_precision(_run("q", ["a", "b"]), qrels).mean == pytest.approx(0.5)

    def test_no_relevant_retrieved(self):
        qrels = Qrels([("q", "z", 3)])
        assert mean_average_precision(_run("q", ["a", "b"]), qrels).mean == 0.0
        assert mean_reciprocal_rank(_run("q", ["a", "b"]), qrels).mean == 0.0

    @pytest.mark.parametrize(("position", "expected"), [(0, 1.0), (3, 0.25)])
    def test_reciprocal_rank(self, position, expected):
        docids = ["a", "b", "c", "d", "e"]
        qrels = Qrels([("q", docids[position], 2), ("q", "e", 1)])
        assert mean_reciprocal_rank(_run("q", docids), qrels).mean == expected


class TestQueryCoverage:
    def test_judged_query_missing_from_run_scores_zero(self):
        qrels = Qrels([("q1", "a", 3), ("q2", "b", 3)])
        report = evaluate_run(_run("q1", ["a"]), qrels)
        for name in ("P@10", "nDCG@10", "MAP", "RR"):
            assert report[name].per_query["q2"] == 0.0
        assert report["RR"].mean == 0.5

    def test_unjudged_ranked_query_counts_with_no_relevant(self):
        run = RankedRun.from_scores({"q1": [("a", 1.0)], "q9": [("a", 1.0)]})
        result = mean_reciprocal_rank(run, Qrels([("q1", "a", 2)]))
        assert result.per_query == {"q1": 1.0, "q9": 0.0}
        assert result.mean == 0.5

    def test_nothing_to_evaluate(self):
        with pytest.raises(ValidationError):
            mean_reciprocal_rank(RankedRun(), Qrels())


def test_metrics_match_brute_force_oracles():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        judgments, scores = random_instance(
            rng, n_queries=int(rng.integers(1, 6)), pool=int(rng.integers(6, 21)), judged=6
        )
        qrels = Qrels(judgments)
        run = RankedRun.from_scores(scores)
        binary = binarize_qrels(qrels)
        report = evaluate_run(run, qrels, k=10)
        linear = ndcg_at_k(run, qrels, k=10, gain="linear")
        for qid in qrels.queries():
            ranked = run.docids(qid)
            relevant = set(binary.relevant_for(qid))
            grades = qrels.grades(qid)
            assert report["P@10"].per_query[qid] == pytest.approx(oracle_precision(ranked, relevant, 10), abs=1e-9)
            assert report["nDCG@10"].per_query[qid] == pytest.approx(oracle_ndcg(ranked, grades, 10), abs=1e-9)
            assert linear.per_query[qid] == pytest.approx(oracle_ndcg(ranked, grades, 10, "linear"), abs=1e-9)
            assert report["MAP"].per_query[qid] == pytest.approx(oracle_average_precision(ranked, relevant), abs=1e-9)
            assert report["RR"].per_query[qid] == pytest.approx(oracle_reciprocal_rank(ranked, relevant), abs=1e-9)
        for result in report.results.values():
            assert 0.0 <= result.mean <= 1.0
            assert result.mean == pytest.approx(np.mean(list(result.per_query.values())), abs=1e-12)


def test_binarizing_first_changes_nothing():
    rng = np.random.default_rng(5)
    judgments, scores = random_instance(rng)
    qrels = Qrels(judgments)
    run = RankedRun.from_scores(scores)
    binary = binarize_qrels(qrels)
    for metric in (precision_at_k, mean_average_precision, mean_reciprocal_rank):
        assert metric(run, qrels).per_query == metric(run, binary).per_query


def test_gain_values():
    assert [Gain.EXP(g) for g in range(4)] == [0.0, 1.0, 3.0, 7.0]
    assert [Gain.LINEAR(g) for g in range(4)] == [0.0, 1.0, 2.0, 3.0]


class TestRankCandidates:
    def test_score_descending(self):
        entries = rank_candidates([("b", 0.1), ("a", 0.9)])
        assert [(e.docid, e.rank) for e in entries] == [("a", 1), ("b", 2)]

    def test_ties_by_docid(self):
        assert [e.docid for e in rank_candidates([("b", 0.5), ("a", 0.5), ("c", 0.7)])] == ["c", "a", "b"]

    def test_duplicate_docid(self):
        with pytest.raises(ValidationError, match="duplicate candidate a"):
            rank_candidates([("a", 0.5), ("a", 0.4)])

    def test_non_finite_score(self):
        with pytest.raises(ValidationError, match="non-finite"):
            rank_candidates([("a", math.inf)])


class TestCompareVariants:
    def _report(self, docids):
        qrels = Qrels([("q", "a", 3), ("q", "b", 2)])
        return evaluate_run(_run("q", docids), qrels, k=2)

    def test_relative_deltas(self):
        rows = compare_variants(
            {"gaze": self._report(["a", "b"]), "baseline": self._report(["a", "c"])}, baseline="baseline"
        )
        assert [row.name for row in rows] == ["baseline", "gaze"]
        assert rows[0].deltas == {}
        assert rows[1].deltas["P@2"] == pytest.approx(1.0)
        assert rows[1].deltas["RR"] == pytest.approx(0.0)

    def test_zero_baseline_metric_has_no_delta(self):
        rows = compare_variants(
            {"baseline": self._report(["c", "d"]), "gaze": self._report(["a", "b"])}, baseline="baseline"
        )
        assert "P@2" not in rows[1].deltas

    def test_missing_baseline(self):
        with pytest.raises(ValidationError):
            compare_variants({"gaze": self._report(["a"])}, baseline="baseline")
