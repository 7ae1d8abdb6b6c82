import numpy as np
import pytest

from evaluation import Qrels, RankedRun
from storage import CandidateRecord, DocumentRecord, QueryRecord, TabularKind, TrainingTriple
from storage.tabular import group_candidates, load_gaze_corpus, load_tabular
from storage.trec import load_qrels_file, parse_run_file, write_qrels_file, write_run_file
from utils.errors import FormatError, ValidationError


def _write(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


def _valid_row(kind: TabularKind, i: int) -> str:
    fields = {
        TabularKind.QUERIES: [f"q{i}", "alpha beta"],
        TabularKind.COLLECTION: [f"d{i}", "some text"],
        TabularKind.TRIPLES: ["what", f"good {i}", f"bad {i}"],
        TabularKind.CANDIDATES: ["q1", f"d{i}", str(i + 1)],
    }[kind]
    return "\t".join(fields)


class TestTabular:
    def test_queries(self, tmp_path):
        path = _write(tmp_path / "queries.tsv", ["q1\talpha beta", "", "q2\tgamma"])
        assert load_tabular(path, "queries") == [QueryRecord("q1", "alpha beta"), QueryRecord("q2", "gamma")]

    def test_collection_by_enum(self, tmp_path):
        path = _write(tmp_path / "collection.tsv", ["d1\tsome text"])
        assert load_tabular(path, TabularKind.COLLECTION) == [DocumentRecord("d1", "some text")]

    def test_triples(self, tmp_path):
        path = _write(tmp_path / "triples.tsv", ["what\tgood passage\tbad passage"])
        assert load_tabular(path, "triples") == [TrainingTriple("what", "good passage", "bad passage")]

    def test_wrong_column_count_reports_line(self, tmp_path):
        path = _write(tmp_path / "queries.tsv", ["q1\tfine", "q2 missing tab"])
        with pytest.raises(FormatError) as excinfo:
            load_tabular(path, "queries")
        assert excinfo.value.line_no == 2
        assert "queries.tsv:2" in str(excinfo.value)

    def test_duplicate_ids(self, tmp_path):
        path = _write(tmp_path / "collection.tsv", ["d1\ta", "d1\tb"])
        with pytest.raises(FormatError, match="duplicate id d1"):
            load_tabular(path, "collection")

    def test_identical_triple_passages(self, tmp_path):
        path = _write(tmp_path / "triples.tsv", ["q\tsame\tsame"])
        with pytest.raises(FormatError, match="identical"):
            load_tabular(path, "triples")

    def test_candidate_rank_must_be_integer(self, tmp_path):
        path = _write(tmp_path / "candidates.tsv", ["q1\td1\tfirst"])
        with pytest.raises(FormatError, match="not an integer"):
            load_tabular(path, "candidates")

    def test_candidates_grouped_by_provided_rank(self, tmp_path):
        path = _write(tmp_path / "candidates.tsv", ["q1\td3\t2", "q2\td9\t1", "q1\td7\t1"])
        records = load_tabular(path, "candidates")
        assert records[0] == CandidateRecord("q1", "d3", 2)
        assert group_candidates(records) == {"q1": ["d7", "d3"], "q2": ["d9"]}

    def test_unknown_kind(self, tmp_path):
        path = _write(tmp_path / "x.tsv", ["a\tb"])
        with pytest.raises(KeyError):
            load_tabular(path, "passages")

    @pytest.mark.parametrize("kind", list(TabularKind))
    def test_any_wrong_column_count_is_rejected(self, tmp_path, kind):
        rng = np.random.default_rng(len(kind.name))
        for trial in range(30):
            good = [_valid_row(kind, i) for i in range(int(rng.integers(0, 4)))]
            width = int(rng.choice([n for n in range(1, 8) if n != kind.columns]))
            path = _write(tmp_path / f"{trial}.tsv", [*good, "\t".join(f"x{j}" for j in range(width))])
            with pytest.raises(FormatError) as excinfo:
                load_tabular(path, kind)
            assert excinfo.value.line_no == len(good) + 1


class TestGazeCorpus:
    def test_load(self, tmp_path):
        path = _write(
            tmp_path / "gaze.tsv",
            ["dataset_id\tsentence_id\ttoken\tfixation_ms", "geco\ts1\talpha\t212.5", "geco\ts1\tbeta\t0"],
        )
        records = load_gaze_corpus(path)
        assert [(r.token, r.fixation_ms) for r in records] == [("alpha", 212.5), ("beta", 0.0)]

    def test_header_required(self, tmp_path):
        path = _write(tmp_path / "gaze.tsv", ["geco\ts1\talpha\t212.5"])
        with pytest.raises(FormatError, match="header"):
            load_gaze_corpus(path)

    def test_negative_duration(self, tmp_path):
        path = _write(tmp_path / "gaze.tsv", ["dataset_id\tsentence_id\ttoken\tfixation_ms", "geco\ts1\talpha\t-3"])
        with pytest.raises(ValidationError, match="negative fixation"):
            load_gaze_corpus(path)

    def test_empty_file(self, tmp_path):
        path = _write(tmp_path / "gaze.tsv", [])
        with pytest.raises(FormatError, match="empty"):
            load_gaze_corpus(path)


class TestQrelsFile:
    def test_round_trip(self, tmp_path):
        qrels = Qrels([("q1", "d1", 3), ("q1", "d2", 0), ("q2", "d5", 2)])
        path = tmp_path / "qrels.txt"
        write_qrels_file(qrels, path)
        assert path.read_text(encoding="utf-8").splitlines()[0] == "q1 0 d1 3"
        assert list(load_qrels_file(path)) == list(qrels)

    def test_bad_field_count(self, tmp_path):
        path = _write(tmp_path / "qrels.txt", ["q1 0 d1 3", "q1 d2 1"])
        with pytest.raises(FormatError) as excinfo:
            load_qrels_file(path)
        assert excinfo.value.line_no == 2

    def test_any_wrong_field_count_is_rejected(self, tmp_path):
        rng = np.random.default_rng(4)
        for trial in range(30):
            good = [f"q1 0 d{i} {i % 4}" for i in range(int(rng.integers(0, 4)))]
            width = int(rng.choice([1, 2, 3, 5, 6, 7]))
            path = _write(tmp_path / f"{trial}.txt", [*good, " ".join(["1"] * width)])
            with pytest.raises(FormatError) as excinfo:
                load_qrels_file(path)
            assert excinfo.value.line_no == len(good) + 1

    def test_grade_out_of_range(self, tmp_path):
        path = _write(tmp_path / "qrels.txt", ["q1 0 d1 4"])
        with pytest.raises(ValidationError):
            load_qrels_file(path)

    def test_duplicate_judgment(self, tmp_path):
        path = _write(tmp_path / "qrels.txt", ["q1 0 d1 1", "q1 0 d1 2"])
        with pytest.raises(FormatError, match="duplicate"):
            load_qrels_file(path)


class TestRunFile:
    @pytest.fixture
    def run(self):
        return RankedRun.from_scores(
            {"q2": [("d1", 0.25), ("d2", 1.5)], "q1": [("d9", -0.125), ("d3", -0.125)]}
        )

    def test_line_format(self, run, tmp_path):
        path = write_run_file(run, "gazby-cross", tmp_path / "runs" / "run.txt")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines == [
            "q2 Q0 d2 1 1.500000 gazby-cross",
            "q2 Q0 d1 2 0.250000 gazby-cross",
            "q1 Q0 d3 1 -0.125000 gazby-cross",
            "q1 Q0 d9 2 -0.125000 gazby-cross",
        ]

    def test_round_trip(self, run, tmp_path):
        path = write_run_file(run, "tag", tmp_path / "run.txt")
        assert parse_run_file(path) == run

    @pytest.mark.parametrize("tag", ["", "two words", "tab\there"])
    def test_tag_must_be_one_word(self, run, tmp_path, tag):
        with pytest.raises(ValidationError, match="run tag"):
            write_run_file(run, tag, tmp_path / "run.txt")

    def test_malformed_line(self, tmp_path):
        path = _write(tmp_path / "run.txt", ["q1 Q0 d1 1 0.5 tag", "q1 Q0 d2 two 0.4 tag"])
        with pytest.raises(FormatError) as excinfo:
            parse_run_file(path)
        assert excinfo.value.line_no == 2

    def test_any_wrong_field_count_is_rejected(self, tmp_path):
        rng = np.random.default_rng(6)
        for trial in range(30):
            good = [f"q1 Q0 d{i} {i + 1} {1.0 - i / 10:.6f} tag" for i in range(int(rng.integers(0, 4)))]
            width = int(rng.choice([1, 2, 3, 4, 5, 7, 8]))
            path = _write(tmp_path / f"{trial}.txt", [*good, " ".join(["1"] * width)])
            with pytest.raises(FormatError) as excinfo:
                parse_run_file(path)
            assert excinfo.value.line_no == len(good) + 1

    def test_increasing_scores_rejected(self, tmp_path):
        path = _write(tmp_path / "run.txt", ["q1 Q0 d1 1 0.1 tag", "q1 Q0 d2 2 0.9 tag"])
        with pytest.raises(FormatError, match="score increases"):
            parse_run_file(path)
