import pytest

from evaluation import binarize_qrels
from services.synthetic_corpus import CORPUS_FILES, GAZE_DATASETS, SyntheticCorpusGenerator, write_corpus
from storage.tabular import group_candidates, load_gaze_corpus, load_tabular
from storage.trec import load_qrels_file
from tokenizer import Vocabulary, wordpiece_tokenize
from utils.errors import ValidationError

SMALL = {"n_docs": 30, "n_queries": 4, "n_candidates": 8, "n_triples": 6, "n_dev_triples": 3, "n_gaze_sentences": 6}


def test_same_seed_same_corpus():
    a = SyntheticCorpusGenerator(seed=4, **SMALL).generate()
    b = SyntheticCorpusGenerator(seed=4, **SMALL).generate()
    assert a.documents == b.documents
    assert a.triples == b.triples
    assert list(a.qrels) == list(b.qrels)
    assert a.gaze_records == b.gaze_records


def test_seed_changes_corpus():
    a = SyntheticCorpusGenerator(seed=4, **SMALL).generate()
    b = SyntheticCorpusGenerator(seed=5, **SMALL).generate()
    assert a.documents != b.documents


def test_every_query_has_judged_candidates(tiny_corpus):
    grouped = group_candidates(tiny_corpus.candidates)
    assert sorted(grouped) == sorted(q.qid for q in tiny_corpus.queries)
    for qid, docids in grouped.items():
        assert len(docids) == 10
        assert len(set(docids)) == 10
        assert set(docids) == set(tiny_corpus.qrels.grades(qid))


def test_queries_have_relevant_candidates(tiny_corpus):
    binary = binarize_qrels(tiny_corpus.qrels)
    assert any(binary.relevant_for(q.qid) for q in tiny_corpus.queries)


def test_text_is_covered_by_vocabulary(tiny_corpus):
    for document in tiny_corpus.documents[:10]:
        assert "[UNK]" not in wordpiece_tokenize(document.text, tiny_corpus.vocab)
    for triple in tiny_corpus.triples:
        assert "[UNK]" not in wordpiece_tokenize(triple.query, tiny_corpus.vocab)


def test_triples_pair_distinct_passages(tiny_corpus):
    assert len(tiny_corpus.triples) == 16
    assert len(tiny_corpus.dev_triples) == 8
    assert all(t.positive != t.negative for t in tiny_corpus.triples)


def test_fixation_grows_with_word_length(tiny_corpus):
    scale = {dataset: (per_char, base) for dataset, per_char, base in GAZE_DATASETS}
    for record in tiny_corpus.gaze_records:
        per_char, base = scale[record.dataset_id]
        assert record.fixation_ms == base + per_char * len(record.token)
    assert {r.dataset_id for r in tiny_corpus.gaze_records} == set(scale)


def test_written_files_load_back(tiny_corpus, tmp_path):
    paths = write_corpus(tiny_corpus, tmp_path / "corpus")
    assert set(paths) == set(CORPUS_FILES)
    assert Vocabulary.load(paths["vocab"]) == tiny_corpus.vocab
    assert load_tabular(paths["collection"], "collection") == tiny_corpus.documents
    assert load_tabular(paths["queries"], "queries") == tiny_corpus.queries
    assert load_tabular(paths["triples"], "triples") == tiny_corpus.triples
    assert load_tabular(paths["candidates"], "candidates") == tiny_corpus.candidates
    assert list(load_qrels_file(paths["qrels"])) == list(tiny_corpus.qrels)
    assert load_gaze_corpus(paths["gaze_corpus"]) == tiny_corpus.gaze_records


@pytest.mark.parametrize(
    "kwargs",
    [{"n_docs": 5, "n_candidates": 6}, {"topic_words": 2, "query_terms": 3}],
)
def test_invalid_sizes(kwargs):
    with pytest.raises(ValidationError):
        SyntheticCorpusGenerator(**kwargs)
