"""
Seeded synthetic corpora for desk-scale training and evaluation.

Retrieval corpus: documents are drawn from topics, each topic owning a
small set of words mixed with shared background words. Queries pick a few
words of one topic; a document's grade is the number of distinct query
words it contains, capped at 3.

Gaze corpus: sentences of lexicon words whose fixation duration grows
linearly with word length, split across two datasets with different
duration scales.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from config.settings import (
    SYNTHETIC_CANDIDATES,
    SYNTHETIC_DOCS,
    SYNTHETIC_GAZE_SENTENCES,
    SYNTHETIC_QUERIES,
    SYNTHETIC_TRIPLES,
)
from evaluation.qrels import Judgment, Qrels
from storage.models import CandidateRecord, DocumentRecord, GazeRecord, QueryRecord, TrainingTriple
from storage.tabular import GAZE_CORPUS_HEADER
from storage.trec import write_qrels_file
from tokenizer import SPECIAL_TOKENS, Vocabulary
from utils.errors import ValidationError
from utils.structured_logger import get_logger

logger = get_logger(__name__)

__all__ = ["SyntheticCorpus", "SyntheticCorpusGenerator", "CORPUS_FILES", "write_corpus"]

SYLLABLES = ("ba", "ke", "lo", "mi", "nu", "ra", "si", "to", "vu", "ze", "pa", "do", "fi", "gu", "ha", "jo")
PLURAL_PIECE = "##s"

CORPUS_FILES = {
    "vocab": "vocab.txt",
    "collection": "collection.tsv",
    "queries": "queries.tsv",
    "triples": "triples.train.tsv",
    "dev_triples": "triples.dev.tsv",
    "candidates": "candidates.tsv",
    "qrels": "qrels.txt",
    "gaze_corpus": "gaze.tsv",
}

# (dataset id, ms per character, base ms)
GAZE_DATASETS = (("synth-a", 40.0, 80.0), ("synth-b", 25.0, 150.0))


@dataclass
class SyntheticCorpus:
    vocab: Vocabulary
    documents: list[DocumentRecord]
    queries: list[QueryRecord]
    qrels: Qrels
    candidates: list[CandidateRecord]
    triples: list[TrainingTriple]
    dev_triples: list[TrainingTriple]
    gaze_records: list[GazeRecord] = field(default_factory=list)

    def document_texts(self) -> dict[str, str]:
        return {d.docid: d.text for d in self.documents}

    def query_texts(self) -> dict[str, str]:
        return {q.qid: q.text for q in self.queries}


class SyntheticCorpusGenerator:
    """Deterministic generator; the same seed always yields the same corpus."""

    def __init__(
        self,
        seed: int = 13,
        n_docs: int = SYNTHETIC_DOCS,
        n_queries: int = SYNTHETIC_QUERIES,
        n_candidates: int = SYNTHETIC_CANDIDATES,
        n_triples: int = SYNTHETIC_TRIPLES,
        n_dev_triples: int = 200,
        n_gaze_sentences: int = SYNTHETIC_GAZE_SENTENCES,
        n_topics: int = 25,
        topic_words: int = 10,
        background_words: int = 80,
        doc_length: int = 24,
        query_terms: int = 3,
        topic_share: float = 0.5,
    ):
        if n_candidates > n_docs:
            raise ValidationError(f"{n_candidates} candidates per query exceed {n_docs} documents")
        if query_terms > topic_words:
            raise ValidationError("queries cannot use more terms than a topic owns")
        self.seed = seed
        self.n_docs = n_docs
        self.n_queries = n_queries
        self.n_candidates = n_candidates
        self.n_triples = n_triples
        self.n_dev_triples = n_dev_triples
        self.n_gaze_sentences = n_gaze_sentences
        self.n_topics = n_topics
        self.topic_words = topic_words
        self.background_words = background_words
        self.doc_length = doc_length
        self.query_terms = query_terms
        self.topic_share = topic_share

    # ---- building blocks ----

    def _lexicon(self, rng: np.random.Generator, size: int) -> list[str]:
        words: list[str] = []
        seen: set[str] = set()
        while len(words) < size:
            count = int(rng.integers(1, 5))
            word = "".join(SYLLABLES[i] for i in rng.integers(0, len(SYLLABLES), size=count))
            if word not in seen:
                seen.add(word)
                words.append(word)
        return words

    def _document_words(self, rng, topic: list[str], background: list[str]) -> list[str]:
        words = []
        for _ in range(self.doc_length):
            pool = topic if rng.random() < self.topic_share else background
            word = pool[int(rng.integers(len(pool)))]
            if rng.random() < 0.1:
                word += "s"  # tokenizes as word + ##s
            words.append(word)
        return words

    def _query_words(self, rng, topic: list[str]) -> list[str]:
        picks = rng.choice(len(topic), size=self.query_terms, replace=False)
        return [topic[i] for i in sorted(picks)]

    @staticmethod
    def _grade(query_words: list[str], doc_words: set[str]) -> int:
        return min(3, sum(1 for w in query_words if w in doc_words))

    def _triples(self, rng, count, topics, doc_words, documents) -> list[TrainingTriple]:
        triples = []
        while len(triples) < count:
            topic = topics[int(rng.integers(len(topics)))]
            query = self._query_words(rng, topic)
            grades = np.array([self._grade(query, words) for words in doc_words])
            positives = np.flatnonzero(grades >= 2)
            negatives = np.flatnonzero(grades == 0)
            if positives.size == 0 or negatives.size == 0:
                continue
            pos = documents[int(rng.choice(positives))]
            neg = documents[int(rng.choice(negatives))]
            triples.append(TrainingTriple(" ".join(query), pos.text, neg.text))
        return triples

    def _gaze_records(self, rng, lexicon: list[str]) -> list[GazeRecord]:
        records = []
        for s in range(self.n_gaze_sentences):
            dataset_id, per_char, base = GAZE_DATASETS[s % len(GAZE_DATASETS)]
            length = int(rng.integers(3, 9))
            for i in rng.integers(0, len(lexicon), size=length):
                word = lexicon[int(i)]
                records.append(GazeRecord(dataset_id, f"s{s}", word, base + per_char * len(word)))
        return records

    # ---- public ----

    def generate(self) -> SyntheticCorpus:
        rng = np.random.default_rng(self.seed)
        lexicon = self._lexicon(rng, self.n_topics * self.topic_words + self.background_words)
        topics = [
            lexicon[t * self.topic_words : (t + 1) * self.topic_words] for t in range(self.n_topics)
        ]
        background = lexicon[self.n_topics * self.topic_words :]
        vocab = Vocabulary.from_tokens(list(SPECIAL_TOKENS) + sorted(lexicon) + [PLURAL_PIECE])

        documents = []
        doc_words = []
        for i in range(self.n_docs):
            words = self._document_words(rng, topics[i % self.n_topics], background)
            documents.append(DocumentRecord(f"d{i}", " ".join(words)))
            doc_words.append({w[:-1] if w.endswith("s") and w[:-1] in lexicon else w for w in words})

        queries, judgments, candidates = [], [], []
        for q in range(self.n_queries):
            qid = f"q{q}"
            query = self._query_words(rng, topics[int(rng.integers(self.n_topics))])
            queries.append(QueryRecord(qid, " ".join(query)))
            grades = np.array([self._grade(query, words) for words in doc_words])
            matching = [int(i) for i in rng.permutation(np.flatnonzero(grades > 0))][: self.n_candidates // 2]
            rest = [int(i) for i in rng.permutation(np.flatnonzero(grades == 0))]
            pool = matching + rest[: self.n_candidates - len(matching)]
            for rank, i in enumerate(rng.permutation(pool), start=1):
                candidates.append(CandidateRecord(qid, documents[int(i)].docid, rank))
                judgments.append(Judgment(qid, documents[int(i)].docid, int(grades[int(i)])))

        triples = self._triples(rng, self.n_triples, topics, doc_words, documents)
        dev_triples = self._triples(rng, self.n_dev_triples, topics, doc_words, documents)
        gaze_records = self._gaze_records(rng, lexicon)

        logger.info(
            f"Generated {len(documents)} documents, {len(queries)} queries, {len(triples)} triples, "
            f"{self.n_gaze_sentences} gaze sentences (seed {self.seed})"
        )
        return SyntheticCorpus(
            vocab=vocab,
            documents=documents,
            queries=queries,
            qrels=Qrels(judgments),
            candidates=candidates,
            triples=triples,
            dev_triples=dev_triples,
            gaze_records=gaze_records,
        )


def write_corpus(corpus: SyntheticCorpus, out_dir: str | Path) -> dict[str, Path]:
    """Write every corpus file under out_dir; returns the path per file key."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {key: out / name for key, name in CORPUS_FILES.items()}

    def write_lines(path: Path, lines) -> None:
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            for line in lines:
                handle.write(line + "\n")

    corpus.vocab.save(paths["vocab"])
    write_lines(paths["collection"], (f"{d.docid}\t{d.text}" for d in corpus.documents))
    write_lines(paths["queries"], (f"{q.qid}\t{q.text}" for q in corpus.queries))
    write_lines(paths["triples"], (f"{t.query}\t{t.positive}\t{t.negative}" for t in corpus.triples))
    write_lines(paths["dev_triples"], (f"{t.query}\t{t.positive}\t{t.negative}" for t in corpus.dev_triples))
    write_lines(paths["candidates"], (f"{c.qid}\t{c.docid}\t{c.rank}" for c in corpus.candidates))
    write_qrels_file(corpus.qrels, paths["qrels"])
    write_lines(
        paths["gaze_corpus"],
        ["\t".join(GAZE_CORPUS_HEADER)]
        + [f"{r.dataset_id}\t{r.sentence_id}\t{r.token}\t{r.fixation_ms:g}" for r in corpus.gaze_records],
    )
    logger.info(f"Wrote synthetic corpus to {out}")
    return paths
