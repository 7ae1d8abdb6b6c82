import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path

from config.environment import DEBUG, ENVIRONMENT
from config.ranker_configs import uses_gaze
from config.run_config import RunConfig
from core.component_factory import ComponentFactory
from evaluation import MetricReport, RankedRun, VariantResult, compare_variants, evaluate_run
from gaze import (
    CrossValidationResult,
    GazeExample,
    GazePredictor,
    GazeTrainingResult,
    cross_validate_gaze,
    standardize_fixations,
    train_gaze,
)
from ranker import BaseRanker, IdfTable, RankerTrainingConfig, RankerTrainingResult, train_ranker
from services.gradcheck_suite import GradcheckResult, run_gradcheck_suite
from services.idf_builder import build_idf_table
from services.synthetic_corpus import SyntheticCorpusGenerator, write_corpus
from storage.checkpoint import save_checkpoint
from storage.models import TabularKind
from storage.tabular import group_candidates, load_gaze_corpus, load_tabular
from storage.trec import load_qrels_file, parse_run_file, write_run_file
from tokenizer import Vocabulary
from utils.errors import NumericalError, ValidationError
from utils.structured_logger import (
    get_logger,
    visual_metric_summary,
    visual_status,
    visual_training_summary,
)


class PipelineOrchestrator:
    """Runs every CLI pipeline from one RunConfig, loading inputs from the configured files."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.logger = get_logger(__name__)
        self.component_factory = ComponentFactory(config)

    # ---- inputs ----

    def load_vocab(self) -> Vocabulary:
        self.config.require("vocab")
        vocab = Vocabulary.load(self.config.path("vocab"))
        visual_status(f"Vocabulary of {len(vocab)} pieces", "loaded")
        return vocab

    def load_idf(self, vocab: Vocabulary) -> IdfTable | None:
        """Document frequencies over the collection, only for tf-idf scoring."""
        if self.config.mode != "tfidf":
            return None
        self.config.require("collection")
        return build_idf_table(load_tabular(self.config.path("collection"), TabularKind.COLLECTION), vocab)

    def load_gaze_examples(self, vocab: Vocabulary) -> list[GazeExample]:
        self.config.require("gaze_corpus")
        records = load_gaze_corpus(self.config.path("gaze_corpus"))
        return standardize_fixations(records, vocab, self.config.gaze_pad_length)

    def load_gaze_for_mode(self, vocab: Vocabulary) -> GazePredictor | None:
        if not uses_gaze(self.config.mode):
            return None
        self.config.require("gaze_checkpoint")
        return self.component_factory.load_gaze_model(vocab)

    # ---- pipelines ----

    def generate_synthetic(self, out_dir: str | Path | None = None) -> dict[str, Path]:
        """Write a seeded synthetic retrieval and gaze corpus under data_dir."""
        out_dir = Path(out_dir or self.config.data_dir)
        corpus = SyntheticCorpusGenerator(seed=self.config.seed).generate()
        paths = write_corpus(corpus, out_dir)
        visual_status(f"Synthetic corpus written to {out_dir}", "written")
        return paths

    def cross_validate_gaze(self, vocab: Vocabulary, examples: list[GazeExample]) -> CrossValidationResult:
        c = self.config
        result = cross_validate_gaze(
            examples,
            lambda fold: self.component_factory.create_gaze_model(vocab, seed=c.seed + fold),
            k=c.folds,
            epochs=c.gaze_epochs,
            lr=c.gaze_lr,
            batch_size=c.gaze_batch_size,
            seed=c.seed,
            workers=c.workers,
        )
        self.logger.info(f"{c.folds}-fold gaze MSE {result.mean_mse:.6f} ± {result.std_mse:.6f}")
        return result

    def train_gaze(self) -> GazeTrainingResult:
        """Fit the gaze predictor on the whole corpus and checkpoint it."""
        c = self.config
        vocab = self.load_vocab()
        examples = self.load_gaze_examples(vocab)
        if c.folds >= 2:
            self.cross_validate_gaze(vocab, examples)

        model = self.component_factory.create_gaze_model(vocab)
        result = train_gaze(examples, model, c.gaze_epochs, c.gaze_lr, c.gaze_batch_size, c.seed)
        save_checkpoint(model, c.path("gaze_checkpoint"))
        visual_status(f"Gaze predictor checkpoint written to {c.path('gaze_checkpoint')}", "trained")

        first = result.epoch_losses[0] if result.epoch_losses else result.final_mse
        visual_training_summary("Gaze predictor", result.steps, first, result.final_mse)
        return result

    def train_ranker(self) -> RankerTrainingResult:
        """Train the configured ranker variant on training triples and checkpoint it."""
        c = self.config
        c.require("triples")
        vocab = self.load_vocab()
        gaze = self.load_gaze_for_mode(vocab)
        model = self.component_factory.create_ranker(vocab, gaze=gaze, idf=self.load_idf(vocab))

        triples = load_tabular(c.path("triples"), TabularKind.TRIPLES)
        dev_path = c.path("dev_triples")
        dev_triples = load_tabular(dev_path, TabularKind.TRIPLES) if dev_path.is_file() else None

        training = RankerTrainingConfig(
            epochs=c.epochs,
            batch_size=c.batch_size,
            lr=c.lr,
            adam_eps=c.adam_eps,
            grad_clip=c.grad_clip,
            freeze_gaze=c.freeze_gaze,
            max_steps=c.max_steps,
            seed=c.seed,
        )
        result = train_ranker(model, triples, training, dev_triples)
        save_checkpoint(model, c.path("ranker_checkpoint"))
        visual_status(f"{c.ranker} ranker checkpoint written to {c.path('ranker_checkpoint')}", "trained")

        best = max(result.validation) if result.validation else None
        if result.losses:
            visual_training_summary(
                f"{c.ranker} ranker ({c.mode})", result.steps, result.losses[0], result.losses[-1], best
            )
        return result

    def load_ranker(self, vocab: Vocabulary) -> BaseRanker:
        self.config.require("ranker_checkpoint")
        gaze = None
        if uses_gaze(self.config.mode) and self.config.path("gaze_checkpoint").is_file():
            gaze = self.component_factory.load_gaze_model(vocab)
        return self.component_factory.load_ranker(vocab, gaze=gaze, idf=self.load_idf(vocab))

    def score_candidates(
        self,
        model: BaseRanker,
        queries: dict[str, str],
        documents: dict[str, str],
        candidates: dict[str, list[str]],
    ) -> RankedRun:
        """Score every (query, candidate) pair concurrently and rank per query."""
        pairs = []
        for qid, docids in candidates.items():
            if qid not in queries:
                raise ValidationError(f"candidates reference unknown query {qid}")
            for docid in docids:
                if docid not in documents:
                    raise ValidationError(f"candidates of {qid} reference unknown document {docid}")
                pairs.append((qid, docid))

        scores: dict[str, list[tuple[str, float]]] = {qid: [] for qid in candidates}
        model.eval()
        with ThreadPoolExecutor(max_workers=self.config.workers) as executor:
            future_to_pair = {
                executor.submit(model.score, queries[qid], documents[docid]): (qid, docid) for qid, docid in pairs
            }
            for future in as_completed(future_to_pair):
                qid, docid = future_to_pair[future]
                score = future.result()
                if not math.isfinite(score):
                    raise NumericalError(f"non-finite score for {qid} {docid}")
                if DEBUG:
                    self.logger.debug(f"{qid} {docid}: {score:.6f}")
                scores[qid].append((docid, score))

        run = RankedRun.from_scores(scores)
        self.logger.info(f"Scored {len(pairs)} candidates for {len(run)} queries")
        return run

    def rerank(self) -> RankedRun:
        """Re-rank the candidate file with a trained ranker and write a TREC run."""
        c = self.config
        c.require("queries", "collection", "candidates")
        vocab = self.load_vocab()
        model = self.load_ranker(vocab)

        queries = {q.qid: q.text for q in load_tabular(c.path("queries"), TabularKind.QUERIES)}
        documents = {d.docid: d.text for d in load_tabular(c.path("collection"), TabularKind.COLLECTION)}
        candidates = group_candidates(load_tabular(c.path("candidates"), TabularKind.CANDIDATES))

        run = self.score_candidates(model, queries, documents, candidates)
        path = write_run_file(run, c.tag, c.path("run_file"))
        visual_status(f"Run {c.tag} written to {path}", "written")
        return run

    def evaluate(self, run_path: str | Path | None = None) -> MetricReport:
        """P@k, nDCG@k, MAP and RR of one run file against the qrels."""
        c = self.config
        c.require("qrels")
        run_path = Path(run_path) if run_path is not None else c.path("run_file")
        if not run_path.is_file():
            raise ValidationError(f"run file not found: {run_path}")
        report = evaluate_run(parse_run_file(run_path), load_qrels_file(c.path("qrels")), c.k, c.gain)
        visual_metric_summary(f"{run_path.name} ({ENVIRONMENT})", compare_variants({run_path.stem: report}, run_path.stem))
        return report

    def compare(self, run_paths: list[str | Path], baseline: str | None = None) -> list[VariantResult]:
        """Evaluate several runs and report relative change against a baseline run."""
        c = self.config
        c.require("qrels")
        if not run_paths:
            raise ValidationError("no run files to compare")
        qrels = load_qrels_file(c.path("qrels"))
        reports: dict[str, MetricReport] = {}
        for run_path in map(Path, run_paths):
            if run_path.stem in reports:
                raise ValidationError(f"two runs are named {run_path.stem}")
            reports[run_path.stem] = evaluate_run(parse_run_file(run_path), qrels, c.k, c.gain)

        rows = compare_variants(reports, baseline or Path(run_paths[0]).stem)
        visual_metric_summary(f"Variants vs {rows[0].name}", rows)
        return rows

    def gradcheck(self) -> list[GradcheckResult]:
        """Run the gradient suite; any check over its tolerance is a numerical failure."""
        results = run_gradcheck_suite(self.config.seed)
        for result in results:
            status = "passed" if result.passed else "failed"
            visual_status(f"{result.name}: {result.max_error:.2e} (< {result.tolerance:g})", status)
        failed = [r.name for r in results if not r.passed]
        if failed:
            raise NumericalError(f"gradient checks failed: {', '.join(failed)}")
        return results
