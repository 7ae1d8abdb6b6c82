import argparse
import sys

from config.environment import ENVIRONMENT, LOG_FILE_PATH, LOG_TO_FILE
from config.run_config import RANKER_MODES, load_run_config
from core.orchestrator import PipelineOrchestrator
from utils.errors import NumericalError, ValidationError
from utils.structured_logger import get_logger, setup_logging, visual_header

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2

COMMANDS = ("generate-synthetic", "train-gaze", "train-ranker", "rerank", "evaluate", "compare", "gradcheck")
_ALL_MODES = sorted({mode for modes in RANKER_MODES.values() for mode in modes})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gazby", description="Gaze-aware passage re-ranking")
    sub = parser.add_subparsers(dest="command", required=True)

    for command in COMMANDS:
        cmd = sub.add_parser(command)
        cmd.add_argument("--config", help="key=value run configuration file")
        cmd.add_argument("--seed", type=int)
        cmd.add_argument("--data-dir", dest="data_dir")
        if command in ("train-ranker", "rerank"):
            cmd.add_argument("--ranker", choices=sorted(RANKER_MODES))
            cmd.add_argument("--mode", choices=_ALL_MODES)
            cmd.add_argument("--gaze-checkpoint", dest="gaze_checkpoint")
            cmd.add_argument("--ranker-checkpoint", dest="ranker_checkpoint")
        if command == "train-gaze":
            cmd.add_argument("--gaze-checkpoint", dest="gaze_checkpoint")
            cmd.add_argument("--folds", type=int)
            cmd.add_argument("--epochs", dest="gaze_epochs", type=int)
        if command == "train-ranker":
            cmd.add_argument("--epochs", type=int)
            cmd.add_argument("--max-steps", dest="max_steps", type=int)
            cmd.add_argument("--freeze-gaze", dest="freeze_gaze", action="store_true", default=None)
        if command == "rerank":
            cmd.add_argument("--tag")
            cmd.add_argument("--out", dest="run_file", help="run file to write")
        if command in ("evaluate", "compare"):
            cmd.add_argument("--k", type=int)
            cmd.add_argument("--gain", choices=("exp", "linear"))
            cmd.add_argument("--qrels")
        if command == "evaluate":
            cmd.add_argument("run", nargs="?", help="run file (defaults to the configured run_file)")
        if command == "compare":
            cmd.add_argument("runs", nargs="+", help="run files; the first is the baseline unless --baseline")
            cmd.add_argument("--baseline")
    return parser


def run_command(args: argparse.Namespace) -> None:
    skip = {"command", "config", "run", "runs", "baseline"}
    overrides = {key: value for key, value in vars(args).items() if key not in skip}
    config = load_run_config(args.config, **overrides)
    orchestrator = PipelineOrchestrator(config)

    if args.command == "generate-synthetic":
        orchestrator.generate_synthetic()
    elif args.command == "train-gaze":
        orchestrator.train_gaze()
    elif args.command == "train-ranker":
        orchestrator.train_ranker()
    elif args.command == "rerank":
        orchestrator.rerank()
    elif args.command == "evaluate":
        orchestrator.evaluate(args.run)
    elif args.command == "compare":
        orchestrator.compare(args.runs, args.baseline)
    else:
        orchestrator.gradcheck()


def main(argv: list[str] | None = None) -> int:
    """
    Main entry point - CLI pipeline orchestration

    Returns:
        int: Exit code (0 for success, 1 for invalid input or interruption,
             2 for numerical failure)
    """
    setup_logging(LOG_TO_FILE, LOG_FILE_PATH)
    logger = get_logger(__name__)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code else EXIT_OK

    try:
        visual_header("GazBy re-ranking", f"{args.command} in {ENVIRONMENT.upper()} mode")
        run_command(args)
        return EXIT_OK

    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL

    except (ValidationError, OSError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INVALID

    except KeyboardInterrupt:
        logger.warning("Pipeline interrupted by user using: Ctrl+C")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
