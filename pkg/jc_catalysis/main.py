import argparse
import logging
from pathlib import Path
from typing import List, Optional

from . import __spec_version__, __version__
from .api.dependencies import RunContext, get_output_dir, get_threads
from .api.routes import ROUTES
from .utils.config import read_config
from .utils.errors import CatalysisError
from .utils.plotting import plot_csv

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jc_catalysis",
        description="Catalytic nonclassicality of a Jaynes-Cummings cavity",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__} (spec {__spec_version__})",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="run one experiment from a config file")
    run_parser.add_argument("--config", required=True, type=Path, help="flat key=value run configuration")
    run_parser.add_argument("--output", type=Path, help="output directory (default output/<experiment>)")
    run_parser.add_argument("--threads", type=int, help="worker threads (default: THREADS env var or 1)")
    run_parser.add_argument("--plot", action="store_true", help="render a PNG next to the CSV")
    run_parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return parser


def run(args: argparse.Namespace) -> Path:
    config = read_config(args.config)
    context = RunContext(
        config=config,
        output_dir=get_output_dir(config, args.output),
        threads=get_threads(args.threads),
    )
    logger.info("running %s with %d thread(s)", config.experiment.value, context.threads)
    path = ROUTES[config.experiment](context)
    if args.plot:
        plot_csv(path)
    logger.info("finished %s: %s", config.experiment.value, path)
    return path


def main(argv: Optional[List[str]] = None) -> int:
    args = create_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format=LOG_FORMAT,
    )
    try:
        run(args)
    except CatalysisError as exc:
        logger.error("%s: %s", type(exc).__name__, exc.detail)
        return exc.exit_code
    return 0
