"""Command-line entry point: ``netkriging <verb> --config FILE``."""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from netkriging.core.errors import ConfigurationError, InvalidInputError, NumericalError
from netkriging.core.system import NetworkPredictionSystem
from netkriging.evaluation.runner import VERBS
from netkriging.models.experiment import ExperimentConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netkriging",
        description="Predict unobserved link loads and chart anomalous flows.",
    )
    parser.add_argument("verb", choices=VERBS, help="experiment to run")
    parser.add_argument(
        "--config",
        type=Path,
        default=None,
        help="TOML experiment file; every section takes its default when omitted",
    )
    parser.add_argument(
        "--output-dir", type=Path, default=None, help="overrides run.output_dir"
    )
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        type=str.upper,
        help="overrides NETKRIGING_LOG_LEVEL",
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one verb and print the written files, one per line."""
    args = build_parser().parse_args(argv)

    try:
        if args.config is not None:
            system = NetworkPredictionSystem.from_file(
                args.config, args.output_dir, args.log_level
            )
        else:
            system = NetworkPredictionSystem(ExperimentConfig(), args.output_dir, args.log_level)
        written: List[Path] = system.run(args.verb)
    except NumericalError as e:
        print(f"netkriging: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigurationError, InvalidInputError, ValidationError, FileNotFoundError) as e:
        print(f"netkriging: {e}", file=sys.stderr)
        return EXIT_USAGE

    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
