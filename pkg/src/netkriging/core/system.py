"""Main network prediction system interface."""

import time
from pathlib import Path
from typing import Any, Dict, List, Optional

from netkriging import __version__
from netkriging.core.config import settings
from netkriging.core.logging import get_logger, setup_logging
from netkriging.evaluation.runner import ExperimentRunner
from netkriging.models.experiment import ExperimentConfig, load_experiment_config


class NetworkPredictionSystem:
    """
    Entry point for running experiments.

    Wraps an :class:`ExperimentRunner` with logging setup and run timing.
    """

    def __init__(
        self,
        config: Optional[ExperimentConfig] = None,
        output_dir: Optional[Path] = None,
        log_level: Optional[str] = None,
    ):
        """
        Initialize the system.

        Args:
            config: Experiment configuration; every section at its default when omitted
            output_dir: Report directory overriding ``run.output_dir``
            log_level: Overrides ``settings.log_level``
        """
        setup_logging(level=log_level)
        self.logger = get_logger("network_prediction_system")
        self.config = config or ExperimentConfig()
        self.runner = ExperimentRunner(self.config, output_dir)

        self.logger.info(
            "system_initialized",
            version=__version__,
            output_dir=str(self.runner.output_dir),
            max_workers=settings.max_workers,
        )

    @classmethod
    def from_file(
        cls, path: Path, output_dir: Optional[Path] = None, log_level: Optional[str] = None
    ) -> "NetworkPredictionSystem":
        """Build the system from a TOML experiment file."""
        return cls(load_experiment_config(path), output_dir, log_level)

    def run(self, verb: str) -> List[Path]:
        """
        Run one experiment verb.

        Args:
            verb: One of ``netkriging.evaluation.VERBS``

        Returns:
            Paths of the written reports, run ledger last

        Example:
            ```python
            system = NetworkPredictionSystem.from_file(Path("config/experiment.toml"))
            for path in system.run("evaluate"):
                print(path)
            ```
        """
        start = time.perf_counter()
        try:
            written = self.runner.run(verb)
        except Exception as e:
            self.logger.error("run_failed", verb=verb, error=str(e))
            raise

        self.logger.info(
            "run_finished",
            verb=verb,
            files=[str(path) for path in written],
            duration_seconds=round(time.perf_counter() - start, 3),
        )
        return written

    def get_system_status(self) -> Dict[str, Any]:
        """State of every stage of the runner."""
        stages = [
            value for value in vars(self.runner).values() if hasattr(value, "get_state")
        ]
        return {
            "version": __version__,
            "output_dir": str(self.runner.output_dir),
            "stages": {stage.name: stage.get_state() for stage in stages},
        }
