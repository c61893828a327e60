"""Small experiment configurations for end-to-end runs."""

from typing import Any, Dict

import pytest

from netkriging.models.experiment import ExperimentConfig


def small_config(tmp_path, **sections: Dict[str, Any]) -> ExperimentConfig:
    """A short simulated experiment; keyword arguments update the named sections."""
    raw: Dict[str, Any] = {
        "simulation": {"length": 400, "seed": 0},
        "model": {
            "p": 2,
            "window_m": 30,
            "min_iterations": 3,
            "max_iterations": 50,
            "factor_window": 50,
            "baseline_window": 30,
        },
        "run": {
            "scenario": 7,
            "scenarios": [7, 8],
            "seeds": [1],
            "factor_seed": 0,
            "output_dir": str(tmp_path / "reports"),
            "stride": 10,
        },
        "sweep": {"parameter": "gamma", "grid": [0.5, 1.0]},
    }
    for name, values in sections.items():
        raw[name] = {**raw.get(name, {}), **values}
    return ExperimentConfig.model_validate(raw)


@pytest.fixture
def config_factory(tmp_path):
    def build(**sections: Dict[str, Any]) -> ExperimentConfig:
        return small_config(tmp_path, **sections)

    return build
