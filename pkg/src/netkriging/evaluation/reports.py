"""Delimited-text report files."""

import json
from pathlib import Path
from typing import Optional

import pandas as pd

from netkriging.core.config import settings
from netkriging.models.evaluation import (
    AnomalyReport,
    EvaluationTable,
    GammaCalibration,
    MisspecificationTable,
    PredictionRun,
    SweepReport,
)
from netkriging.models.topology import RoutingMatrix


def _write(frame: pd.DataFrame, path: Path, float_format: Optional[str]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(
        path,
        index=False,
        float_format=float_format or settings.report_float_format,
        lineterminator="\n",
    )
    return path


def write_prediction_run(
    run: PredictionRun, path: Path, float_format: Optional[str] = None
) -> Path:
    """One row per scored bin with predicted and actual load of every target link."""
    columns = {"time": run.times}
    for row, link_id in enumerate(run.scenario.unobserved):
        columns[f"link{link_id}_predicted"] = run.predicted[row]
        columns[f"link{link_id}_actual"] = run.actual[row]
    return _write(pd.DataFrame(columns), path, float_format)


def write_evaluation_table(
    table: EvaluationTable, path: Path, float_format: Optional[str] = None
) -> Path:
    """ReMSE with one row per scenario and one column per method."""
    frame = pd.DataFrame(
        table.as_array(), columns=[method.value for method in table.methods]
    )
    frame.insert(0, "scenario", list(table.scenario_ids))
    return _write(frame, path, float_format)


def write_sweep_report(
    report: SweepReport, path: Path, float_format: Optional[str] = None
) -> Path:
    """ReMSE with one row per scenario and one column per grid value."""
    frame = pd.DataFrame(
        [list(row) for row in report.remse],
        columns=[f"{report.parameter.value}={value:g}" for value in report.grid],
    )
    frame.insert(0, "scenario", list(report.scenario_ids))
    return _write(frame, path, float_format)


def write_misspecification_table(
    table: MisspecificationTable, path: Path, float_format: Optional[str] = None
) -> Path:
    """Baseline MSE then model MSE per window, one row per regime."""
    records = []
    for row in table.rows:
        record = {"regime": row.regime, "baseline": row.baseline_mse}
        record.update({f"m={m}": row.model_mse[m] for m in table.windows})
        records.append(record)
    return _write(pd.DataFrame.from_records(records), path, float_format)


def write_gamma_calibration(
    calibration: GammaCalibration, path: Path, float_format: Optional[str] = None
) -> Path:
    frame = pd.DataFrame(
        [
            {
                "gamma_hat": calibration.gamma_hat,
                "intercept": calibration.intercept,
                "r_squared": calibration.r_squared,
                "window_start": calibration.window[0],
                "window_stop": calibration.window[1],
                "flows": calibration.n_flows,
            }
        ]
    )
    return _write(frame, path, float_format)


def write_anomaly_report(
    report: AnomalyReport,
    routing: RoutingMatrix,
    path: Path,
    float_format: Optional[str] = None,
) -> Path:
    """
    Per-link chart summary, plus a JSON file of implicated flows next to it.

    The JSON file shares the stem of ``path`` with a ``-flows.json`` suffix.
    """
    records = []
    for chart in report.charts:
        records.append(
            {
                "link": chart.link_id,
                "predictors": " ".join(str(k) for k in chart.predictors),
                "hurst": chart.hurst,
                "sigma2": chart.sigma2,
                "lrd_limit": chart.chart.limit,
                "iid_limit": chart.iid_chart.limit,
                "pre_onset_rate": chart.pre_onset_rate(report.onset),
                "post_onset_rate": chart.post_onset_rate(report.onset),
                "iid_pre_onset_rate": chart.pre_onset_rate(report.onset, lrd=False),
                "iid_post_onset_rate": chart.post_onset_rate(report.onset, lrd=False),
                "alarming": int(chart.alarming),
            }
        )
    _write(pd.DataFrame.from_records(records), path, float_format)

    summary = report.summary()
    summary["implicated_routes"] = [routing.label(k) for k in sorted(report.implicated_flows)]
    flows_path = path.with_name(f"{path.stem}-flows.json")
    flows_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
