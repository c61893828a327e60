"""Synthetic traffic: fractional Gaussian noise, flow synthesis and trace files."""

from netkriging.traffic.fgn import fgn_autocovariance, fgn_correlation, generate_fgn
from netkriging.traffic.io import read_traces, write_traces
from netkriging.traffic.synthesis import (
    add_trend,
    default_trend_amplitude,
    drifting_beta_path,
    full_rank_means,
    inject_mean_shift,
    low_rank_means,
    synthesize_factor_flows,
    synthesize_flows,
)

__all__ = [
    "add_trend",
    "default_trend_amplitude",
    "drifting_beta_path",
    "fgn_autocovariance",
    "fgn_correlation",
    "full_rank_means",
    "generate_fgn",
    "inject_mean_shift",
    "low_rank_means",
    "read_traces",
    "synthesize_factor_flows",
    "synthesize_flows",
    "write_traces",
]
