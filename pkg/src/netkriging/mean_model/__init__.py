"""PCA factor model for flow means."""

from netkriging.mean_model.pca import (
    energy_captured,
    fit_factor_matrix,
    projection_residual,
    read_factor_matrix,
    window_means,
    write_factor_matrix,
)

__all__ = [
    "energy_captured",
    "fit_factor_matrix",
    "projection_residual",
    "read_factor_matrix",
    "window_means",
    "write_factor_matrix",
]
