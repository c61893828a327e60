"""Joint mean–covariance model of the link loads."""

from netkriging.joint.asymptotics import sigma_m2
from netkriging.joint.igls import (
    exact_gls_estimate,
    g_matrix,
    gls_covariance,
    igls_estimate,
    ybar,
)
from netkriging.joint.model import (
    estimate_sigma,
    fit_model,
    plug_in_predict,
    sigma_blocks,
    write_model_fit,
)

__all__ = [
    "estimate_sigma",
    "exact_gls_estimate",
    "fit_model",
    "g_matrix",
    "gls_covariance",
    "igls_estimate",
    "plug_in_predict",
    "sigma_blocks",
    "sigma_m2",
    "write_model_fit",
    "ybar",
]
