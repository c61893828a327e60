"""Simple and ordinary kriging predictors."""

from netkriging.kriging.ordinary import (
    estimate_sigma_x,
    ordinary_krige,
    ordinary_weights,
    variogram_matrix,
)
from netkriging.kriging.simple import simple_krige, windowed_moments

__all__ = [
    "estimate_sigma_x",
    "ordinary_krige",
    "ordinary_weights",
    "simple_krige",
    "variogram_matrix",
    "windowed_moments",
]
