"""Joint mean–covariance model configuration, estimates and fits."""

from typing import Any, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from netkriging.core.config import settings
from netkriging.models.arrays import ArrayModel, frozen_array, psd_violation
from netkriging.models.factors import FactorMatrix
from netkriging.models.kriging import PSD_TOLERANCE
from netkriging.models.topology import ObservationScenario


class ModelConfig(BaseModel):
    """Calibration parameters of the network-specific model."""

    model_config = ConfigDict(frozen=True)

    p: int = Field(default_factory=lambda: settings.default_p, ge=1)
    gamma: float = Field(default_factory=lambda: settings.default_gamma, gt=0.0)
    window_m: int = Field(default_factory=lambda: settings.default_window_m, ge=1)
    convergence_eps: float = Field(default_factory=lambda: settings.convergence_eps, gt=0.0)
    min_iterations: int = Field(default_factory=lambda: settings.min_iterations, ge=1)
    max_iterations: int = Field(default_factory=lambda: settings.max_iterations, ge=1)
    strict_positivity: bool = True

    @model_validator(mode="after")
    def _check_iterations(self) -> "ModelConfig":
        if self.min_iterations > self.max_iterations:
            raise ValueError("min_iterations must not exceed max_iterations")
        return self


class BetaEstimate(ArrayModel):
    """Iterated-GLS estimate of the factor loadings."""

    beta: np.ndarray
    iterations_run: int = Field(ge=1)
    converged: bool
    used_pseudoinverse: bool = False
    trajectory: np.ndarray

    @field_validator("beta", mode="before")
    @classmethod
    def _coerce_beta(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=1, name="beta")

    @field_validator("trajectory", mode="before")
    @classmethod
    def _coerce_trajectory(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=2, name="trajectory")

    @model_validator(mode="after")
    def _check_trajectory(self) -> "BetaEstimate":
        if self.trajectory.shape != (self.iterations_run, self.beta.shape[0]):
            raise ValueError("trajectory must hold one row per iterate")
        return self

    def iterate(self, k: int) -> np.ndarray:
        """The k-th iterate (1-based), as the estimation algorithm numbers them."""
        return self.trajectory[k - 1].copy()


class SigmaBlocks(ArrayModel):
    """Partition of Σ(β) = A diag(|Fβ|^{2γ}) Aᵗ by (observed, unobserved)."""

    oo: np.ndarray
    ou: np.ndarray
    uo: np.ndarray
    uu: np.ndarray

    @field_validator("oo", "ou", "uo", "uu", mode="before")
    @classmethod
    def _coerce_block(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=2, name="covariance block")

    def assemble(self) -> np.ndarray:
        """Full matrix in (O, U) ordering."""
        return np.block([[self.oo, self.ou], [self.uo, self.uu]])


class ModelFit(ArrayModel):
    """Fitted network-specific model at one prediction time."""

    beta: BetaEstimate
    sigma2_hat: float = Field(ge=0.0)
    factors: FactorMatrix
    gamma: float = Field(gt=0.0)
    scenario: ObservationScenario
    blocks: SigmaBlocks
    mean_observed: np.ndarray
    mean_unobserved: np.ndarray

    @field_validator("mean_observed", "mean_unobserved", mode="before")
    @classmethod
    def _coerce_means(cls, value: Any) -> np.ndarray:
        return frozen_array(value, ndim=1, name="modelled link mean")

    @model_validator(mode="after")
    def _check_blocks(self) -> "ModelFit":
        sigma = self.blocks.assemble()
        scale = max(float(np.max(np.abs(sigma), initial=0.0)), 1.0)
        if np.max(np.abs(sigma - sigma.T), initial=0.0) > PSD_TOLERANCE * scale:
            raise ValueError("assembled Σ(β) is not symmetric")
        if psd_violation(sigma) > PSD_TOLERANCE:
            raise ValueError("assembled Σ(β) is not positive semidefinite")
        return self

    def to_record(self, factor_file: Optional[str] = None) -> "ModelFitRecord":
        """Serializable summary of the fit."""
        return ModelFitRecord(
            beta=[float(b) for b in self.beta.beta],
            sigma2_hat=self.sigma2_hat,
            gamma=self.gamma,
            p=self.factors.p,
            scenario_id=self.scenario.scenario_id,
            observed=list(self.scenario.observed),
            unobserved=list(self.scenario.unobserved),
            iterations_run=self.beta.iterations_run,
            converged=self.beta.converged,
            used_pseudoinverse=self.beta.used_pseudoinverse,
            factor_file=factor_file,
        )


class ModelFitRecord(BaseModel):
    """Structured text export of a model fit."""

    beta: List[float]
    sigma2_hat: float
    gamma: float
    p: int
    scenario_id: Optional[int] = None
    observed: List[int]
    unobserved: List[int]
    iterations_run: int
    converged: bool
    used_pseudoinverse: bool
    factor_file: Optional[str] = None

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "beta": [812.4, -35.1],
                "sigma2_hat": 2.31,
                "gamma": 0.75,
                "p": 2,
                "scenario_id": 7,
                "observed": [3, 9, 12],
                "unobserved": [13],
                "iterations_run": 20,
                "converged": True,
                "used_pseudoinverse": False,
                "factor_file": "factors.txt",
            }
        }
    )
