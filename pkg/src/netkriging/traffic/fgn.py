"""Fractional Gaussian noise: autocovariance and exact circulant-embedding synthesis."""

from typing import Callable, Union

import numpy as np

from netkriging.core.errors import CirculantEmbeddingError
from netkriging.core.logging import get_logger
from netkriging.models.traffic import FgnSpec


logger = get_logger(__name__)

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]

# Relative size below which a negative circulant eigenvalue is rounding noise
_EIGENVALUE_TOLERANCE = 1e-10


def fgn_autocovariance(
    hurst: float, sigma2: float, lag: Union[int, np.ndarray]
) -> Union[float, np.ndarray]:
    """
    Autocovariance of fGn at integer lag k ≥ 0.

    (σ²/2)(|k+1|^{2H} + |k−1|^{2H} − 2|k|^{2H}); equals σ² at lag 0.
    """
    k = np.abs(np.asarray(lag, dtype=np.float64))
    two_h = 2.0 * hurst
    gamma = 0.5 * sigma2 * (np.abs(k + 1) ** two_h + np.abs(k - 1) ** two_h - 2.0 * k**two_h)
    if np.ndim(gamma) == 0:
        return float(gamma)
    return gamma


def fgn_correlation(hurst: float) -> Callable[[np.ndarray], np.ndarray]:
    """Autocorrelation function ρ(i) of fGn with the given Hurst parameter."""

    def rho(lags: np.ndarray) -> np.ndarray:
        return np.asarray(fgn_autocovariance(hurst, 1.0, np.asarray(lags)), dtype=np.float64)

    return rho


def _circulant_eigenvalues(hurst: float, length: int) -> np.ndarray:
    """Eigenvalues of the 2n circulant embedding of the unit-variance autocovariance."""
    autocov = np.asarray(fgn_autocovariance(hurst, 1.0, np.arange(length + 1)))
    row = np.concatenate([autocov, autocov[-2:0:-1]])
    eigenvalues = np.fft.fft(row).real
    smallest = float(eigenvalues.min())
    if smallest < -_EIGENVALUE_TOLERANCE * float(eigenvalues.max()):
        raise CirculantEmbeddingError(
            f"negative circulant eigenvalue {smallest:.3e} for H={hurst}, n={length}",
            operation="generate_fgn",
        )
    return np.clip(eigenvalues, 0.0, None)


def unit_fgn_matrix(
    hurst: float, n_series: int, length: int, rng: np.random.Generator
) -> np.ndarray:
    """
    ``n_series`` independent unit-variance fGn series of the given length.

    Davies–Harte: the circulant embedding of size M = 2n is diagonalised by the
    FFT; Hermitian-symmetric complex Gaussian weights scaled by the square
    roots of its eigenvalues give an exact sample in the first n entries.
    """
    if length == 1:
        return rng.standard_normal((n_series, 1))

    eigenvalues = _circulant_eigenvalues(hurst, length)
    size = eigenvalues.shape[0]
    half = size // 2

    weights = np.empty((n_series, size), dtype=np.complex128)
    weights[:, 0] = np.sqrt(eigenvalues[0] / size) * rng.standard_normal(n_series)
    weights[:, half] = np.sqrt(eigenvalues[half] / size) * rng.standard_normal(n_series)
    scale = np.sqrt(eigenvalues[1:half] / (2.0 * size))
    real = rng.standard_normal((n_series, half - 1))
    imaginary = rng.standard_normal((n_series, half - 1))
    weights[:, 1:half] = scale * (real + 1j * imaginary)
    weights[:, half + 1 :] = np.conj(weights[:, half - 1 : 0 : -1])

    return np.fft.fft(weights, axis=1).real[:, :length]


def generate_fgn(spec: FgnSpec, seed: SeedLike = None) -> np.ndarray:
    """
    Zero-mean fGn series with autocovariance ``fgn_autocovariance(H, σ², ·)``.

    Args:
        spec: Hurst parameter, increment variance and length
        seed: Seed or generator; equal seeds give identical series

    Returns:
        1-D array of length ``spec.length``

    Raises:
        CirculantEmbeddingError: The embedding is not nonnegative definite
    """
    rng = np.random.default_rng(seed)
    series = unit_fgn_matrix(spec.hurst, 1, spec.length, rng)[0]
    return np.sqrt(spec.sigma2) * series
