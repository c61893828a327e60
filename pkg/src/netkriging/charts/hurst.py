"""Hurst parameter from the Haar wavelet log-scale diagram."""

import numpy as np
from scipy.special import digamma

from netkriging.core.errors import InsufficientHistoryError
from netkriging.core.logging import get_logger
from netkriging.models.chart import HurstEstimate


logger = get_logger(__name__)

MIN_LENGTH = 2**8
FIRST_OCTAVE = 3
HURST_BOUNDS = (0.01, 0.99)


def haar_details(series: np.ndarray, octaves: int) -> list[np.ndarray]:
    """Haar detail coefficients d_1, ..., d_octaves (finest first)."""
    approximation = np.asarray(series, dtype=np.float64).ravel()
    details = []
    for _ in range(octaves):
        even_length = approximation.shape[0] - approximation.shape[0] % 2
        even = approximation[0:even_length:2]
        odd = approximation[1:even_length:2]
        details.append((even - odd) / np.sqrt(2.0))
        approximation = (even + odd) / np.sqrt(2.0)
    return details


def estimate_hurst(series: np.ndarray) -> HurstEstimate:
    """
    Weighted regression of log₂ detail energy on octave.

    Octaves 3 to ⌊log₂ n⌋ − 3 are used. Each log-energy is bias-corrected for
    the finite number of coefficients and weighted by that number; the slope α
    gives Ĥ = (α + 1)/2, clamped to [0.01, 0.99].

    Raises:
        InsufficientHistoryError: Fewer than 256 samples
    """
    series = np.asarray(series, dtype=np.float64).ravel()
    n = series.shape[0]
    if n < MIN_LENGTH:
        raise InsufficientHistoryError(
            f"need at least {MIN_LENGTH} samples, got {n}", "estimate_hurst"
        )
    last_octave = int(np.floor(np.log2(n))) - 3
    details = haar_details(series - series.mean(), last_octave)

    octaves = np.arange(FIRST_OCTAVE, last_octave + 1)
    counts = np.array([details[j - 1].shape[0] for j in octaves], dtype=np.float64)
    energies = np.array([np.mean(details[j - 1] ** 2) for j in octaves])
    bias = digamma(counts / 2.0) / np.log(2.0) - np.log2(counts / 2.0)
    log_energy = np.log2(np.maximum(energies, np.finfo(float).tiny)) - bias

    slope, _ = np.polyfit(octaves, log_energy, deg=1, w=np.sqrt(counts))
    raw = (float(slope) + 1.0) / 2.0
    hurst = float(np.clip(raw, *HURST_BOUNDS))
    clamped = hurst != raw
    if clamped:
        logger.warning("hurst_estimate_clamped", raw=raw, hurst=hurst)
    return HurstEstimate(
        hurst=hurst,
        slope=float(slope),
        clamped=clamped,
        first_octave=FIRST_OCTAVE,
        last_octave=last_octave,
    )
