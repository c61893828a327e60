"""Low-rank mean model learned by PCA of windowed flow means."""

from pathlib import Path
import re

import numpy as np
import scipy.linalg

from netkriging.core.errors import InvalidInputError, InvalidParameterError
from netkriging.core.logging import get_logger
from netkriging.models.factors import FactorMatrix, WindowedMeans
from netkriging.models.traffic import TraceSet


logger = get_logger(__name__)

_HEADER = re.compile(r"^p=(\d+)\s+J=(\d+)$")


def window_means(flows: TraceSet, w: int) -> WindowedMeans:
    """
    Average the trace over consecutive windows of ``w`` bins.

    The trailing partial window is discarded.

    Raises:
        InvalidParameterError: w < 1 or w longer than the trace
    """
    if w < 1 or w > flows.length:
        raise InvalidParameterError(
            f"window of {w} bins does not fit a {flows.length}-bin trace", "window_means"
        )
    n_windows = flows.length // w
    blocks = flows.values[:, : n_windows * w].reshape(flows.n_series, n_windows, w)
    return WindowedMeans(means=blocks.mean(axis=2), window_bins=w, source_length=flows.length)


def _orient(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so that its first clearly nonzero entry is positive."""
    oriented = vectors.copy()
    for k in range(oriented.shape[1]):
        column = oriented[:, k]
        nonzero = np.flatnonzero(np.abs(column) > 1e-12)
        if nonzero.size and column[nonzero[0]] < 0:
            oriented[:, k] = -column
    return oriented


def fit_factor_matrix(wm: WindowedMeans, p: int) -> FactorMatrix:
    """
    Top-``p`` eigenvectors of the uncentered second-moment matrix B = Σ_k X̄(k) X̄(k)ᵗ.

    Args:
        wm: Windowed flow means
        p: Number of factors, 1 ≤ p ≤ J

    Returns:
        FactorMatrix with every eigenvalue of B, largest first
    """
    n_flows = wm.n_flows
    if not 1 <= p <= n_flows:
        raise InvalidParameterError(f"p must be in 1..{n_flows}, got {p}", "fit_factor_matrix")

    second_moment = wm.means @ wm.means.T
    eigenvalues, eigenvectors = scipy.linalg.eigh(second_moment)
    eigenvalues = eigenvalues[::-1]
    eigenvectors = eigenvectors[:, ::-1]

    # rounding can leave tiny negatives on a PSD matrix
    floor = 1e-12 * max(float(eigenvalues[0]), 0.0)
    eigenvalues = np.where((eigenvalues < 0) & (eigenvalues > -floor), 0.0, eigenvalues)

    factors = _orient(eigenvectors[:, :p])
    logger.debug(
        "factor_matrix_fitted",
        p=p,
        flows=n_flows,
        windows=wm.n_windows,
        energy=float(eigenvalues[:p].sum() / eigenvalues.sum()) if eigenvalues.sum() > 0 else 1.0,
    )
    return FactorMatrix(factors=factors, eigenvalues=eigenvalues)


def energy_captured(fm: FactorMatrix, p: int) -> float:
    """
    Share of the second-moment energy captured by the first ``p`` factors.

    Returns 1 when every eigenvalue is zero.
    """
    if fm.eigenvalues is None:
        raise InvalidInputError("factor matrix has no eigenvalues", "energy_captured")
    if not 1 <= p <= fm.n_flows:
        raise InvalidParameterError(f"p must be in 1..{fm.n_flows}, got {p}", "energy_captured")
    total = float(fm.eigenvalues.sum())
    if total <= 0:
        return 1.0
    return float(np.clip(fm.eigenvalues[:p].sum() / total, 0.0, 1.0))


def projection_residual(means: np.ndarray, basis: np.ndarray) -> float:
    """Σ_k ‖x_k − P x_k‖² for the orthogonal projector onto span(basis)."""
    projected = basis @ (basis.T @ means)
    return float(np.sum((means - projected) ** 2))


def write_factor_matrix(fm: FactorMatrix, path: Path) -> Path:
    """Write F under a ``p=<p> J=<J>`` header, one flow per line."""
    lines = [f"p={fm.p} J={fm.n_flows}"]
    lines.extend(",".join(f"{value:.17g}" for value in row) for row in fm.factors)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_factor_matrix(path: Path) -> FactorMatrix:
    """
    Read a factor file written by :func:`write_factor_matrix`.

    Raises:
        InvalidInputError: Bad header or a shape that disagrees with it
    """
    lines = [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
    if not lines:
        raise InvalidInputError(f"{path} is empty", "read_factor_matrix")
    match = _HEADER.match(lines[0].strip())
    if match is None:
        raise InvalidInputError(f"{path}: header must read 'p=<p> J=<J>'", "read_factor_matrix")
    p, n_flows = int(match.group(1)), int(match.group(2))
    factors = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    if factors.shape != (n_flows, p):
        raise InvalidInputError(
            f"{path}: header says {n_flows}×{p}, body is {factors.shape}", "read_factor_matrix"
        )
    return FactorMatrix(factors=factors)
