"""Dense linear-algebra helpers with a pseudo-inverse fallback."""

from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg

from netkriging.core.config import settings
from netkriging.core.errors import SingularMatrixError
from netkriging.core.logging import get_logger


logger = get_logger(__name__)


class Solution(NamedTuple):
    """Result of a guarded solve."""

    value: np.ndarray
    used_pseudoinverse: bool


def is_rank_deficient(matrix: np.ndarray, rcond: Optional[float] = None) -> bool:
    """True when the smallest singular value is below ``rcond`` times the largest."""
    rcond = settings.pinv_rcond if rcond is None else rcond
    if matrix.size == 0:
        return True
    singular_values = scipy.linalg.svdvals(matrix)
    largest = singular_values[0]
    if largest == 0.0:
        return True
    return bool(singular_values[-1] <= rcond * largest)


def solve(
    matrix: np.ndarray,
    rhs: np.ndarray,
    *,
    allow_pinv: bool = True,
    rcond: Optional[float] = None,
    operation: str = "solve",
) -> Solution:
    """
    Solve ``matrix @ x = rhs`` by pivoted LU, falling back to the pseudo-inverse.

    Args:
        matrix: Square coefficient matrix
        rhs: Right-hand side, vector or matrix
        allow_pinv: Use the Moore-Penrose inverse when the matrix is rank deficient
        rcond: Relative singular-value cutoff; defaults to ``settings.pinv_rcond``
        operation: Operation name reported on failure

    Returns:
        Solution with the flag telling whether the pseudo-inverse was used

    Raises:
        SingularMatrixError: Rank deficient and ``allow_pinv`` is False
    """
    rcond = settings.pinv_rcond if rcond is None else rcond
    if not is_rank_deficient(matrix, rcond):
        lu, piv = scipy.linalg.lu_factor(matrix, check_finite=False)
        return Solution(scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False), False)

    if not allow_pinv:
        raise SingularMatrixError(
            f"matrix of shape {matrix.shape} is rank deficient", operation=operation
        )
    logger.warning("pseudoinverse_fallback", operation=operation, shape=list(matrix.shape))
    return Solution(np.linalg.pinv(matrix, rcond=rcond) @ rhs, True)


def inverse(
    matrix: np.ndarray,
    *,
    allow_pinv: bool = True,
    rcond: Optional[float] = None,
    operation: str = "inverse",
) -> Solution:
    """Matrix inverse with the same fallback rules as :func:`solve`."""
    identity = np.eye(matrix.shape[0])
    return solve(matrix, identity, allow_pinv=allow_pinv, rcond=rcond, operation=operation)


def symmetrize(matrix: np.ndarray) -> np.ndarray:
    """Average a matrix with its transpose."""
    return 0.5 * (matrix + matrix.T)


def projection_coefficient(target: np.ndarray, basis: np.ndarray) -> float:
    """
    Least-squares coefficient c minimising ``||vec(target) - c vec(basis)||``.

    Raises:
        ZeroDivisionError: ``basis`` is identically zero
    """
    denominator = float(np.vdot(basis, basis))
    if denominator == 0.0:
        raise ZeroDivisionError("basis matrix is zero")
    return float(np.vdot(target, basis)) / denominator


def clip_psd(matrix: np.ndarray, scale: float, tolerance: float = 1e-6) -> np.ndarray:
    """
    Symmetrize and zero negative eigenvalues that are rounding noise.

    Eigenvalues below ``-tolerance * scale`` are kept so that genuine
    indefiniteness still fails validation downstream.
    """
    sym = symmetrize(matrix)
    if sym.size == 0:
        return sym
    eigenvalues, vectors = np.linalg.eigh(sym)
    if eigenvalues[0] >= 0.0:
        return sym
    noise = (eigenvalues < 0.0) & (eigenvalues >= -tolerance * max(scale, 0.0))
    eigenvalues = np.where(noise, 0.0, eigenvalues)
    return symmetrize((vectors * eigenvalues) @ vectors.T)
