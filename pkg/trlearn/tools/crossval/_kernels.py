"""
Numba kernels for the leverage corrected residuals; parallel over λ.
"""

import numpy as np
from numba import njit, prange


@njit(parallel=True, error_model="numpy")
def leverage_corrected_residuals(
    residuals: np.ndarray,
    leverages: np.ndarray,
    correction: np.ndarray,
    tol: float,
):
    """Divides fitted residuals by `1 - h_i - correction_i`.

    Parameters
    ----------
    residuals: np.ndarray   Samples*Lambdas*Responses fitted residuals.
    leverages: np.ndarray   Samples*Lambdas leverages without intercept term.
    correction: np.ndarray  Samples intercept leverages (1/n, m_i/n or 0).
    tol: float              Smallest accepted denominator.
    Returns
    -------
    cv_residuals: np.ndarray   Same shape as residuals.
    bad: np.ndarray            Per lambda, first sample whose denominator is
                               below tol, or -1.
    """
    n, g, q = residuals.shape
    cv_residuals = np.empty_like(residuals)
    bad = np.full(g, -1, np.int64)
    for j in prange(g):
        for i in range(n):
            denom = 1.0 - leverages[i, j] - correction[i]
            if denom <= tol and bad[j] < 0:
                bad[j] = i
            for k in range(q):
                cv_residuals[i, j, k] = residuals[i, j, k] / denom
    return cv_residuals, bad
