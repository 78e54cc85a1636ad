"""Dense linear algebra shared by the model, regularisation and
cross-validation code.
"""
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
import scipy.linalg

from . import logging as logg
from ._errors import ContractError, DimensionError, NumericError, SingularSystemError


@dataclass(frozen=True, eq=False)
class CompactSvd:
    """\
    Compact (economy) SVD `m = u @ diag(s) @ v.T` truncated to the numerical rank.

    Attributes
    ----------
    u
        `n × r` matrix with orthonormal columns.
    s
        `r` positive singular values in non-increasing order.
    v
        `p × r` matrix with orthonormal columns.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray

    @property
    def rank(self) -> int:
        return self.s.shape[0]

    @property
    def us(self) -> np.ndarray:
        """`U_r S_r`, the scores used for fitted values."""
        return self.u * self.s

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.s) @ self.v.T


def _as_matrix(m, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be two-dimensional, got {m.ndim} dimensions")
    return m


def center_columns(m) -> Tuple[np.ndarray, np.ndarray]:
    """\
    Subtract the column means.

    Parameters
    ----------
    m
        Matrix of shape `n × p` (a vector is treated as one column).

    Returns
    -------
    The centred matrix and the row vector of column means.
    """
    m = _as_matrix(m)
    if m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"cannot centre an empty matrix of shape {m.shape}")
    means = m.mean(axis=0)
    return m - means, means


def compact_svd(m, rank_tol: Optional[float] = None) -> CompactSvd:
    """\
    Compact SVD with relative rank truncation.

    Parameters
    ----------
    m
        Non-empty matrix.
    rank_tol
        Singular values below `rank_tol * s_max` are dropped. Defaults to
        `settings.rank_tol`.
    """
    from ._settings import settings

    m = _as_matrix(m)
    if m.size == 0:
        raise DimensionError(f"cannot decompose an empty matrix of shape {m.shape}")
    if rank_tol is None:
        rank_tol = settings.rank_tol
    if not np.all(np.isfinite(m)):
        raise NumericError("SVD input contains NaN or Inf entries")

    try:
        u, s, vt = scipy.linalg.svd(
            m, full_matrices=False, check_finite=False, lapack_driver="gesdd"
        )
    except np.linalg.LinAlgError:
        # gesdd occasionally fails to converge where the QR iteration does not
        logg.debug("gesdd did not converge, retrying with gesvd")
        try:
            u, s, vt = scipy.linalg.svd(
                m, full_matrices=False, check_finite=False, lapack_driver="gesvd"
            )
        except np.linalg.LinAlgError as e:
            raise NumericError(
                f"SVD of a {m.shape[0]}×{m.shape[1]} matrix failed: {e}"
            ) from e

    r = 0 if s.size == 0 or s[0] <= 0 else int(np.sum(s > rank_tol * s[0]))
    logg.debug(f"compact SVD of {m.shape[0]}×{m.shape[1]} matrix has rank {r}")
    return CompactSvd(u=u[:, :r], s=s[:r], v=vt[:r].T)


def hadamard_square_rowsums(m, w) -> np.ndarray:
    """\
    Weighted row sums of squares, `(m ⊙ m) @ w`.

    With orthonormal `m = U_r` and `w = d_λ` this gives the regularised
    leverages. `w` may be a matrix, one weight vector per column, in which
    case the result has one column per weight vector.
    """
    m = _as_matrix(m)
    w = np.asarray(w, dtype=np.float64)
    if w.shape[0] != m.shape[1]:
        raise DimensionError(
            f"weights have length {w.shape[0]} but the matrix has {m.shape[1]} columns"
        )
    return np.square(m) @ w


def solve_small_symmetric(
    a,
    b,
    label: Optional[str] = None,
    condition_limit: Optional[float] = None,
    segment: Optional[int] = None,
    lambda_index: Optional[int] = None,
) -> np.ndarray:
    """\
    Solve `a @ x = b` for a small symmetric matrix `a`.

    Uses a Cholesky factorisation and falls back to the symmetric indefinite
    (Bunch–Kaufman) solver when `a` is not positive definite. Matrices whose
    2-norm condition number exceeds `condition_limit` are rejected.

    Parameters
    ----------
    a
        Square symmetric matrix.
    b
        Right hand side, a vector or a matrix with one column per system.
    label
        Description of the system used in error messages, e.g. the segment.
    condition_limit
        Defaults to `settings.condition_limit`.
    segment, lambda_index
        Attached to the raised :class:`SingularSystemError`.
    """
    from ._settings import settings

    if condition_limit is None:
        condition_limit = settings.condition_limit
    a = _as_matrix(a)
    b = np.asarray(b, dtype=np.float64)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix must be square, got shape {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise DimensionError(
            f"right hand side has {b.shape[0]} rows, matrix has {a.shape[0]}"
        )
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-10 * scale):
        raise ContractError("matrix passed to solve_small_symmetric is not symmetric")

    where = f" ({label})" if label else ""
    cond = np.linalg.cond(a) if a.size else 1.0
    if not np.isfinite(cond) or cond > condition_limit:
        raise SingularSystemError(
            f"correction block is singular to working precision{where}: "
            f"condition estimate {cond:.3g} exceeds {condition_limit:.3g}",
            segment=segment,
            lambda_index=lambda_index,
        )

    try:
        factor = scipy.linalg.cho_factor(a, lower=True, check_finite=False)
        return scipy.linalg.cho_solve(factor, b, check_finite=False)
    except np.linalg.LinAlgError:
        return scipy.linalg.solve(a, b, assume_a="sym", check_finite=False)


def orthonormal_completion(u, seed: Union[int, np.random.Generator, None] = None):
    """\
    Extend a matrix with orthonormal columns to a square orthogonal matrix.

    The leading columns of the result equal `u`; the added columns come
    from QR of `[u | G]` with `G` a seeded Gaussian matrix, followed by one
    step of re-orthogonalisation against `u`.
    """
    from ._settings import settings

    u = _as_matrix(u)
    n, k = u.shape
    if k > n:
        raise ContractError(f"cannot complete {k} columns in dimension {n}")
    if not np.allclose(u.T @ u, np.eye(k), rtol=0.0, atol=1e-8):
        raise ContractError("columns passed to orthonormal_completion are not orthonormal")
    if k == n:
        return u.copy()

    rng = np.random.default_rng(settings.seed if seed is None else seed)
    g = rng.standard_normal((n, n - k))
    q, _ = scipy.linalg.qr(np.hstack([u, g]), mode="economic")
    extra = q[:, k:]
    extra -= u @ (u.T @ extra)
    extra, _ = scipy.linalg.qr(extra, mode="economic")
    return np.hstack([u, extra])


def solve_symmetric_stack(
    a: np.ndarray,
    b: np.ndarray,
    condition_limit: Optional[float] = None,
    segment: Optional[int] = None,
    lambda_offset: int = 0,
) -> np.ndarray:
    """\
    Solve a stack of small symmetric systems `a[j] @ x[j] = b[j]`.

    All blocks are checked against `condition_limit` first. When the stack is
    positive definite (batched Cholesky succeeds) it is solved in one batched
    call; otherwise every block goes through :func:`solve_small_symmetric`.

    Parameters
    ----------
    a
        Stack of shape `g × m × m`, one block per λ.
    b
        Right hand sides of shape `g × m × q`.
    segment
        Segment id reported in errors.
    lambda_offset
        λ index of the first block, for errors.
    """
    from ._settings import settings

    if condition_limit is None:
        condition_limit = settings.condition_limit
    cond = np.linalg.cond(a)
    bad = np.flatnonzero(~np.isfinite(cond) | (cond > condition_limit))
    if bad.size:
        j = int(bad[0])
        raise SingularSystemError(
            f"correction block of segment {segment} is singular to working precision "
            f"at lambda index {j + lambda_offset}: condition estimate {cond[j]:.3g} "
            f"exceeds {condition_limit:.3g}",
            segment=segment,
            lambda_index=j + lambda_offset,
        )
    try:
        np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        return np.stack(
            [
                solve_small_symmetric(
                    a[j],
                    b[j],
                    label=f"segment {segment}, lambda index {j + lambda_offset}",
                    condition_limit=condition_limit,
                    segment=segment,
                    lambda_index=j + lambda_offset,
                )
                for j in range(a.shape[0])
            ]
        )
    return np.linalg.solve(a, b)
