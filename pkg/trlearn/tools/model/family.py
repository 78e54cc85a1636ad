from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from ... import logging as logg
from ..._errors import DimensionError, RankError
from ...linalg import CompactSvd, center_columns, compact_svd, hadamard_square_rowsums
from ...preprocessing.regularization import (
    RegularizationOperator,
    RegularizationSpec,
    back_transform,
    build_operator,
    to_standard_form,
)
from .dataset import Dataset, LambdaGrid


@dataclass(frozen=True, eq=False)
class ModelFamily:
    """\
    Tikhonov regression models for every λ of a grid, sharing one compact SVD.

    Attributes
    ----------
    svd
        Compact SVD of the centred predictors in standard form, `X̃ = X_c L⁻¹`.
    grid
        The λ candidates.
    operator
        The regularisation matrix `L`.
    c
        Standard-form coefficients in the SVD basis, `r × |grid| × q`.
    d
        Shrinkage factors `s_j² / (s_j² + λ)`, `r × |grid|`.
    leverages
        Regularised leverages `h_λ` without the intercept term, `n × |grid|`.
    correction
        Leverage of the intercept per sample: `1/n` for centred fits,
        `m_i/n` for virtually transformed fits, 0 without intercept.
    response
        Centred (and possibly transformed) responses the family was fitted to.
    fitted
        Centred fitted values `U_r S_r c_λ`, `n × |grid| × q`.
    x_means, y_means
        Column means used for centring (zeros without intercept).
    fit_intercept
        Whether the model has an unpenalised constant term.
    transformed
        True when rows were rotated before fitting (virtual cross-validation);
        fitted values then live in the rotated space.
    """

    svd: CompactSvd
    grid: LambdaGrid
    operator: RegularizationOperator
    c: np.ndarray
    d: np.ndarray
    leverages: np.ndarray
    correction: np.ndarray
    response: np.ndarray
    fitted: np.ndarray
    x_means: np.ndarray
    y_means: np.ndarray
    fit_intercept: bool = True
    transformed: bool = False

    @property
    def n(self) -> int:
        return self.response.shape[0]

    @property
    def p(self) -> int:
        return self.operator.p

    @property
    def q(self) -> int:
        return self.response.shape[1]

    @property
    def rank(self) -> int:
        return self.svd.rank

    @property
    def residuals(self) -> np.ndarray:
        """Fitted residuals, `n × |grid| × q`."""
        return self.response[:, None, :] - self.fitted

    @property
    def rss(self) -> np.ndarray:
        """Residual sum of squares, `|grid| × q`."""
        return np.sum(np.square(self.residuals), axis=0)

    @property
    def fitted_values(self) -> np.ndarray:
        """Fitted values on the scale of the data, `U_r S_r c_λ + ȳ`."""
        return self.fitted + self.y_means

    @property
    def total_leverages(self) -> np.ndarray:
        """Diagonal of the full hat matrix including the intercept term."""
        return self.leverages + self.correction[:, None]


def _check_rank(svd: CompactSvd, grid: LambdaGrid, n: int, p: int, fit_intercept: bool):
    full = min(n - 1 if fit_intercept else n, p)
    if grid.has_zero and svd.rank < full:
        raise RankError(
            f"lambda = 0 needs full rank {full} but the predictors have rank {svd.rank}"
        )


def _evaluate_grid(svd: CompactSvd, yc: np.ndarray, grid: LambdaGrid):
    # per-λ work only touches the r-dimensional SVD basis, never p
    s2 = np.square(svd.s)[:, None]
    d = s2 / (s2 + grid.values[None, :])
    uty = svd.u.T @ yc
    c = (uty / svd.s[:, None])[:, None, :] * d[:, :, None]
    fitted = np.einsum("nr,rgq->ngq", svd.u, uty[:, None, :] * d[:, :, None])
    leverages = hadamard_square_rowsums(svd.u, d)
    return c, d, fitted, leverages


def fit_standard(
    xc: np.ndarray,
    yc: np.ndarray,
    operator: RegularizationOperator,
    grid: LambdaGrid,
    correction: np.ndarray,
    x_means: np.ndarray,
    y_means: np.ndarray,
    fit_intercept: bool = True,
    transformed: bool = False,
    rank_tol: Optional[float] = None,
) -> ModelFamily:
    """\
    Fit the family to already centred (and possibly rotated) data.

    This is the shared core of :func:`fit_family`, the virtual
    cross-validation fit and the explicit refits.
    """
    start = logg.debug(f"fitting {len(grid)} lambda values, data {xc.shape}")
    n, p = xc.shape
    svd = compact_svd(to_standard_form(xc, operator), rank_tol=rank_tol)
    _check_rank(svd, grid, n, p, fit_intercept)
    if svd.rank == 0:
        logg.warning("predictors have rank 0 after centring; all models are constant")

    c, d, fitted, leverages = _evaluate_grid(svd, yc, grid)

    logg.debug("    family fitted", time=start)
    return ModelFamily(
        svd=svd,
        grid=grid,
        operator=operator,
        c=c,
        d=d,
        leverages=leverages,
        correction=np.asarray(correction, dtype=np.float64),
        response=yc,
        fitted=fitted,
        x_means=np.asarray(x_means, dtype=np.float64),
        y_means=np.asarray(y_means, dtype=np.float64),
        fit_intercept=fit_intercept,
        transformed=transformed,
    )


def operator_for(
    data: Dataset, reg: RegularizationSpec, fit_intercept: bool = True
) -> RegularizationOperator:
    """Regularisation operator of `reg` for the predictors of `data`."""
    sds = None
    if reg.kind == "standardize":
        sds = data.column_sds() if fit_intercept else np.sqrt(np.mean(data.x**2, axis=0))
    return build_operator(reg, data.p, column_sds=sds)


def fit_family(
    data: Dataset,
    reg: RegularizationSpec,
    grid: LambdaGrid,
    fit_intercept: bool = True,
    operator: Optional[RegularizationOperator] = None,
) -> ModelFamily:
    """\
    Fit Tikhonov regression models for all λ in `grid` from one compact SVD.

    Parameters
    ----------
    data
        Predictors and responses.
    reg
        Regularisation matrix specification.
    grid
        Regularisation parameter candidates.
    fit_intercept
        Centre the data and fit an unpenalised constant term.
    operator
        Use this regularisation operator instead of building one from `reg`
        and `data`.

    Returns
    -------
    :class:`ModelFamily`
    """
    start = logg.info(f"fitting Tikhonov models ({reg.kind}) for {len(grid)} lambda values")
    if operator is None:
        operator = operator_for(data, reg, fit_intercept)
    if operator.p != data.p:
        raise DimensionError(f"operator for p={operator.p} does not match p={data.p}")

    family = fit_arrays(data.x, data.y, operator, grid, fit_intercept=fit_intercept)
    logg.info(f"    finished, rank {family.rank}", time=start)
    return family


def coefficient_paths(family: ModelFamily) -> Tuple[np.ndarray, np.ndarray]:
    """\
    Regression coefficients and intercepts of every model in the family.

    Returns
    -------
    `b` of shape `p × |grid| × q` in the original (not standard-form)
    coordinates, and intercepts of shape `|grid| × q`.
    """
    beta = np.einsum("pr,rgq->pgq", family.svd.v, family.c)
    b = back_transform(beta, family.operator)
    intercepts = family.y_means[None, :] - np.einsum("p,pgq->gq", family.x_means, b)
    return b, intercepts


def _check_index(family: ModelFamily, lambda_index: int) -> int:
    g = len(family.grid)
    if not -g <= lambda_index < g:
        raise IndexError(f"lambda index {lambda_index} out of range for {g} values")
    return lambda_index % g


def coefficients_at(family: ModelFamily, lambda_index: int) -> Tuple[np.ndarray, np.ndarray]:
    """\
    Coefficients `b_λ = L⁻¹ V_r c_λ` (`p × q`) and intercepts `ȳ - x̄ b_λ` (`q`).
    """
    j = _check_index(family, lambda_index)
    b = back_transform(family.svd.v @ family.c[:, j, :], family.operator)
    return b, family.y_means - family.x_means @ b


def predict(family: ModelFamily, lambda_index: int, x_new: np.ndarray) -> np.ndarray:
    """\
    Predict responses for new (uncentred) samples, `x_new b_λ + b₀`.
    """
    x_new = np.asarray(x_new, dtype=np.float64)
    if x_new.ndim == 1:
        x_new = x_new.reshape(1, -1)
    if x_new.ndim != 2 or x_new.shape[1] != family.p:
        raise DimensionError(
            f"new samples of shape {x_new.shape} do not match p={family.p}"
        )
    b, b0 = coefficients_at(family, lambda_index)
    return x_new @ b + b0


def degrees_of_freedom(family: ModelFamily) -> np.ndarray:
    """\
    Effective degrees of freedom `df(λ) = 1 + Σ_j s_j² / (s_j² + λ)`.

    The constant 1 counts the intercept and is dropped for models fitted
    without one.
    """
    df = family.d.sum(axis=0)
    return df + 1.0 if family.fit_intercept else df


def with_grid(family: ModelFamily, grid: LambdaGrid) -> ModelFamily:
    """\
    The same models evaluated on another λ grid, reusing the stored SVD.
    """
    _check_rank(family.svd, grid, family.n, family.p, family.fit_intercept)
    c, d, fitted, leverages = _evaluate_grid(family.svd, family.response, grid)
    return replace(family, grid=grid, c=c, d=d, fitted=fitted, leverages=leverages)


def fit_arrays(
    x: np.ndarray,
    y: np.ndarray,
    operator: RegularizationOperator,
    grid: LambdaGrid,
    fit_intercept: bool = True,
) -> ModelFamily:
    """Centre raw arrays (when fitting an intercept) and fit the family."""
    n = x.shape[0]
    if fit_intercept:
        xc, x_means = center_columns(x)
        yc, y_means = center_columns(y)
        correction = np.full(n, 1.0 / n)
    else:
        xc, yc = np.array(x, dtype=np.float64), np.array(y, dtype=np.float64)
        x_means, y_means = np.zeros(x.shape[1]), np.zeros(yc.shape[1])
        correction = np.zeros(n)
    return fit_standard(
        xc, yc, operator, grid, correction, x_means, y_means, fit_intercept=fit_intercept
    )
