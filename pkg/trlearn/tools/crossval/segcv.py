from typing import List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ... import logging as logg
from ..._errors import ContractError, DimensionError
from ...linalg import solve_symmetric_stack
from ...preprocessing.regularization import RegularizationOperator, RegularizationSpec
from ..model.dataset import Dataset, LambdaGrid
from ..model.family import (
    ModelFamily,
    coefficient_paths,
    degrees_of_freedom,
    fit_arrays,
    fit_family,
    operator_for,
    with_grid,
)
from .curve import CvCurve, press_from_residuals

# upper bound on the number of block entries solved in one batched call
_BLOCK_BUDGET = 2**24

Fold = Tuple[np.ndarray, ModelFamily]


def _lambda_chunks(n_lambda: int, block_size: int):
    step = max(1, _BLOCK_BUDGET // max(1, block_size * block_size))
    for start in range(0, n_lambda, step):
        yield slice(start, min(start + step, n_lambda))


def segment_corrected(family: ModelFamily, rows: np.ndarray, segment: int) -> np.ndarray:
    """\
    Held-out residuals of one segment from the full fit, for every λ.

    Solves `[I - H_λ,k - 1/n] r_(k) = r_λ,k` where `H_λ,k` is the segment block
    of the regularised hat matrix. The `1/n` is subtracted from every entry of
    the block and is left out for models without intercept.

    Returns
    -------
    Held-out residuals of shape `n_k × |grid| × q`.
    """
    uk = family.svd.u[rows]
    nk = rows.shape[0]
    corr = 1.0 / family.n if family.fit_intercept else 0.0
    residuals = family.residuals[rows]
    out = np.empty_like(residuals)
    for sl in _lambda_chunks(len(family.grid), nk):
        blocks = np.eye(nk)[None] - corr - np.einsum(
            "ir,jr,rg->gij", uk, uk, family.d[:, sl], optimize=True
        )
        rhs = np.transpose(residuals[:, sl, :], (1, 0, 2))
        solved = solve_symmetric_stack(blocks, rhs, segment=segment, lambda_offset=sl.start)
        out[:, sl, :] = np.transpose(solved, (1, 0, 2))
    return out


def segcv_press_implicit(
    family: ModelFamily, data: Dataset, verbose: bool = False
) -> CvCurve:
    """\
    Exact segmented cross-validation PRESS from a single fitted family.

    For every segment `k` and every λ, the held-out residuals follow from the
    fitted residuals of the full model by one small linear solve of size
    `n_k`, so no model is refitted. The result equals refitting on the held-in
    rows (re-estimating the intercept) with the same regularisation matrix.

    Parameters
    ----------
    family
        Family fitted to `data` (not virtually transformed).
    data
        The dataset with segment labels.
    verbose
        Show a progress bar over segments.

    Returns
    -------
    :class:`CvCurve` with strategy `segcv_implicit`.
    """
    if family.transformed:
        raise ContractError("segmented cross-validation needs an untransformed family")
    if family.n != data.n:
        raise DimensionError(f"family fitted on n={family.n} samples, dataset has n={data.n}")
    folds = data.segment_indices()
    start = logg.info(
        f"computing segmented PRESS for {len(folds)} segments "
        f"and {len(family.grid)} lambda values"
    )
    cv_residuals = np.empty_like(family.fitted)
    for k, rows in enumerate(tqdm(folds, desc="segments", disable=not verbose)):
        cv_residuals[rows] = segment_corrected(family, rows, k + 1)

    curve = CvCurve(
        grid=family.grid,
        press=press_from_residuals(cv_residuals),
        cv_residuals=cv_residuals,
        strategy="segcv_implicit",
        df=degrees_of_freedom(family),
        rss=family.rss,
    )
    logg.info("    finished", time=start)
    return curve


def fold_families(
    data: Dataset,
    reg: RegularizationSpec,
    grid: LambdaGrid,
    fit_intercept: bool = True,
    refit_scaling: bool = False,
    operator: Optional[RegularizationOperator] = None,
    verbose: bool = False,
) -> List[Fold]:
    """\
    Fit one family per segment on the held-in rows.

    The regularisation matrix is built once from all rows unless
    `refit_scaling` is set, in which case `standardize` scalings are
    re-estimated on every held-in set.
    """
    folds = data.segment_indices()
    if operator is None:
        operator = operator_for(data, reg, fit_intercept)
    families = []
    for rows in tqdm(folds, desc="refits", disable=not verbose):
        held_in = np.setdiff1d(np.arange(data.n), rows, assume_unique=True)
        if held_in.shape[0] < 2:
            raise DimensionError(
                f"segment of {rows.shape[0]} rows leaves {held_in.shape[0]} "
                "rows to fit; need at least 2"
            )
        op = operator
        if refit_scaling and reg.kind == "standardize":
            op = operator_for(data.subset(held_in), reg, fit_intercept)
        families.append(
            (rows, fit_arrays(data.x[held_in], data.y[held_in], op, grid, fit_intercept))
        )
    return families


def fold_residuals(data: Dataset, folds: List[Fold]) -> np.ndarray:
    """Prediction residuals of every held-out row, `n × |grid| × q`."""
    g = len(folds[0][1].grid)
    cv_residuals = np.empty((data.n, g, data.q))
    for rows, family in folds:
        b, b0 = coefficient_paths(family)
        predicted = np.einsum("np,pgq->ngq", data.x[rows], b) + b0[None]
        cv_residuals[rows] = data.y[rows][:, None, :] - predicted
    return cv_residuals


def refold(folds: List[Fold], grid: LambdaGrid) -> List[Fold]:
    """The fold families evaluated on another λ grid."""
    return [(rows, with_grid(family, grid)) for rows, family in folds]


def segcv_press_explicit(
    data: Dataset,
    reg: RegularizationSpec,
    grid: LambdaGrid,
    fit_intercept: bool = True,
    refit_scaling: bool = False,
    verbose: bool = False,
    family: Optional[ModelFamily] = None,
) -> CvCurve:
    """\
    Segmented cross-validation PRESS by refitting without every segment.

    Each held-in set is re-centred and refitted from scratch, and the
    held-out rows are predicted with the refitted coefficients. With the
    default fixed regularisation matrix this reproduces
    :func:`segcv_press_implicit`.

    Parameters
    ----------
    data
        Dataset with segment labels; every held-in set needs 2 rows or more.
    reg
        Regularisation matrix specification.
    grid
        Regularisation parameter candidates.
    fit_intercept
        Fit an unpenalised constant term in every refit.
    refit_scaling
        Re-estimate `standardize` scalings on the held-in rows.
    verbose
        Show a progress bar over segments.
    family
        Family of all rows on `grid`, reused for the degrees of freedom and
        residual sums of squares instead of fitting it again.
    """
    start = logg.info(
        f"refitting {data.n_segments} segment models for {len(grid)} lambda values"
    )
    folds = fold_families(
        data, reg, grid, fit_intercept=fit_intercept, refit_scaling=refit_scaling, verbose=verbose
    )
    cv_residuals = fold_residuals(data, folds)
    full = family
    if full is None:
        full = fit_family(data, reg, grid, fit_intercept=fit_intercept)
    elif len(full.grid) != len(grid) or full.n != data.n:
        raise DimensionError("family does not match the dataset and grid")
    curve = CvCurve(
        grid=grid,
        press=press_from_residuals(cv_residuals),
        cv_residuals=cv_residuals,
        strategy="segcv_explicit",
        df=degrees_of_freedom(full),
        rss=full.rss,
    )
    logg.info("    finished", time=start)
    return curve
