from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from ... import logging as logg
from ..._errors import DimensionError
from ...linalg import center_columns, compact_svd, orthonormal_completion
from ...preprocessing.regularization import RegularizationOperator, RegularizationSpec
from ..model.dataset import Dataset, LambdaGrid
from ..model.family import ModelFamily, fit_standard, operator_for
from .curve import CvCurve
from .loocv import loocv_press


@dataclass(frozen=True, eq=False)
class VircvTransform:
    """\
    Block diagonal orthogonal row transform `T` built from the segments.

    Attributes
    ----------
    rows
        Row indices of every segment.
    blocks
        Square orthogonal matrix `U_k` per segment; the transform acts on the
        rows of segment `k` as `U_kᵀ`.
    t_ones
        `Tᵀ1`, one entry per row.
    m
        `(Tᵀ1)²`, the intercept leverages scaled by `n`; they sum to `n`.
    """

    rows: List[np.ndarray]
    blocks: List[np.ndarray]
    t_ones: np.ndarray
    m: np.ndarray

    @property
    def n(self) -> int:
        return self.m.shape[0]

    def apply_transpose(self, a: np.ndarray) -> np.ndarray:
        """`Tᵀ @ a` for a matrix (or vector) with one row per sample."""
        a = np.asarray(a, dtype=np.float64)
        if a.shape[0] != self.n:
            raise DimensionError(f"got {a.shape[0]} rows, the transform has n={self.n}")
        out = np.empty_like(a)
        for rows, block in zip(self.rows, self.blocks):
            out[rows] = block.T @ a[rows]
        return out

    def as_matrix(self) -> np.ndarray:
        """The dense `n × n` matrix `T`."""
        t = np.zeros((self.n, self.n))
        for rows, block in zip(self.rows, self.blocks):
            t[np.ix_(rows, rows)] = block
        return t


def build_vircv_transform(
    data: Dataset,
    seed: Union[int, np.random.Generator, None] = None,
    rank_tol: Optional[float] = None,
) -> VircvTransform:
    """\
    Orthogonal transform concentrating each segment on its dominant directions.

    For every segment the left singular vectors of the uncentred segment rows
    are completed to a square orthogonal matrix. Columns are signed so that
    `Tᵀ1` is non-negative; a segment of identical rows then maps to a single
    row carrying `√n_k` of the ones vector.

    Parameters
    ----------
    data
        Dataset with segment labels.
    seed
        Seed of the random completion of rank deficient segments. Defaults to
        `settings.seed`.
    rank_tol
        Relative rank tolerance of the per-segment SVDs.
    """
    from ..._settings import settings

    rng = np.random.default_rng(settings.seed if seed is None else seed)

    folds = data.segment_indices()
    blocks = []
    t_ones = np.empty(data.n)
    n_completed = 0
    for rows in folds:
        if rows.shape[0] == 0:
            raise DimensionError("empty segment")
        uk = compact_svd(data.x[rows], rank_tol=rank_tol).u
        if uk.shape[1] < rows.shape[0]:
            uk = orthonormal_completion(uk, seed=rng)
            n_completed += 1
        ones = uk.sum(axis=0)
        signs = np.where(ones < 0, -1.0, 1.0)
        uk = uk * signs
        blocks.append(uk)
        t_ones[rows] = ones * signs

    if n_completed:
        logg.debug(f"completed {n_completed} rank deficient segment bases")
    return VircvTransform(rows=folds, blocks=blocks, t_ones=t_ones, m=np.square(t_ones))


def fit_vircv_family(
    data: Dataset,
    reg: RegularizationSpec,
    grid: LambdaGrid,
    fit_intercept: bool = True,
    transform: Optional[VircvTransform] = None,
    operator: Optional[RegularizationOperator] = None,
    seed: Union[int, np.random.Generator, None] = None,
) -> Tuple[ModelFamily, VircvTransform]:
    """\
    Fit the family to the virtually transformed system `TᵀX_c`, `Tᵀy_c`.

    The regularisation matrix is built from the untransformed data, so the
    coefficients equal those of :func:`~trlearn.tl.fit_family`. The intercept
    leverage of row `i` becomes `m_i/n`.
    """
    if transform is None:
        transform = build_vircv_transform(data, seed=seed)
    if operator is None:
        operator = operator_for(data, reg, fit_intercept)
    if fit_intercept:
        xc, x_means = center_columns(data.x)
        yc, y_means = center_columns(data.y)
        correction = transform.m / data.n
    else:
        xc, yc = data.x, data.y
        x_means, y_means = np.zeros(data.p), np.zeros(data.q)
        correction = np.zeros(data.n)
    family = fit_standard(
        transform.apply_transpose(xc),
        transform.apply_transpose(yc),
        operator,
        grid,
        correction,
        x_means,
        y_means,
        fit_intercept=fit_intercept,
        transformed=True,
    )
    return family, transform


def vircv_press(
    data: Dataset,
    reg: RegularizationSpec,
    grid: LambdaGrid,
    fit_intercept: bool = True,
    seed: Union[int, np.random.Generator, None] = None,
) -> CvCurve:
    """\
    Virtual cross-validation PRESS.

    Leave-one-out on the transformed system approximates segmented
    cross-validation at the cost of leave-one-out; it is exact when every
    segment consists of identical rows.

    Parameters
    ----------
    data
        Dataset with segment labels.
    reg
        Regularisation matrix specification.
    grid
        Regularisation parameter candidates.
    fit_intercept
        Fit an unpenalised constant term.
    seed
        Seed of the orthonormal completion.

    Returns
    -------
    :class:`CvCurve` with strategy `vircv`. Its GCV values equal those of the
    untransformed fit.
    """
    start = logg.info(f"computing virtual PRESS for {data.n_segments} segments")
    family, _ = fit_vircv_family(data, reg, grid, fit_intercept=fit_intercept, seed=seed)
    curve = loocv_press(family)
    logg.info("    finished", time=start)
    return curve
