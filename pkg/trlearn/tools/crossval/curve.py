from dataclasses import dataclass, replace
from typing import Literal, Optional

import numpy as np

from ..model.dataset import LambdaGrid

_STRATEGY = Literal["loocv", "segcv_implicit", "segcv_explicit", "vircv", "gcv"]


@dataclass(frozen=True, eq=False)
class CvCurve:
    """\
    Cross-validation statistics over a λ grid.

    Attributes
    ----------
    grid
        The λ candidates.
    press
        Criterion per λ and response, `|grid| × q`. For the `gcv` strategy this
        holds the GCV values.
    cv_residuals
        Cross-validated residuals, `n × |grid| × q`; `press` is the column sum
        of their squares. For `gcv` these are the fitted residuals divided by
        `1 - df/n`.
    strategy
        How the residuals were obtained.
    gcv
        GCV values `|grid| × q` when a fitted family was available.
    df
        Effective degrees of freedom per λ, when known.
    rss
        Fitted residual sum of squares `|grid| × q`, when known.
    """

    grid: LambdaGrid
    press: np.ndarray
    cv_residuals: np.ndarray
    strategy: _STRATEGY
    gcv: Optional[np.ndarray] = None
    df: Optional[np.ndarray] = None
    rss: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.cv_residuals.shape[0]

    @property
    def q(self) -> int:
        return self.press.shape[1]

    def with_gcv(self, gcv: np.ndarray, df: Optional[np.ndarray] = None) -> "CvCurve":
        return replace(self, gcv=gcv, df=self.df if df is None else df)


def press_from_residuals(cv_residuals: np.ndarray) -> np.ndarray:
    return np.sum(np.square(cv_residuals), axis=0)
