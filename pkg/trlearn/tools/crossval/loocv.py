import numpy as np

from ... import logging as logg
from ..._errors import DegenerateError, DimensionError, LeverageOverflowError
from ..model.family import ModelFamily, degrees_of_freedom
from ._kernels import leverage_corrected_residuals
from .curve import CvCurve, press_from_residuals


def leverage_corrected(family: ModelFamily) -> np.ndarray:
    """\
    Cross-validated residuals `(y_i - ŷ_i) / (1 - h_i - correction_i)`.

    Raises :class:`LeverageOverflowError` naming the first sample whose
    denominator is not above `settings.leverage_tol`.
    """
    from ..._settings import settings

    cv_residuals, bad = leverage_corrected_residuals(
        np.ascontiguousarray(family.residuals),
        np.ascontiguousarray(family.leverages),
        np.ascontiguousarray(family.correction),
        settings.leverage_tol,
    )
    flagged = np.flatnonzero(bad >= 0)
    if flagged.size:
        j = int(flagged[0])
        i = int(bad[j])
        raise LeverageOverflowError(
            f"leverage of sample {i} reaches 1 at lambda index {j} "
            f"(lambda={family.grid[j]:.6g}); the sample cannot be left out",
            sample=i,
            lambda_index=j,
        )
    return cv_residuals


def gcv_values(family: ModelFamily) -> np.ndarray:
    """GCV per λ and response, `RSS / (1 - df/n)²`."""
    ratio = degrees_of_freedom(family) / family.n
    if np.any(ratio >= 1.0):
        j = int(np.flatnonzero(ratio >= 1.0)[0])
        raise DegenerateError(
            f"degrees of freedom reach n={family.n} at lambda index {j}; GCV undefined"
        )
    return family.rss / np.square(1.0 - ratio)[:, None]


def _gcv_or_none(family: ModelFamily):
    try:
        return gcv_values(family)
    except DegenerateError:
        logg.hint("GCV undefined where df reaches n; curve carries no GCV values")
        return None


def loocv_press(family: ModelFamily) -> CvCurve:
    """\
    Leave-one-out PRESS from the leverages of the fitted family.

    Each cross-validated residual is the fitted residual divided by
    `1 - h_λ,i - 1/n`, so no model is refitted. Applied to a family fitted on
    virtually transformed data the same computation yields the virtual
    cross-validation PRESS.

    Parameters
    ----------
    family
        Fitted model family with at least 3 samples.

    Returns
    -------
    :class:`CvCurve` with strategy `loocv` (or `vircv` for transformed
    families), carrying GCV values too.
    """
    if family.n < 3:
        raise DimensionError(f"leave-one-out needs at least 3 samples, got {family.n}")
    start = logg.info(f"computing leverage corrected PRESS for {len(family.grid)} lambda values")
    cv_residuals = leverage_corrected(family)
    curve = CvCurve(
        grid=family.grid,
        press=press_from_residuals(cv_residuals),
        cv_residuals=cv_residuals,
        strategy="vircv" if family.transformed else "loocv",
        gcv=_gcv_or_none(family),
        df=degrees_of_freedom(family),
        rss=family.rss,
    )
    logg.info("    finished", time=start)
    return curve


def gcv_curve(family: ModelFamily) -> CvCurve:
    """\
    Generalised cross-validation, `GCV(λ) = ‖y - X b_λ‖² / (1 - df(λ)/n)²`.

    The rotation invariant counterpart of leave-one-out: every leverage is
    replaced by the mean leverage `df(λ)/n`.
    """
    gcv = gcv_values(family)
    ratio = degrees_of_freedom(family) / family.n
    cv_residuals = family.residuals / (1.0 - ratio)[None, :, None]
    return CvCurve(
        grid=family.grid,
        press=gcv,
        cv_residuals=cv_residuals,
        strategy="gcv",
        gcv=gcv,
        df=degrees_of_freedom(family),
        rss=family.rss,
    )
