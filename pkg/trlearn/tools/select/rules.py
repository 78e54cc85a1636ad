from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
import scipy.optimize
import scipy.special

from ... import logging as logg
from ..._errors import ConfigError, NumericError
from ..crossval.curve import CvCurve

_RULE = Literal["min_press", "min_gcv", "one_se", "chi_square"]


@dataclass(frozen=True)
class SelectionResult:
    """\
    A λ chosen from the candidate grid.

    Attributes
    ----------
    lambda_value
        The chosen λ, an element of the grid.
    index
        Its grid index.
    criterion
        PRESS (or GCV) at the chosen λ.
    rule
        `min_press`, `min_gcv`, `one_se` or `chi_square`.
    evaluations
        Number of exact criterion evaluations the choice needed.
    response
        Index of the response the choice applies to.
    threshold
        Admission threshold of the one-standard-error and χ² rules.
    """

    lambda_value: float
    index: int
    criterion: float
    rule: _RULE
    evaluations: int
    response: int = 0
    threshold: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "lambda": self.lambda_value,
            "index": self.index,
            "criterion_value": self.criterion,
            "rule": self.rule,
            "evaluations": self.evaluations,
            "response": self.response,
            "threshold": self.threshold,
        }


def _column(curve: CvCurve, response: int, values: Optional[np.ndarray] = None) -> np.ndarray:
    values = curve.press if values is None else values
    if not 0 <= response < values.shape[1]:
        raise ConfigError(f"response index {response} out of range for q={values.shape[1]}")
    return values[:, response]


def _last_argmin(values: np.ndarray) -> int:
    # ties go to the largest index, the most regularised model
    return int(values.shape[0] - 1 - np.argmin(values[::-1]))


def _largest_admissible(admissible: np.ndarray) -> int:
    return int(np.flatnonzero(admissible)[-1])


def grid_minimum(curve: CvCurve, response: int = 0, criterion: str = "press") -> SelectionResult:
    """\
    λ with the smallest PRESS (or GCV) on the grid.

    Ties are broken toward the larger λ.

    Parameters
    ----------
    curve
        Evaluated cross-validation curve.
    response
        Response column.
    criterion
        `press` or `gcv`; `gcv` needs a curve carrying GCV values.
    """
    if criterion == "gcv" or curve.strategy == "gcv":
        if curve.gcv is None:
            raise ConfigError(f"{curve.strategy} curve carries no GCV values")
        values = _column(curve, response, curve.gcv)
        rule = "min_gcv"
    elif criterion == "press":
        values = _column(curve, response)
        rule = "min_press"
    else:
        raise ConfigError(f"criterion must be 'press' or 'gcv', got {criterion!r}")

    j = _last_argmin(values)
    if j in (0, len(curve.grid) - 1):
        logg.hint(
            f"minimum at the {'lower' if j == 0 else 'upper'} end of the lambda grid; "
            "consider widening it"
        )
    return SelectionResult(
        lambda_value=float(curve.grid[j]),
        index=j,
        criterion=float(values[j]),
        rule=rule,
        evaluations=len(curve.grid),
        response=response,
    )


def one_se_rule(curve: CvCurve, response: int = 0, scale: str = "mean") -> SelectionResult:
    """\
    Largest λ whose PRESS is within one standard error of the minimum.

    The squared cross-validated residuals at the PRESS minimum give the
    standard error `SE = sd(e) / √n` (sample standard deviation).

    Parameters
    ----------
    curve
        Cross-validation curve with residuals.
    response
        Response column.
    scale
        `mean` compares `PRESS/n` with `PRESS_min/n + SE`; `total` compares
        `PRESS` with `PRESS_min + SE`.
    """
    if scale not in ("mean", "total"):
        raise ConfigError(f"scale must be 'mean' or 'total', got {scale!r}")
    press = _column(curve, response)
    j_min = _last_argmin(press)
    n = curve.n
    e = np.square(curve.cv_residuals[:, j_min, response])
    se = float(np.std(e, ddof=1) / np.sqrt(n))
    divisor = n if scale == "mean" else 1
    threshold = press[j_min] / divisor + se
    j = _largest_admissible(press / divisor <= threshold)
    logg.debug(f"one standard error rule: SE {se:.6g}, minimum at index {j_min}, chose {j}")
    return SelectionResult(
        lambda_value=float(curve.grid[j]),
        index=j,
        criterion=float(press[j]),
        rule="one_se",
        evaluations=len(curve.grid),
        response=response,
        threshold=float(threshold),
    )


def chi2_lower_quantile(dof: float, alpha: float) -> float:
    """\
    Lower `alpha` quantile of the χ² distribution with `dof` degrees of freedom.

    Solves `P(dof/2, x/2) = alpha` for the regularised lower incomplete gamma
    function `P` with Brent's root finder.
    """
    if not 0 < alpha < 1:
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha}")
    if not dof > 0:
        raise ConfigError(f"degrees of freedom must be positive, got {dof}")

    def cdf_gap(x):
        return scipy.special.gammainc(dof / 2.0, x / 2.0) - alpha

    upper = max(1.0, 2.0 * dof)
    while cdf_gap(upper) < 0:
        upper *= 2.0
        if not np.isfinite(upper):
            raise NumericError(f"cannot bracket the chi-square quantile for dof={dof}")
    try:
        return float(
            scipy.optimize.brentq(cdf_gap, 0.0, upper, xtol=1e-14, rtol=1e-12, maxiter=500)
        )
    except (RuntimeError, ValueError) as e:
        raise NumericError(f"chi-square quantile for dof={dof}, alpha={alpha} failed: {e}") from e


def chi_square_rule(curve: CvCurve, response: int = 0, alpha: float = 0.2) -> SelectionResult:
    """\
    Largest λ with `n·PRESS_min / PRESS(λ)` at or above the lower `alpha`
    quantile of the χ² distribution with `n` degrees of freedom.

    When the quantile exceeds `n` no λ qualifies and the PRESS minimum is
    returned.
    """
    press = _column(curve, response)
    n = curve.n
    q = chi2_lower_quantile(n, alpha)
    j_min = _last_argmin(press)
    p_min = press[j_min]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(press > 0, n * p_min / press, float(n))
    admissible = ratio >= q
    if not admissible.any():
        logg.hint(
            f"chi-square quantile {q:.6g} exceeds n={n}; falling back to the PRESS minimum"
        )
        j = j_min
    else:
        j = _largest_admissible(admissible)
    return SelectionResult(
        lambda_value=float(curve.grid[j]),
        index=j,
        criterion=float(press[j]),
        rule="chi_square",
        evaluations=len(curve.grid),
        response=response,
        threshold=q,
    )
