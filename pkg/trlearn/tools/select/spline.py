from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.interpolate import CubicSpline

from ... import logging as logg
from ..._errors import ConfigError
from ..model.dataset import LambdaGrid
from .rules import SelectionResult, _last_argmin
from .search import IndexObjective, bounded_index_search


@dataclass(frozen=True, eq=False)
class SplineEstimate:
    """\
    Cubic spline estimate of a PRESS curve over `log10(λ)`.

    Attributes
    ----------
    grid
        The λ candidates.
    knots
        Grid indices with exact PRESS values, increasing.
    knot_press
        Exact PRESS at the knots.
    spline
        Interpolant through `(log10(grid[knots]), knot_press)`.
    max_error
        Largest relative leave-one-knot-out error of the final pass.
    """

    grid: LambdaGrid
    knots: np.ndarray
    knot_press: np.ndarray
    spline: CubicSpline
    max_error: float

    @property
    def knot_lambdas(self) -> np.ndarray:
        return self.grid.values[self.knots]

    @property
    def n_evaluations(self) -> int:
        return self.knots.shape[0]

    def __call__(self, lambdas) -> np.ndarray:
        return self.spline(np.log10(np.asarray(lambdas, dtype=np.float64)))

    def curve(self) -> np.ndarray:
        """Estimated PRESS on the whole grid; exact at the knots."""
        estimate = self.spline(self.grid.log10)
        estimate[self.knots] = self.knot_press
        return estimate

    def minimum(self) -> SelectionResult:
        """Grid minimum of the estimated curve."""
        estimate = self.curve()
        j = _last_argmin(estimate)
        return SelectionResult(
            lambda_value=float(self.grid[j]),
            index=j,
            criterion=float(estimate[j]),
            rule="min_press",
            evaluations=self.n_evaluations,
        )


def _relative_error(estimate: float, exact: float) -> float:
    return abs(estimate - exact) / abs(exact) if exact != 0 else abs(estimate)


def _validation_errors(x: np.ndarray, y: np.ndarray, bc_type) -> np.ndarray:
    """Relative error at every interior knot of the spline fitted without it."""
    errors = np.zeros(x.shape[0])
    for t in range(1, x.shape[0] - 1):
        keep = np.arange(x.shape[0]) != t
        loo = CubicSpline(x[keep], y[keep], bc_type=bc_type)
        errors[t] = _relative_error(float(loo(x[t])), y[t])
    return errors


def spline_press_estimate(
    evaluator: Callable[[int], float],
    grid: LambdaGrid,
    rel_tol: float = 1e-3,
    n_start: int = 8,
    seed_with_search: bool = False,
    bc_type: Union[str, tuple] = "natural",
    max_rounds: int = 100,
) -> SplineEstimate:
    """\
    Estimate a PRESS curve from few exact evaluations by adaptive spline fitting.

    Starting from `n_start` log-equidistant knots, every interior knot is
    predicted by the spline through the remaining knots. Wherever that
    prediction misses by more than `rel_tol` (relative), the indices halfway
    to both neighbouring knots are evaluated and added. Refinement stops when
    all validated errors are within `rel_tol` or no new indices remain.

    Parameters
    ----------
    evaluator
        Maps a grid index to the exact PRESS there.
    grid
        The λ candidates, at least 8 and all positive.
    rel_tol
        Accepted relative leave-one-knot-out error.
    n_start
        Number of initial knots.
    seed_with_search
        Also start from the indices visited by a Brent search for the minimum,
        concentrating knots where the minimum lies.
    bc_type
        Boundary condition passed to :class:`scipy.interpolate.CubicSpline`.
    max_rounds
        Upper bound on refinement rounds.

    Returns
    -------
    :class:`SplineEstimate`
    """
    g = len(grid)
    if g < 8:
        raise ConfigError(f"spline estimation needs at least 8 lambda values, got {g}")
    if not rel_tol > 0:
        raise ConfigError(f"rel_tol must be positive, got {rel_tol}")
    if n_start < 4:
        raise ConfigError(f"need at least 4 starting knots, got {n_start}")
    x_all = grid.log10

    objective = IndexObjective(evaluator, g)
    knots = set(np.unique(np.rint(np.linspace(0, g - 1, min(n_start, g))).astype(int)).tolist())
    if seed_with_search:
        bounded_index_search(objective)
        knots |= set(objective.values)

    start = logg.info(f"estimating PRESS curve by splines from {len(knots)} knots")
    errors = np.zeros(0)
    for round_ in range(max_rounds):
        idx = np.array(sorted(knots))
        y = np.array([objective.at(i) for i in idx])
        errors = _validation_errors(x_all[idx], y, bc_type)
        bad = np.flatnonzero(errors > rel_tol)
        logg.debug(
            f"    round {round_}: {idx.shape[0]} knots, max error {errors.max():.3g}, "
            f"{bad.size} above tolerance"
        )
        new = set()
        for t in bad:
            new.add(int((idx[t - 1] + idx[t]) // 2))
            new.add(int((idx[t] + idx[t + 1] + 1) // 2))
        new -= knots
        if not new:
            break
        knots |= new
    else:
        logg.warning(f"spline refinement stopped after {max_rounds} rounds")

    idx = np.array(sorted(knots))
    y = np.array([objective.at(i) for i in idx])
    estimate = SplineEstimate(
        grid=grid,
        knots=idx,
        knot_press=y,
        spline=CubicSpline(x_all[idx], y, bc_type=bc_type),
        max_error=float(errors.max()) if errors.size else 0.0,
    )
    logg.info(
        f"    finished with {idx.shape[0]} of {g} exact evaluations, "
        f"max validated error {estimate.max_error:.3g}",
        time=start,
    )
    return estimate
