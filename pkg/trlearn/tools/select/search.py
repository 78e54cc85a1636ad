from typing import Callable

import numpy as np
import scipy.optimize

from ... import logging as logg
from ..._errors import ConfigError
from ..model.dataset import LambdaGrid
from .rules import SelectionResult


class IndexObjective:
    """Evaluate at grid indices only, caching each distinct index."""

    def __init__(self, evaluator: Callable[[int], float], size: int):
        self.evaluator = evaluator
        self.size = size
        self.values = {}

    def at(self, index: int) -> float:
        index = int(min(max(index, 0), self.size - 1))
        if index not in self.values:
            self.values[index] = float(self.evaluator(index))
        return self.values[index]

    def __call__(self, x: float) -> float:
        return self.at(int(np.rint(x)))


def _descend(objective: IndexObjective, j: int) -> int:
    """Walk downhill over neighbouring indices until `j` is a local minimum."""
    while True:
        best = j
        for k in (j + 1, j - 1):
            if 0 <= k < objective.size and objective.at(k) < objective.at(best):
                best = k
        if best == j:
            return j
        j = best


def bounded_index_search(
    objective: IndexObjective, xatol: float = 0.5, maxiter: int = 500
) -> int:
    """Brent search over grid indices followed by a discrete descent."""
    scipy.optimize.minimize_scalar(
        objective,
        bounds=(0.0, objective.size - 1.0),
        method="bounded",
        options={"xatol": xatol, "maxiter": maxiter},
    )
    start = min(objective.values, key=lambda k: (objective.values[k], -k))
    return _descend(objective, start)


def min_press_search(
    evaluator: Callable[[int], float],
    grid: LambdaGrid,
    xatol: float = 0.5,
    maxiter: int = 500,
) -> SelectionResult:
    """\
    Locate a PRESS minimum with few evaluations.

    Brent's bounded minimiser (golden section steps with parabolic
    interpolation) runs over the index range of `grid`, rounding every trial
    point to the nearest grid index. The best index found is then polished
    by a discrete descent, so the result is never worse than its grid
    neighbours. On curves with several minima a local one may be returned.

    Parameters
    ----------
    evaluator
        Maps a grid index to the PRESS there, e.g. a
        :class:`~trlearn.tl.PressEvaluator`.
    grid
        The λ candidates, at least 4.
    xatol
        Absolute tolerance of the minimiser in index units.
    maxiter
        Iteration limit of the minimiser.

    Returns
    -------
    :class:`SelectionResult` with `rule="min_press"` and the number of
    distinct indices evaluated.
    """
    g = len(grid)
    if g < 4:
        raise ConfigError(f"search needs at least 4 lambda values, got {g}")
    objective = IndexObjective(evaluator, g)
    j = bounded_index_search(objective, xatol=xatol, maxiter=maxiter)
    logg.info(
        f"search settled on lambda index {j} of {g} after "
        f"{len(objective.values)} evaluations"
    )
    if j in (0, g - 1):
        logg.hint("search minimum at the end of the lambda grid; consider widening it")
    return SelectionResult(
        lambda_value=float(grid[j]),
        index=j,
        criterion=objective.at(j),
        rule="min_press",
        evaluations=len(objective.values),
    )
