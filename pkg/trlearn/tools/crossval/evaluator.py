from typing import Callable, Dict, Union

import numpy as np

from ... import logging as logg
from ..._errors import ConfigError, DegenerateError
from ...preprocessing.regularization import RegularizationSpec
from ..model.dataset import Dataset, LambdaGrid
from ..model.family import fit_family, with_grid
from .curve import CvCurve, press_from_residuals
from .loocv import gcv_curve, gcv_values, loocv_press
from .segcv import (
    fold_families,
    fold_residuals,
    refold,
    segcv_press_explicit,
    segcv_press_implicit,
)
from .vircv import fit_vircv_family, vircv_press

STRATEGIES = ("loocv", "gcv", "segcv", "segcv_explicit", "vircv")


def normalize_strategy(strategy: str) -> str:
    """Canonical strategy name; `-` and `_` are interchangeable."""
    name = str(strategy).lower().replace("-", "_")
    if name == "segcv_implicit":
        name = "segcv"
    if name not in STRATEGIES:
        raise ConfigError(f"{strategy!r} is not a strategy. Options are {list(STRATEGIES)}")
    return name


class PressEvaluator:
    """\
    PRESS of a single response as a function of the λ grid index.

    Values are cached, so :attr:`n_evaluations` counts distinct indices only.
    """

    def __init__(
        self,
        grid: LambdaGrid,
        evaluate: Callable[[LambdaGrid], np.ndarray],
        response: int = 0,
    ):
        self.grid = grid
        self.response = response
        self._evaluate = evaluate
        self._cache: Dict[int, float] = {}

    def __call__(self, index: int) -> float:
        index = int(index)
        if not 0 <= index < len(self.grid):
            raise IndexError(f"lambda index {index} out of range for {len(self.grid)} values")
        if index not in self._cache:
            lam = float(self.grid[index])
            single = LambdaGrid(np.array([lam]), allow_zero=lam == 0)
            self._cache[index] = float(self._evaluate(single)[0, self.response])
        return self._cache[index]

    @property
    def n_evaluations(self) -> int:
        return len(self._cache)

    @property
    def evaluated(self) -> Dict[int, float]:
        """Evaluated indices and their PRESS, in evaluation order."""
        return dict(self._cache)


def _anchor_grid(grid: LambdaGrid) -> LambdaGrid:
    """One-point grid at the largest λ, used to factorise without evaluating the grid."""
    lam = grid.values[-1:]
    return LambdaGrid(lam, allow_zero=bool(lam[0] == 0))


def press_evaluator(
    data: Dataset,
    reg: RegularizationSpec,
    grid: LambdaGrid,
    strategy: str = "loocv",
    response: Union[int, str] = 0,
    fit_intercept: bool = True,
    seed=None,
) -> PressEvaluator:
    """\
    Build a cached per-λ PRESS evaluator for the search and spline strategies.

    The expensive factorisations (one SVD, or one per held-in set for
    `segcv_explicit`) are done here; each evaluation then only costs the
    per-λ work.

    Parameters
    ----------
    data
        Predictors, responses and, for segmented strategies, segment labels.
    reg
        Regularisation matrix specification.
    grid
        The λ candidates indexed by the evaluator.
    strategy
        One of `loocv`, `gcv`, `segcv`, `segcv_explicit`, `vircv`.
    response
        Column index or name of the response.
    fit_intercept
        Fit an unpenalised constant term.
    seed
        Seed of the virtual cross-validation transform.
    """
    strategy = normalize_strategy(strategy)
    if isinstance(response, str):
        if data.y_names is None or response not in data.y_names:
            raise ConfigError(f"unknown response {response!r}")
        response = data.y_names.index(response)
    if not 0 <= response < data.q:
        raise ConfigError(f"response index {response} out of range for q={data.q}")

    anchor = _anchor_grid(grid)
    if strategy == "segcv_explicit":
        folds = fold_families(data, reg, anchor, fit_intercept=fit_intercept)

        def evaluate(single):
            return press_from_residuals(fold_residuals(data, refold(folds, single)))

    elif strategy == "vircv":
        family, _ = fit_vircv_family(
            data, reg, anchor, fit_intercept=fit_intercept, seed=seed
        )

        def evaluate(single):
            return loocv_press(with_grid(family, single)).press

    else:
        family = fit_family(data, reg, anchor, fit_intercept=fit_intercept)
        curve_of = {
            "loocv": loocv_press,
            "gcv": gcv_curve,
            "segcv": lambda f: segcv_press_implicit(f, data),
        }[strategy]

        def evaluate(single):
            return curve_of(with_grid(family, single)).press

    return PressEvaluator(grid, evaluate, response=response)


def cross_validate(
    data: Dataset,
    reg: RegularizationSpec,
    grid: LambdaGrid,
    strategy: str = "loocv",
    fit_intercept: bool = True,
    seed=None,
    family=None,
) -> CvCurve:
    """\
    The cross-validation curve of `strategy` over the whole grid.

    Curves of strategies that do not produce GCV values themselves get those
    of the untransformed fit attached, when they are defined.

    Parameters
    ----------
    data
        Predictors, responses and, for segmented strategies, segment labels.
    reg
        Regularisation matrix specification.
    grid
        Regularisation parameter candidates.
    strategy
        One of `loocv`, `gcv`, `segcv`, `segcv_explicit`, `vircv`.
    fit_intercept
        Fit an unpenalised constant term.
    seed
        Seed of the virtual cross-validation transform.
    family
        An already fitted family of `data` on `grid`.
    """
    strategy = normalize_strategy(strategy)
    if strategy in ("segcv", "segcv_explicit", "vircv") and data.segments is None:
        raise ConfigError(f"strategy {strategy} needs segment labels")
    if family is None:
        family = fit_family(data, reg, grid, fit_intercept=fit_intercept)
    if strategy == "loocv":
        return loocv_press(family)
    if strategy == "gcv":
        return gcv_curve(family)
    if strategy == "segcv":
        curve = segcv_press_implicit(family, data)
    elif strategy == "segcv_explicit":
        curve = segcv_press_explicit(data, reg, grid, fit_intercept=fit_intercept, family=family)
    else:
        curve = vircv_press(data, reg, grid, fit_intercept=fit_intercept, seed=seed)
    if curve.gcv is None:
        try:
            curve = curve.with_gcv(gcv_values(family))
        except DegenerateError:
            logg.hint("GCV undefined on part of the grid")
    return curve
