"""Cross-validation run behind the command line interface.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .. import logging as logg
from .._errors import ConfigError, TRLearnError
from ..preprocessing.regularization import RegularizationSpec
from ..tools.crossval import CvCurve, cross_validate, normalize_strategy
from ..tools.model import Dataset, LambdaGrid, coefficients_at, fit_family
from ..tools.select import SelectionResult, chi_square_rule, grid_minimum, one_se_rule
from ..wrapper.read import load_dataset
from ..wrapper.write import write_coefficients, write_curve, write_residuals, write_selection

RULES = ("min", "one-se", "chi2")

_RULE_ALIASES = {
    "min": "min",
    "one-se": "one-se",
    "one_se": "one-se",
    "1se": "one-se",
    "chi2": "chi2",
    "chi-square": "chi2",
    "chi_square": "chi2",
}


def parse_rules(rules: Sequence[str]) -> Tuple[str, ...]:
    """Canonical rule names, in the given order without repeats."""
    parsed = []
    for rule in rules:
        name = _RULE_ALIASES.get(rule.strip().lower())
        if name is None:
            raise ConfigError(f"{rule!r} is not a selection rule. Options are {list(RULES)}")
        if name not in parsed:
            parsed.append(name)
    if not parsed:
        raise ConfigError("no selection rule given")
    return tuple(parsed)


@dataclass
class RunConfig:
    """\
    Everything one command line run needs.

    Parameters
    ----------
    x, y
        Predictor and response CSV files.
    out
        Output directory, created if missing.
    segments
        Optional segment label file, required by segmented strategies.
    reg, epsilon
        Regularisation kind and Legendre-row scaling.
    lambda_min, lambda_max, lambda_count, linear_grid
        The λ grid; log-spaced unless `linear_grid`.
    allow_zero
        Accept `lambda_min = 0` on a linear grid.
    strategy
        `loocv`, `gcv`, `segcv`, `vircv` or `segcv-explicit`.
    rules, alpha
        Selection rules and the χ² significance level.
    threads
        Upper bound on worker threads.
    seed
        Seed of the orthonormal completion.
    fit_intercept
        Fit an unpenalised constant term.
    header
        Whether the predictor and response files start with column names;
        `None` detects it from the first line.
    """

    x: Path
    y: Path
    out: Path
    segments: Optional[Path] = None
    reg: str = "identity"
    epsilon: Optional[float] = None
    lambda_min: float = 1e-3
    lambda_max: float = 1e3
    lambda_count: int = 100
    linear_grid: bool = False
    allow_zero: bool = False
    strategy: str = "loocv"
    rules: Tuple[str, ...] = ("min",)
    alpha: float = 0.2
    threads: Optional[int] = None
    seed: int = 0
    fit_intercept: bool = True
    header: Optional[bool] = None
    _spec: RegularizationSpec = field(init=False, repr=False)

    def __post_init__(self):
        self.x, self.y, self.out = Path(self.x), Path(self.y), Path(self.out)
        if self.segments is not None:
            self.segments = Path(self.segments)
        self.strategy = normalize_strategy(self.strategy)
        self.rules = parse_rules(self.rules)
        self._spec = RegularizationSpec(self.reg, epsilon=self.epsilon)
        if not self.lambda_min < self.lambda_max:
            raise ConfigError(
                f"need lambda_min < lambda_max, got {self.lambda_min}, {self.lambda_max}"
            )
        if self.lambda_count < 2:
            raise ConfigError(f"need at least two lambda values, got {self.lambda_count}")
        if self.lambda_min < 0 or (self.lambda_min == 0 and not self.allow_zero):
            raise ConfigError("lambda_min must be positive unless lambda = 0 is allowed")
        if self.lambda_min == 0 and not self.linear_grid:
            raise ConfigError("lambda = 0 needs a linear grid")
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.threads is not None and self.threads < 1:
            raise ConfigError(f"threads must be at least 1, got {self.threads}")
        if self.strategy in ("segcv", "segcv_explicit", "vircv") and self.segments is None:
            raise ConfigError(f"strategy {self.strategy} needs a segment file")

    @property
    def regularization(self) -> RegularizationSpec:
        return self._spec

    def grid(self) -> LambdaGrid:
        if self.linear_grid:
            return LambdaGrid.linspace(
                self.lambda_min, self.lambda_max, self.lambda_count, allow_zero=self.allow_zero
            )
        return LambdaGrid.logspace(self.lambda_min, self.lambda_max, self.lambda_count)


def _set_threads(threads: Optional[int]):
    from .._settings import settings

    if threads is not None:
        settings.n_jobs = threads


def select(curve: CvCurve, rules: Sequence[str], alpha: float) -> List[SelectionResult]:
    """Apply every rule to every response."""
    results = []
    for r in range(curve.q):
        for rule in rules:
            if rule == "min":
                results.append(grid_minimum(curve, r))
            elif rule == "one-se":
                results.append(one_se_rule(curve, r))
            else:
                results.append(chi_square_rule(curve, r, alpha=alpha))
    return results


def execute(config: RunConfig) -> Dict[str, Path]:
    """\
    Load the data, evaluate the curve, apply the rules and write all outputs.

    Returns
    -------
    Paths of `curve.csv`, `selection.json`, `coefficients.csv` and
    `residuals.csv` keyed by their stem.
    """
    from .._settings import settings

    settings.seed = config.seed
    _set_threads(config.threads)
    start = logg.info(f"running {config.strategy} with {config.reg} regularisation")

    data = load_dataset(config.x, config.y, config.segments, header=config.header)
    family = fit_family(
        data, config.regularization, config.grid(), fit_intercept=config.fit_intercept
    )
    curve = cross_validate(
        data,
        config.regularization,
        family.grid,
        strategy=config.strategy,
        fit_intercept=config.fit_intercept,
        seed=config.seed,
        family=family,
    )
    results = select(curve, config.rules, config.alpha)

    y_names = data.y_names or tuple(f"r{r + 1}" for r in range(data.q))
    records, coefficients, residuals = [], {}, {}
    for result in results:
        r = result.response
        label = f"{result.rule}_{y_names[r]}"
        record = result.to_dict()
        record["alpha"] = config.alpha if result.rule == "chi_square" else None
        record["response_name"] = y_names[r]
        records.append(record)
        b, b0 = coefficients_at(family, result.index)
        coefficients[label] = np.concatenate([[b0[r]], b[:, r]])
        residuals[label] = curve.cv_residuals[:, result.index, r]

    config.out.mkdir(parents=True, exist_ok=True)
    paths = {
        "curve": write_curve(config.out / "curve.csv", curve),
        "selection": write_selection(config.out / "selection.json", records),
        "coefficients": write_coefficients(
            config.out / "coefficients.csv", coefficients, data.x_names
        ),
        "residuals": write_residuals(config.out / "residuals.csv", residuals),
    }
    logg.info(f"    wrote results to {config.out}", time=start)
    return paths


def run(config: RunConfig) -> int:
    """\
    Run and map failures to exit codes: 2 input, 3 numeric, 4 configuration.
    """
    try:
        execute(config)
    except TRLearnError as e:
        logg.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    return 0
