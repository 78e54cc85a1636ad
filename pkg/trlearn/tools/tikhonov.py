from typing import Optional, Sequence, Union

import numpy as np
from anndata import AnnData

from .. import logging as logg
from .._errors import ConfigError
from ..preprocessing.regularization import RegularizationSpec
from .crossval import cross_validate
from .model import Dataset, LambdaGrid, coefficients_at, fit_family
from .select import chi_square_rule, grid_minimum, one_se_rule


def tikhonov_cv(
    adata: AnnData,
    response_keys: Union[str, Sequence[str]],
    segment_key: Optional[str] = None,
    reg: Union[str, RegularizationSpec] = "identity",
    lambdas: Union[LambdaGrid, Sequence[float], None] = None,
    strategy: str = "loocv",
    rule: str = "min",
    alpha: float = 0.2,
    fit_intercept: bool = True,
    key_added: str = "tikhonov_cv",
    copy: bool = False,
) -> Optional[AnnData]:
    """\
    Fit Tikhonov regression from `adata.X` to observation annotations and
    choose λ by cross-validation.

    Parameters
    ----------
    adata
        Annotated data matrix; `adata.X` holds the predictors.
    response_keys
        Column(s) of `adata.obs` holding the responses.
    segment_key
        Column of `adata.obs` with segment labels, for segmented strategies.
    reg
        Regularisation kind or specification.
    lambdas
        The λ candidates; 100 log-spaced values in `[1e-3, 1e3]` by default.
    strategy
        `loocv`, `gcv`, `segcv`, `segcv_explicit` or `vircv`.
    rule
        `min`, `one-se` or `chi2`.
    alpha
        Significance level of the χ² rule.
    fit_intercept
        Fit an unpenalised constant term.
    key_added
        Key in `adata.uns` and `adata.varm` the results are written to.
    copy
        Return a copy instead of writing to adata.

    Returns
    -------
    Depending on `copy`, returns or updates `adata` with the following fields.

    **adata.uns[key_added]** : `dict`
        `lambdas`, `press`, `gcv`, `df`, `strategy`, `rule`, the chosen
        `index` and `lambda` per response, and the `intercepts`.
    **adata.varm[key_added]** : :class:`numpy.ndarray`
        Coefficients of the chosen models, one column per response.
    """
    adata = adata.copy() if copy else adata
    if isinstance(response_keys, str):
        response_keys = [response_keys]
    if not isinstance(reg, RegularizationSpec):
        reg = RegularizationSpec(reg)
    if lambdas is None:
        grid = LambdaGrid.logspace(1e-3, 1e3, 100)
    elif isinstance(lambdas, LambdaGrid):
        grid = lambdas
    else:
        grid = LambdaGrid(np.asarray(lambdas, dtype=np.float64))
    selectors = {
        "min": grid_minimum,
        "one-se": one_se_rule,
        "chi2": lambda c, r: chi_square_rule(c, r, alpha=alpha),
    }
    if rule not in selectors:
        raise ConfigError(f"{rule!r} is not a selection rule. Options are {list(selectors)}")

    start = logg.info(f"cross-validating Tikhonov models for {list(response_keys)}")
    data = Dataset.from_anndata(adata, response_keys, segment_key=segment_key)
    family = fit_family(data, reg, grid, fit_intercept=fit_intercept)
    curve = cross_validate(
        data, reg, grid, strategy=strategy, fit_intercept=fit_intercept, family=family
    )
    chosen = [selectors[rule](curve, r) for r in range(data.q)]

    coefficients = np.empty((data.p, data.q))
    intercepts = np.empty(data.q)
    for r, result in enumerate(chosen):
        b, b0 = coefficients_at(family, result.index)
        coefficients[:, r] = b[:, r]
        intercepts[r] = b0[r]

    results = {
        "response_keys": list(response_keys),
        "strategy": curve.strategy,
        "regularization": reg.kind,
        "rule": rule,
        "lambdas": np.array(grid.values),
        "press": curve.press,
        "gcv": curve.gcv,
        "df": curve.df,
        "index": np.array([c.index for c in chosen]),
        "lambda": np.array([c.lambda_value for c in chosen]),
        "intercepts": intercepts,
    }
    adata.uns[key_added] = {k: v for k, v in results.items() if v is not None}
    adata.varm[key_added] = coefficients
    logg.info(
        f"    finished: added\n"
        f"    '{key_added}', cross-validation results (adata.uns)\n"
        f"    '{key_added}', coefficients (adata.varm)",
        time=start,
    )
    return adata if copy else None
