"""Writing
"""

import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from .. import logging as logg
from ..tools.crossval.curve import CvCurve

FLOAT_FORMAT = "%.17g"

_PathLike = Union[str, Path]


def _to_csv(df: pd.DataFrame, path: Path, index: bool = False):
    df.to_csv(path, index=index, float_format=FLOAT_FORMAT, lineterminator="\n", na_rep="nan")
    logg.debug(f"wrote {path}")


def write_matrix_csv(
    path: _PathLike, values: np.ndarray, names: Optional[Sequence[str]] = None
) -> Path:
    """Write a matrix with a header line, 17 significant digits per value."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 1:
        values = values.reshape(-1, 1)
    if names is None:
        names = [f"c{j + 1}" for j in range(values.shape[1])]
    path = Path(path)
    _to_csv(pd.DataFrame(values, columns=list(names)), path)
    return path


def write_curve(path: _PathLike, curve: CvCurve) -> Path:
    """\
    Write `lambda, press_r1..press_rq, gcv_r1..gcv_rq, df`, one line per λ.

    GCV and df columns are `nan` where the curve carries no values.
    """
    g, q = curve.press.shape
    columns: Dict[str, np.ndarray] = {"lambda": curve.grid.values}
    for r in range(q):
        columns[f"press_r{r + 1}"] = curve.press[:, r]
    gcv = curve.gcv if curve.gcv is not None else np.full((g, q), np.nan)
    for r in range(q):
        columns[f"gcv_r{r + 1}"] = gcv[:, r]
    columns["df"] = curve.df if curve.df is not None else np.full(g, np.nan)
    path = Path(path)
    _to_csv(pd.DataFrame(columns), path)
    return path


def write_selection(path: _PathLike, records: List[dict]) -> Path:
    """Write selection records as a JSON list."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(records, f, indent=2, sort_keys=True)
        f.write("\n")
    logg.debug(f"wrote {path}")
    return path


def write_coefficients(
    path: _PathLike,
    columns: Dict[str, np.ndarray],
    x_names: Optional[Sequence[str]] = None,
) -> Path:
    """\
    Write one column of `[intercept, b_1, ..., b_p]` per selected model.
    """
    if not columns:
        raise ValueError("no selected models to write")
    p = next(iter(columns.values())).shape[0] - 1
    terms = ["intercept"] + list(x_names or (f"x{j + 1}" for j in range(p)))
    df = pd.DataFrame(columns, index=pd.Index(terms, name="term"))
    path = Path(path)
    _to_csv(df, path, index=True)
    return path


def write_residuals(path: _PathLike, columns: Dict[str, np.ndarray]) -> Path:
    """Write the cross-validated residuals of every selected model, one column each."""
    names = list(columns)
    return write_matrix_csv(path, np.column_stack([columns[k] for k in names]), names)
