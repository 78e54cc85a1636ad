"""Reading
"""

from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from .. import logging as logg
from .._errors import DimensionError, InputError
from ..tools.model.dataset import Dataset, relabel_segments

_PathLike = Union[str, Path]


def _is_number(cell) -> bool:
    try:
        float(cell)
    except (TypeError, ValueError):
        return False
    return True


def _read_cells(path: Path) -> pd.DataFrame:
    if not path.exists():
        raise InputError("file not found", path=path)
    try:
        cells = pd.read_csv(
            path,
            header=None,
            dtype=str,
            na_filter=False,
            skip_blank_lines=False,
            encoding="utf-8-sig",
            engine="python",
        )
    except pd.errors.EmptyDataError:
        raise InputError("file is empty", path=path)
    except pd.errors.ParserError as e:
        # "Expected 3 fields in line 4, saw 5"
        msg = str(e)
        row = None
        if " line " in msg:
            token = msg.split(" line ", 1)[1].split(",", 1)[0].strip(" .")
            row = int(token) if token.isdigit() else None
        raise InputError(f"ragged row: {msg}", path=path, row=row) from e
    except UnicodeDecodeError as e:
        raise InputError(f"not UTF-8 text: {e}", path=path) from e

    empty = cells.apply(lambda col: col.isna() | (col.astype(str).str.strip() == ""))
    # trailing blank lines
    while len(cells) and empty.iloc[-1].all():
        cells, empty = cells.iloc[:-1], empty.iloc[:-1]
    if len(cells) == 0:
        raise InputError("file is empty", path=path)
    return cells


def read_matrix_csv(
    path: _PathLike, header: Optional[bool] = None
) -> Tuple[np.ndarray, Optional[List[str]]]:
    """\
    Read a numeric CSV matrix with an optional header line.

    Parameters
    ----------
    path
        Path to the CSV file (UTF-8, comma separated, LF or CRLF).
    header
        Whether the first line holds column names. By default a first line
        with any non-numeric field is taken as the header; pass `True` for
        numeric names such as wavelengths, `False` to read every line as data.

    Returns
    -------
    The `n × k` matrix and the column names, or `None` without header.
    """
    path = Path(path)
    cells = _read_cells(path)

    names = None
    first_line = 1
    if header is None:
        header = not all(
            _is_number(c) for c in cells.iloc[0] if isinstance(c, str) and c.strip()
        )
    if header:
        names = [str(c).strip() for c in cells.iloc[0]]
        cells = cells.iloc[1:]
        first_line = 2
        if len(cells) == 0:
            raise InputError("file has a header but no data rows", path=path)

    values = np.empty(cells.shape, dtype=np.float64)
    for i, row in enumerate(cells.itertuples(index=False)):
        for j, cell in enumerate(row):
            text = cell.strip() if isinstance(cell, str) else ""
            if text == "":
                raise InputError(
                    "missing value (ragged row?)", path=path, row=first_line + i, col=j + 1
                )
            try:
                values[i, j] = float(text)
            except ValueError:
                raise InputError(
                    f"non-numeric value {text!r}", path=path, row=first_line + i, col=j + 1
                )
    logg.debug(f"read {values.shape[0]}×{values.shape[1]} matrix from {path}")
    return values, names


def read_segments(path: _PathLike, n: Optional[int] = None) -> np.ndarray:
    """\
    Read one integer segment label per row and relabel them densely as `1..K`.

    Relabelling is reported with a warning.
    """
    path = Path(path)
    values, _ = read_matrix_csv(path)
    if values.shape[1] != 1:
        raise InputError(f"expected one label per row, got {values.shape[1]} columns", path=path)
    labels = values[:, 0]
    fractional = np.flatnonzero(labels != np.round(labels))
    if fractional.size:
        raise InputError(
            f"segment label {labels[fractional[0]]:g} is not an integer",
            path=path,
            row=int(fractional[0]) + 1,
        )
    if n is not None and labels.shape[0] != n:
        raise DimensionError(f"{path}: got {labels.shape[0]} segment labels for n={n} samples")
    dense, changed = relabel_segments(labels.astype(np.int64))
    if changed:
        logg.warning(f"segment labels in {path} relabelled densely as 1..{int(dense.max())}")
    return dense


def load_dataset(
    x_path: _PathLike,
    y_path: _PathLike,
    segments_path: Optional[_PathLike] = None,
    header: Optional[bool] = None,
) -> Dataset:
    """\
    Read predictors, responses and optional segment labels from CSV files.

    Parameters
    ----------
    x_path
        Predictor matrix, `n` rows × `p` numeric columns, optional header.
    y_path
        Response matrix, `n` rows × `q` numeric columns, optional header.
    segments_path
        One integer label per row. Samples sharing a label are held out
        together in segmented cross-validation.
    header
        Header handling of the predictor and response files, see
        :func:`read_matrix_csv`.

    Returns
    -------
    :class:`~trlearn.tl.Dataset`
    """
    start = logg.info(f"reading dataset from {x_path} and {y_path}")
    x, x_names = read_matrix_csv(x_path, header=header)
    y, y_names = read_matrix_csv(y_path, header=header)
    if y.shape[0] != x.shape[0]:
        raise DimensionError(
            f"{y_path} has {y.shape[0]} rows but {x_path} has {x.shape[0]}"
        )
    segments = None
    if segments_path is not None:
        segments = read_segments(segments_path, n=x.shape[0])
    data = Dataset(x=x, y=y, segments=segments, x_names=x_names, y_names=y_names)
    logg.info(
        f"    n={data.n}, p={data.p}, q={data.q}, {data.n_segments} segments",
        time=start,
    )
    return data
