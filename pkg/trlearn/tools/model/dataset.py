from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from anndata import AnnData

from ..._errors import ConfigError, DimensionError


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def relabel_segments(labels: Sequence) -> Tuple[np.ndarray, bool]:
    """\
    Map arbitrary segment labels to dense ids `1..K`.

    Labels are ordered by value, so `[3, 3, 7]`
    becomes `[1, 1, 2]`.

    Returns
    -------
    The dense labels and whether any label changed.
    """
    labels = np.asarray(labels)
    uniques, codes = np.unique(labels, return_inverse=True)
    dense = codes.astype(np.int64) + 1
    changed = not np.array_equal(dense, labels)
    return dense, changed


@dataclass(frozen=True, eq=False)
class Dataset:
    """\
    Predictors, responses and optional segment labels of one calibration problem.

    Parameters
    ----------
    x
        Uncentred predictors of shape `n × p`.
    y
        Uncentred responses of shape `n × q` (a vector is one response).
    segments
        Optional segment id per sample, dense in `1..K`. Samples sharing an id
        are held out together in segmented cross-validation.
    x_names, y_names
        Optional column names, kept for exports.
    """

    x: np.ndarray
    y: np.ndarray
    segments: Optional[np.ndarray] = None
    x_names: Optional[Tuple[str, ...]] = None
    y_names: Optional[Tuple[str, ...]] = None
    x_means: np.ndarray = field(init=False, repr=False)
    y_means: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x = np.array(self.x, dtype=np.float64)
        y = np.array(self.y, dtype=np.float64)
        if y.ndim == 1:
            y = y.reshape(-1, 1)
        if x.ndim != 2 or y.ndim != 2:
            raise DimensionError("predictors and responses must be matrices")
        n, p = x.shape
        if n < 2:
            raise DimensionError(f"need at least two samples, got n={n}")
        if p < 1 or y.shape[1] < 1:
            raise DimensionError("predictors and responses need at least one column")
        if y.shape[0] != n:
            raise DimensionError(
                f"responses have {y.shape[0]} rows but predictors have {n}"
            )
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise DimensionError("predictors and responses must be finite")

        segments = self.segments
        if segments is not None:
            segments = np.asarray(segments)
            if segments.shape != (n,):
                raise DimensionError(
                    f"got {segments.size} segment labels for {n} samples"
                )
            if not np.issubdtype(segments.dtype, np.integer):
                if not np.all(np.equal(np.mod(segments, 1), 0)):
                    raise DimensionError("segment labels must be integers")
            segments = segments.astype(np.int64)
            k = int(segments.max())
            if segments.min() != 1 or np.unique(segments).size != k:
                raise DimensionError(
                    "segment labels must use every id in 1..K; "
                    "relabel them with `relabel_segments`"
                )
            segments = _frozen(segments)

        for name in ("x_names", "y_names"):
            names = getattr(self, name)
            if names is not None:
                object.__setattr__(self, name, tuple(str(s) for s in names))
        if self.x_names is not None and len(self.x_names) != p:
            raise DimensionError(f"got {len(self.x_names)} predictor names for p={p}")
        if self.y_names is not None and len(self.y_names) != y.shape[1]:
            raise DimensionError(
                f"got {len(self.y_names)} response names for q={y.shape[1]}"
            )

        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", _frozen(y))
        object.__setattr__(self, "segments", segments)
        object.__setattr__(self, "x_means", _frozen(x.mean(axis=0)))
        object.__setattr__(self, "y_means", _frozen(y.mean(axis=0)))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    @property
    def q(self) -> int:
        return self.y.shape[1]

    @property
    def n_segments(self) -> int:
        return 0 if self.segments is None else int(self.segments.max())

    def segment_indices(self) -> List[np.ndarray]:
        """Row indices of segments `1..K`, in that order."""
        if self.segments is None:
            raise ConfigError("dataset has no segment labels")
        return [np.flatnonzero(self.segments == k) for k in range(1, self.n_segments + 1)]

    def column_sds(self) -> np.ndarray:
        """Sample standard deviations of the predictor columns."""
        return self.x.std(axis=0, ddof=1)

    def subset(self, rows: np.ndarray) -> "Dataset":
        """Dataset restricted to `rows`; segment labels are dropped."""
        return Dataset(
            x=self.x[rows], y=self.y[rows], x_names=self.x_names, y_names=self.y_names
        )

    def with_segments(self, segments: Optional[Sequence[int]]) -> "Dataset":
        return Dataset(
            x=self.x,
            y=self.y,
            segments=segments,
            x_names=self.x_names,
            y_names=self.y_names,
        )

    @classmethod
    def from_anndata(
        cls,
        adata: AnnData,
        response_keys: Sequence[str],
        segment_key: Optional[str] = None,
    ) -> "Dataset":
        """\
        Build a dataset from an annotated data matrix.

        Parameters
        ----------
        adata
            Annotated data matrix; `adata.X` holds the predictors (samples ×
            variables, e.g. spectra × wavelengths).
        response_keys
            Columns of `adata.obs` holding the responses.
        segment_key
            Optional column of `adata.obs` with segment labels; labels are
            relabelled densely.
        """
        from scipy.sparse import issparse

        x = adata.X.toarray() if issparse(adata.X) else np.asarray(adata.X)
        missing = [k for k in response_keys if k not in adata.obs]
        if missing:
            raise ConfigError(f"responses {missing} not found in adata.obs")
        y = adata.obs[list(response_keys)].to_numpy(dtype=np.float64)
        segments = None
        if segment_key is not None:
            if segment_key not in adata.obs:
                raise ConfigError(f"segment key {segment_key!r} not found in adata.obs")
            segments, _ = relabel_segments(adata.obs[segment_key].to_numpy())
        return cls(
            x=x,
            y=y,
            segments=segments,
            x_names=list(adata.var_names),
            y_names=list(response_keys),
        )

    def to_anndata(self) -> AnnData:
        """Annotated data matrix with responses (and segments) in `.obs`."""
        import pandas as pd

        y_names = self.y_names or tuple(f"y{j + 1}" for j in range(self.q))
        obs = pd.DataFrame(self.y, columns=list(y_names))
        obs.index = obs.index.astype(str)
        if self.segments is not None:
            obs["segment"] = self.segments
        var = pd.DataFrame(
            index=list(self.x_names or (f"x{j + 1}" for j in range(self.p)))
        )
        return AnnData(X=np.array(self.x), obs=obs, var=var)


@dataclass(frozen=True, eq=False)
class LambdaGrid:
    """\
    Strictly increasing regularisation parameter candidates.

    `λ = 0` is only accepted as the first value and only with `allow_zero=True`.
    """

    values: np.ndarray
    allow_zero: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).ravel()
        if values.size == 0:
            raise ConfigError("lambda grid is empty")
        if not np.all(np.isfinite(values)):
            raise ConfigError("lambda grid contains NaN or Inf")
        if np.any(np.diff(values) <= 0):
            raise ConfigError("lambda grid must be strictly increasing")
        if values[0] < 0 or (values[0] == 0 and not self.allow_zero):
            raise ConfigError(
                "lambda values must be positive; pass allow_zero=True to include 0"
            )
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def logspace(cls, lambda_min: float, lambda_max: float, count: int = 1000) -> "LambdaGrid":
        """`count` values spaced uniformly on a log scale."""
        if not 0 < lambda_min < lambda_max:
            raise ConfigError(
                f"need 0 < lambda_min < lambda_max, got {lambda_min}, {lambda_max}"
            )
        if count < 2:
            raise ConfigError(f"need at least two lambda values, got {count}")
        return cls(np.logspace(np.log10(lambda_min), np.log10(lambda_max), count))

    @classmethod
    def linspace(
        cls, lambda_min: float, lambda_max: float, count: int = 1000, allow_zero: bool = False
    ) -> "LambdaGrid":
        if not 0 <= lambda_min < lambda_max:
            raise ConfigError(
                f"need 0 <= lambda_min < lambda_max, got {lambda_min}, {lambda_max}"
            )
        if count < 2:
            raise ConfigError(f"need at least two lambda values, got {count}")
        return cls(np.linspace(lambda_min, lambda_max, count), allow_zero=allow_zero)

    def __len__(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, i):
        return self.values[i]

    @property
    def has_zero(self) -> bool:
        return bool(self.values[0] == 0)

    @property
    def log10(self) -> np.ndarray:
        if self.has_zero:
            raise ConfigError("log10 of a lambda grid containing 0")
        return np.log10(self.values)
