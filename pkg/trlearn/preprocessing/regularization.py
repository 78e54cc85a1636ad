from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
import scipy.linalg

from .. import logging as logg
from .._errors import ConditioningError, ConfigError, DimensionError

_KIND = Literal["identity", "standardize", "derivative1", "derivative2"]

_KIND_ALIASES = {
    "identity": "identity",
    "l2": "identity",
    "standardize": "standardize",
    "std": "standardize",
    "derivative1": "derivative1",
    "d1": "derivative1",
    "derivative2": "derivative2",
    "d2": "derivative2",
}

# relative residual accepted after applying L^-1
_SOLVE_TOL = 1e-8


@dataclass(frozen=True)
class RegularizationSpec:
    """\
    Description of the regularisation matrix `L` in `‖Xb - y‖² + λ‖Lb‖²`.

    Parameters
    ----------
    kind
        `identity` (ridge), `standardize` (diagonal of column standard
        deviations), `derivative1` or `derivative2` (finite differences
        completed with scaled Legendre rows). The short forms `std`, `d1`
        and `d2` are accepted.
    epsilon
        Scaling of the Legendre rows; rows are multiplied by `sqrt(epsilon)`.
        Defaults to `settings.epsilon`.
    sigma_floor
        Smallest standard deviation put on the diagonal for `standardize`.
        Defaults to `1e-12 * max(sd)`.
    """

    kind: _KIND = "identity"
    epsilon: Optional[float] = None
    sigma_floor: Optional[float] = None

    def __post_init__(self):
        from .._settings import settings

        kind = _KIND_ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise ConfigError(
                f"{self.kind!r} is not a regularisation kind. "
                f"Options are {sorted(set(_KIND_ALIASES.values()))}"
            )
        object.__setattr__(self, "kind", kind)
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", settings.epsilon)
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if self.sigma_floor is not None and not self.sigma_floor > 0:
            raise ConfigError(f"sigma_floor must be positive, got {self.sigma_floor}")

    @property
    def order(self) -> int:
        """Order of the difference stencil, 0 for the diagonal kinds."""
        return {"derivative1": 1, "derivative2": 2}.get(self.kind, 0)


@dataclass(frozen=True, eq=False)
class RegularizationOperator:
    """\
    A square invertible regularisation matrix `L` with a cached factorisation.

    Identity and diagonal operators are applied elementwise, general ones
    through an LU factorisation computed once at construction.
    """

    l: np.ndarray
    kind: str
    _diagonal: Optional[np.ndarray] = field(default=None, repr=False)
    _lu: Optional[tuple] = field(default=None, repr=False)

    @property
    def p(self) -> int:
        return self.l.shape[0]

    @property
    def is_identity(self) -> bool:
        return self.kind == "identity"

    def apply(self, b: np.ndarray) -> np.ndarray:
        """`L @ b`."""
        if self.is_identity:
            return np.array(b, dtype=np.float64)
        if self._diagonal is not None:
            return _scale_rows(b, self._diagonal)
        return self.l @ b

    def solve(self, beta: np.ndarray) -> np.ndarray:
        """`L⁻¹ @ beta`."""
        if self.is_identity:
            return np.array(beta, dtype=np.float64)
        if self._diagonal is not None:
            return _scale_rows(beta, 1.0 / self._diagonal)
        return scipy.linalg.lu_solve(self._lu, beta, check_finite=False)

    def solve_transposed(self, m: np.ndarray) -> np.ndarray:
        """`L⁻ᵀ @ m`, used to form `X L⁻¹ = (L⁻ᵀ Xᵀ)ᵀ`."""
        if self.is_identity:
            return np.array(m, dtype=np.float64)
        if self._diagonal is not None:
            return _scale_rows(m, 1.0 / self._diagonal)
        return scipy.linalg.lu_solve(self._lu, m, trans=1, check_finite=False)


def _scale_rows(m: np.ndarray, w: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    return m * w.reshape((-1,) + (1,) * (m.ndim - 1))


def legendre_rows(degree: int, p: int) -> np.ndarray:
    """\
    Discretised, orthonormalised Legendre polynomials of degree `0..degree`.

    Built by QR of the monomials `[1, x, ..., x^degree]` on `p` uniform points
    of `[-1, 1]`. Rows are returned with a positive last entry.
    """
    x = np.linspace(-1.0, 1.0, p)
    q, _ = scipy.linalg.qr(np.vander(x, degree + 1, increasing=True), mode="economic")
    rows = q.T
    return rows * np.sign(rows[:, -1:])


def difference_rows(order: int, p: int) -> np.ndarray:
    """Finite difference stencils `[1, -1]` (order 1) or `[1, -2, 1]` (order 2)."""
    return (-1.0) ** order * np.diff(np.eye(p), n=order, axis=0)


def build_operator(
    spec: RegularizationSpec,
    p: int,
    column_sds: Optional[np.ndarray] = None,
) -> RegularizationOperator:
    """\
    Build the square regularisation matrix described by `spec`.

    Parameters
    ----------
    spec
        Kind, Legendre scaling and standard deviation floor.
    p
        Number of predictors.
    column_sds
        Column standard deviations of the centred predictors, required for
        `standardize`.

    Returns
    -------
    :class:`RegularizationOperator`
    """
    if p < 1:
        raise DimensionError(f"need at least one predictor, got p={p}")

    if spec.kind == "identity":
        return RegularizationOperator(l=np.eye(p), kind=spec.kind)

    if spec.kind == "standardize":
        if column_sds is None:
            raise ConfigError("standardize regularisation requires column standard deviations")
        sds = np.asarray(column_sds, dtype=np.float64).ravel()
        if sds.shape[0] != p:
            raise DimensionError(f"got {sds.shape[0]} standard deviations for p={p} columns")
        floor = spec.sigma_floor
        if floor is None:
            floor = 1e-12 * float(np.max(sds)) if sds.size else 0.0
        diagonal = np.maximum(sds, floor)
        if not np.all(diagonal > 0) or not np.all(np.isfinite(diagonal)):
            raise DimensionError(
                "standard deviations must be positive after flooring; "
                "are all predictor columns constant?"
            )
        n_floored = int(np.sum(sds < floor))
        if n_floored:
            logg.hint(f"{n_floored} column standard deviations raised to {floor:.3g}")
        return RegularizationOperator(l=np.diag(diagonal), kind=spec.kind, _diagonal=diagonal)

    order = spec.order
    if p < 3:
        raise DimensionError(f"{spec.kind} regularisation needs p >= 3, got p={p}")
    l = np.vstack(
        [difference_rows(order, p), np.sqrt(spec.epsilon) * legendre_rows(order - 1, p)]
    )
    lu = scipy.linalg.lu_factor(l, check_finite=False)
    logg.debug(f"built {spec.kind} operator for p={p}, epsilon={spec.epsilon:g}")
    return RegularizationOperator(l=l, kind=spec.kind, _lu=lu)


def _check_residual(reconstructed, target, what: str):
    norm = np.linalg.norm(target)
    err = np.linalg.norm(reconstructed - target)
    if not np.isfinite(err) or err > _SOLVE_TOL * norm:
        raise ConditioningError(
            f"regularisation matrix too ill-conditioned for {what}: "
            f"relative residual {err / norm if norm else err:.3g}; try a larger epsilon"
        )


def to_standard_form(x: np.ndarray, op: RegularizationOperator) -> np.ndarray:
    """\
    Transform predictors to standard form, `X̃ = X L⁻¹`.

    The Tikhonov problem with penalty `λ‖Lb‖²` in `X` is the ridge problem
    with penalty `λ‖β‖²` in `X̃`, with `b = L⁻¹β`.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != op.p:
        raise DimensionError(f"predictors of shape {x.shape} do not match p={op.p}")
    if op.is_identity:
        return x.copy()
    xt = op.solve_transposed(x.T).T
    if op._diagonal is None:
        _check_residual(xt @ op.l, x, "the standard-form transform")
    return xt


def back_transform(beta: np.ndarray, op: RegularizationOperator) -> np.ndarray:
    """\
    Map standard-form coefficients back to the original problem, `b = L⁻¹β`.

    `beta` may have trailing dimensions (responses, λ-values); the transform
    acts on the first axis.
    """
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape[0] != op.p:
        raise DimensionError(f"coefficients with {beta.shape[0]} rows do not match p={op.p}")
    if op.is_identity:
        return beta.copy()
    flat = beta.reshape(op.p, -1)
    b = op.solve(flat)
    if op._diagonal is None:
        _check_residual(op.apply(b), flat, "the back-transform")
    return b.reshape(beta.shape)
