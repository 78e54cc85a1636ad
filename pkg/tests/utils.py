import numpy as np

import trlearn as tr


def random_problem(n=12, p=5, q=1, seed=0, noise=0.1):
    """Random regression problem `y = X b + noise` with a non-zero mean."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, p)) + rng.uniform(-2, 2, p)
    b = rng.standard_normal((p, q))
    y = x @ b + 3.0 + noise * rng.standard_normal((n, q))
    return x, y


def random_dataset(n=12, p=5, q=1, k=None, seed=0, **kwargs):
    """Random dataset; with `k`, rows are spread over `k` segments cyclically."""
    x, y = random_problem(n, p, q, seed=seed, **kwargs)
    segments = None if k is None else np.arange(n) % k + 1
    return tr.tl.Dataset(x=x, y=y, segments=segments)


def identical_rows_dataset(k=8, size=3, p=6, seed=0):
    """`k` segments of `size` identical predictor rows with distinct responses."""
    rng = np.random.default_rng(seed)
    base = rng.standard_normal((k, p))
    x = np.repeat(base, size, axis=0)
    y = x @ rng.standard_normal(p) + 0.3 * rng.standard_normal(k * size)
    segments = np.repeat(np.arange(1, k + 1), size)
    return tr.tl.Dataset(x=x, y=y, segments=segments)


def direct_tikhonov(x, y, l, lam, fit_intercept=True):
    """Solve `(XcᵀXc + λLᵀL) b = Xcᵀyc` directly."""
    y = y.reshape(len(y), -1)
    if fit_intercept:
        xm, ym = x.mean(axis=0), y.mean(axis=0)
    else:
        xm, ym = np.zeros(x.shape[1]), np.zeros(y.shape[1])
    xc, yc = x - xm, y - ym
    b = np.linalg.solve(xc.T @ xc + lam * l.T @ l, xc.T @ yc)
    return b, ym - xm @ b


def explicit_segment_residuals(x, y, segments, l, lam, fit_intercept=True):
    """Held-out residuals from refitting without every segment."""
    y = y.reshape(len(y), -1)
    out = np.empty_like(y, dtype=np.float64)
    for k in np.unique(segments):
        held = segments == k
        b, b0 = direct_tikhonov(x[~held], y[~held], l, lam, fit_intercept)
        out[held] = y[held] - (x[held] @ b + b0)
    return out


def random_orthogonal(n, seed=0):
    q, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((n, n)))
    return q
