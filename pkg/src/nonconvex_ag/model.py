"""Smooth convex losses (least squares, logistic) and design handling."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import expit

from .errors import (
    DegenerateColumnError,
    DimensionMismatchError,
    NumericalError,
    ParameterError,
    PowerIterationError,
)

__all__ = [
    "Family",
    "Dataset",
    "standardize",
    "unstandardize",
    "loss",
    "loss_grad",
    "loss_and_grad",
    "smooth_lipschitz",
    "power_iteration",
    "load_csv",
]

LIPSCHITZ_SAFETY = 1.01


class Family(str, enum.Enum):
    LINEAR = "linear"
    LOGISTIC = "logistic"


def _readonly(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Design matrix with a leading intercept column, response and family.

    ``X`` has shape ``(n, q + 1)`` and ``X[:, 0]`` is all ones. ``centers``
    and ``scales`` hold the standardization applied to the ``q`` remaining
    columns (zeros and ones when the design was supplied as-is).
    Arrays are stored read-only.
    """

    X: np.ndarray
    y: np.ndarray
    family: Family = Family.LINEAR
    centers: np.ndarray | None = None
    scales: np.ndarray | None = None
    names: tuple = field(default=())
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float).ravel()
        if X.ndim != 2:
            raise DimensionMismatchError(f"X must be 2-D, got shape {X.shape}")
        n, p = X.shape
        if n < 1 or p < 2:
            raise DimensionMismatchError("need n >= 1 rows and at least one covariate")
        if y.shape != (n,):
            raise DimensionMismatchError(f"y has length {y.size}, X has {n} rows")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ParameterError("X and y must be finite")
        if not np.all(X[:, 0] == 1.0):
            raise ParameterError("column 0 of X must be the all-ones intercept")
        family = Family(getattr(self.family, "value", self.family))
        if family is Family.LOGISTIC and not np.all((y == 0) | (y == 1)):
            raise ParameterError("logistic responses must lie in {0, 1}")
        q = p - 1
        centers = np.zeros(q) if self.centers is None else self.centers
        scales = np.ones(q) if self.scales is None else self.scales
        if np.shape(centers) != (q,) or np.shape(scales) != (q,):
            raise DimensionMismatchError("centers/scales must have length q")
        names = tuple(self.names) or tuple(f"x{j}" for j in range(1, q + 1))
        object.__setattr__(self, "X", _readonly(X))
        object.__setattr__(self, "y", _readonly(y))
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "centers", _readonly(centers))
        object.__setattr__(self, "scales", _readonly(scales))
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def q(self) -> int:
        return self.X.shape[1] - 1

    @property
    def penalized_mask(self) -> np.ndarray:
        mask = np.ones(self.q + 1, dtype=bool)
        mask[0] = False
        return mask

    @classmethod
    def from_raw(cls, raw_X, y, family=Family.LINEAR, standardized=True, names=()):
        """Build a dataset from covariates without an intercept column."""
        raw_X = np.asarray(raw_X, dtype=float)
        if raw_X.ndim == 1:
            raw_X = raw_X[:, None]
        if standardized:
            X, centers, scales = standardize(raw_X)
        else:
            X = np.column_stack([np.ones(raw_X.shape[0]), raw_X])
            centers = scales = None
        return cls(X, y, family, centers, scales, names)

    def transform(self, raw_X, y):
        """Apply this dataset's standardization to new data (e.g. validation)."""
        raw_X = np.asarray(raw_X, dtype=float)
        if raw_X.ndim != 2 or raw_X.shape[1] != self.q:
            raise DimensionMismatchError(f"expected {self.q} covariates")
        X = (raw_X - self.centers) / self.scales
        X = np.column_stack([np.ones(X.shape[0]), X])
        return Dataset(X, y, self.family, self.centers, self.scales, self.names)

    def null_coefficients(self) -> np.ndarray:
        """Intercept-only fit: mean (linear) or logit of the mean (logistic)."""
        beta = np.zeros(self.q + 1)
        ybar = float(np.mean(self.y))
        if self.family is Family.LINEAR:
            beta[0] = ybar
        else:
            if ybar in (0.0, 1.0):
                raise ParameterError("logistic null model needs both classes present")
            beta[0] = np.log(ybar / (1.0 - ybar))
        return beta

    def to_original_scale(self, beta) -> np.ndarray:
        """Map coefficients fitted on the standardized design to raw covariates."""
        beta = np.asarray(beta, dtype=float)
        out = beta.copy()
        out[1:] = beta[1:] / self.scales
        out[0] = beta[0] - np.dot(out[1:], self.centers)
        return out

    def is_standardized(self, atol=1e-8) -> bool:
        Z = self.X[:, 1:]
        return bool(np.all(np.abs(Z.mean(axis=0)) <= atol))


def standardize(raw_X):
    """Center and scale columns, then prepend an intercept column.

    Uses the sample standard deviation (``ddof=1``).

    Returns
    -------
    X : ndarray, shape (n, q + 1)
    centers, scales : ndarray, shape (q,)
    """
    raw_X = np.asarray(raw_X, dtype=float)
    if raw_X.ndim != 2 or raw_X.shape[0] < 2:
        raise DimensionMismatchError("need a 2-D design with at least 2 rows")
    centers = raw_X.mean(axis=0)
    Z = raw_X - centers
    scales = Z.std(axis=0, ddof=1)
    bad = np.flatnonzero(~(scales > 0))
    if bad.size:
        raise DegenerateColumnError(int(bad[0]))
    Z = Z / scales
    return np.column_stack([np.ones(raw_X.shape[0]), Z]), centers, scales


def unstandardize(X, centers, scales):
    """Inverse of :func:`standardize` (drops the intercept column)."""
    return np.asarray(X)[:, 1:] * scales + centers


def _check_beta(data, beta):
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (data.X.shape[1],):
        raise DimensionMismatchError(
            f"beta has shape {beta.shape}, expected ({data.X.shape[1]},)"
        )
    return beta


def _logistic_loss(m, y):
    # log(1 + e^m) = max(m, 0) + log1p(e^{-|m|})
    return np.mean(np.maximum(m, 0.0) + np.log1p(np.exp(-np.abs(m))) - y * m)


def loss_and_grad(data: Dataset, beta):
    """Loss value and gradient sharing one product ``X @ beta``."""
    beta = _check_beta(data, beta)
    m = data.X @ beta
    if data.family is Family.LINEAR:
        r = m - data.y
        value = 0.5 * np.dot(r, r) / data.n
    else:
        value = _logistic_loss(m, data.y)
        r = expit(m) - data.y
    if not np.isfinite(value):
        raise NumericalError("loss evaluated to a non-finite value")
    return float(value), data.X.T @ r / data.n


def loss(data: Dataset, beta) -> float:
    """Least squares ``|X b - y|^2/(2n)`` or mean logistic negative log-likelihood."""
    beta = _check_beta(data, beta)
    m = data.X @ beta
    if data.family is Family.LINEAR:
        r = m - data.y
        value = 0.5 * np.dot(r, r) / data.n
    else:
        value = _logistic_loss(m, data.y)
    if not np.isfinite(value):
        raise NumericalError("loss evaluated to a non-finite value")
    return float(value)


def loss_grad(data: Dataset, beta) -> np.ndarray:
    return loss_and_grad(data, beta)[1]


def power_iteration(A, rtol=1e-8, max_iter=10_000):
    """Largest eigenvalue of ``A.T @ A`` by power iteration.

    Starts from the normalized all-ones vector so results are reproducible.
    """
    A = np.asarray(A, dtype=float)
    v = np.ones(A.shape[1]) / np.sqrt(A.shape[1])
    w = A.T @ (A @ v)
    est = float(np.dot(v, w))
    if not np.any(w):
        # v is in the null space; fall back to a deterministic perturbation
        v = np.arange(1, A.shape[1] + 1, dtype=float)
        v /= np.linalg.norm(v)
        w = A.T @ (A @ v)
        est = float(np.dot(v, w))
    for it in range(1, max_iter + 1):
        norm = np.linalg.norm(w)
        if not np.isfinite(norm):
            raise NumericalError("power iteration overflowed; rescale the design")
        if norm == 0:
            raise ParameterError("matrix is identically zero")
        v = w / norm
        w = A.T @ (A @ v)
        new = float(np.dot(v, w))
        if abs(new - est) <= rtol * abs(new):
            return new
        est = new
    raise PowerIterationError(max_iter)


def smooth_lipschitz(data: Dataset) -> float:
    """Lipschitz constant of the loss gradient, inflated by 1%.

    ``lambda_max(X^T X) / n`` for least squares and a quarter of that for the
    logistic loss. Cached on the dataset.
    """
    key = "smooth_lipschitz"
    if key not in data._cache:
        lmax = power_iteration(data.X)
        scale = 1.0 if data.family is Family.LINEAR else 0.25
        data._cache[key] = LIPSCHITZ_SAFETY * scale * lmax / data.n
    return data._cache[key]


def load_csv(path, response="y", family=Family.LINEAR, standardized=True):
    """Read a CSV with a header row; `response` names the outcome column.

    All other columns are covariates. Returns a :class:`Dataset`.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        header = next(csv.reader(fh))
    header = [h.strip() for h in header]
    if response not in header:
        raise ParameterError(f"response column {response!r} not in {path.name}")
    values = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    j = header.index(response)
    y = values[:, j]
    cols = [i for i in range(len(header)) if i != j]
    names = tuple(header[i] for i in cols)
    return Dataset.from_raw(values[:, cols], y, family, standardized, names)
