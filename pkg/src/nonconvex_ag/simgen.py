"""Seeded synthetic data: AR(1)-Toeplitz Gaussian designs and planted signals.

Randomness comes from numpy's PCG64 generator. Every random quantity draws
from its own stream derived from ``SeedSequence(seed, spawn_key=...)``, so a
replicate can be regenerated in isolation and in any order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter
from scipy.special import expit

from .errors import DegenerateSNRError, ParameterError
from .model import Family

__all__ = [
    "Pattern",
    "SimConfig",
    "GroundTruth",
    "SimulatedData",
    "rng_for",
    "toeplitz_design",
    "ar1_covariance",
    "ar1_quadratic_form",
    "block_starts",
    "true_beta",
    "noise_sd",
    "linear_response",
    "logistic_response",
    "simulate",
]

# stream ids inside one replicate
_DESIGN, _BETA, _NOISE, _VAL_DESIGN, _VAL_NOISE = range(5)

_BLOCK_PARAMS = {
    Family.LINEAR: [(0.5, 1.0), (5.0, 2.0), (10.0, 3.0), (20.0, 4.0), (50.0, 5.0)],
    Family.LOGISTIC: [(0.5, 1.0), (0.5, 1.0), (-0.5, 1.0), (-0.5, 1.0), (1.0, 1.0)],
}
_VISUAL4 = {
    Family.LINEAR: [2.0, -2.0, 8.0, -8.0],
    Family.LOGISTIC: [0.5, -0.5, 0.8, -0.8],
}
BLOCK_SIZE = 10


class Pattern(str, enum.Enum):
    VISUAL4 = "visual4"
    BLOCKS5X10 = "blocks5x10"


@dataclass(frozen=True)
class SimConfig:
    """One simulation setting.

    ``spread`` says how the second parameter of each signal block is read:
    ``"sd"`` (default) or ``"variance"``.
    """

    n: int
    q: int
    tau: float = 0.5
    snr: float = 3.0
    family: Family = Family.LINEAR
    pattern: Pattern = Pattern.BLOCKS5X10
    seed: int = 0
    spread: str = "sd"

    def __post_init__(self):
        object.__setattr__(self, "family", Family(getattr(self.family, "value", self.family)))
        object.__setattr__(self, "pattern", Pattern(getattr(self.pattern, "value", self.pattern)))
        if self.n < 1 or self.q < 1:
            raise ParameterError("n and q must be >= 1")
        if not 0 <= self.tau < 1:
            raise ParameterError(f"tau must lie in [0, 1), got {self.tau}")
        if not self.snr > 0:
            raise ParameterError(f"snr must be > 0, got {self.snr}")
        if self.spread not in ("sd", "variance"):
            raise ParameterError("spread must be 'sd' or 'variance'")
        if self.seed < 0:
            raise ParameterError("seed must be a nonnegative integer")


@dataclass(frozen=True)
class GroundTruth:
    """Planted coefficients (index 0 is the intercept) and their support."""

    beta: np.ndarray
    support: frozenset

    @classmethod
    def from_beta(cls, beta):
        beta = np.asarray(beta, dtype=float)
        return cls(beta, frozenset(int(j) for j in np.flatnonzero(beta[1:]) + 1))


@dataclass(frozen=True)
class SimulatedData:
    X: np.ndarray
    y: np.ndarray
    truth: GroundTruth
    sigma: float
    X_val: np.ndarray | None = None
    y_val: np.ndarray | None = None


def rng_for(seed, *key) -> np.random.Generator:
    """Generator for the stream ``key`` under the root `seed`."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def toeplitz_design(n, q, tau, seed) -> np.ndarray:
    """``n x q`` draws from ``N(0, Sigma)`` with ``Sigma_ij = tau^|i-j|``.

    Built column by column from the AR(1) recursion
    ``x_j = tau x_{j-1} + sqrt(1 - tau^2) z_j``, which costs O(nq).
    """
    if not 0 <= tau < 1:
        raise ParameterError(f"tau must lie in [0, 1), got {tau}")
    Z = _rng(seed).standard_normal((n, q))
    if tau == 0:
        return Z
    c = math.sqrt(1.0 - tau * tau)
    Z[:, 0] /= c
    return lfilter([c], [1.0, -tau], Z, axis=1)


def ar1_covariance(q, tau) -> np.ndarray:
    idx = np.arange(q)
    return tau ** np.abs(idx[:, None] - idx[None, :])


def ar1_quadratic_form(beta, tau) -> float:
    """``beta^T Sigma beta`` for the AR(1) covariance in O(q).

    With ``u_j = sum_{i<=j} tau^(j-i) beta_i`` the form equals
    ``sum_j beta_j (2 u_j - beta_j)``.
    """
    beta = np.asarray(beta, dtype=float)
    u = lfilter([1.0], [1.0, -tau], beta)
    return float(np.dot(beta, 2.0 * u - beta))


def block_starts(q, n_blocks, block_size):
    """0-based start offsets (among the q covariates) of equally spaced blocks.

    Gaps between consecutive blocks differ by at most one index; the first
    block starts at 0 and the last one ends at ``q``.
    """
    filled = n_blocks * block_size
    if q < filled:
        raise ParameterError(f"q={q} too small for {n_blocks} blocks of {block_size}")
    if n_blocks == 1:
        return [0]
    gaps = q - filled
    return [i * block_size + (i * gaps) // (n_blocks - 1) for i in range(n_blocks)]


def true_beta(pattern, q, seed=None, family=Family.LINEAR, spread="sd") -> GroundTruth:
    """Planted coefficient vector of length ``q + 1`` (intercept 0).

    ``visual4`` places four fixed signals; ``blocks5x10`` draws five blocks of
    ten normal coefficients, one ``(mean, spread)`` pair per block.
    """
    pattern = Pattern(getattr(pattern, "value", pattern))
    family = Family(getattr(family, "value", family))
    beta = np.zeros(q + 1)
    if pattern is Pattern.VISUAL4:
        values = _VISUAL4[family]
        for s, v in zip(block_starts(q, len(values), 1), values):
            beta[1 + s] = v
    else:
        rng = _rng(seed)
        params = _BLOCK_PARAMS[family]
        for s, (mu, spr) in zip(block_starts(q, len(params), BLOCK_SIZE), params):
            sd = spr if spread == "sd" else math.sqrt(spr)
            beta[1 + s: 1 + s + BLOCK_SIZE] = rng.normal(mu, sd, BLOCK_SIZE)
    return GroundTruth.from_beta(beta)


def noise_sd(beta_true, snr, tau) -> float:
    """``sqrt(beta^T Sigma beta) / snr`` using the model covariance.

    `beta_true` holds the q covariate coefficients (no intercept).
    ``snr = inf`` gives 0.
    """
    b = np.asarray(beta_true, dtype=float)
    quad = ar1_quadratic_form(b, tau)
    if not quad > 0:
        raise DegenerateSNRError("beta^T Sigma beta is zero; SNR is undefined")
    if not snr > 0:
        raise ParameterError(f"snr must be > 0, got {snr}")
    if math.isinf(snr):
        return 0.0
    return math.sqrt(quad) / snr


def _predictor(X, beta_true, snr, tau, seed):
    X = np.asarray(X, dtype=float)
    b = np.asarray(beta_true, dtype=float)
    if b.size == X.shape[1] + 1:
        intercept, b = b[0], b[1:]
    else:
        intercept = 0.0
    sigma = noise_sd(b, snr, tau)
    eta = intercept + X @ b
    if sigma > 0:
        eta = eta + sigma * _rng(seed).standard_normal(X.shape[0])
    return eta


def linear_response(X, beta_true, snr, tau, seed) -> np.ndarray:
    """``y = X beta + eps`` with ``eps ~ N(0, sigma^2)`` calibrated to `snr`."""
    return _predictor(X, beta_true, snr, tau, seed)


def logistic_response(X, beta_true, snr, tau, seed) -> np.ndarray:
    """Bernoulli outcomes with probabilities ``expit(X beta + eps)``."""
    rng = _rng(seed)
    eta = _predictor(X, beta_true, snr, tau, rng)
    u = rng.random(eta.shape[0])
    return (u < expit(eta)).astype(float)


def simulate(config: SimConfig, replicate: int = 0, key=(), n_validation: int = 0) -> SimulatedData:
    """Draw one replicate: raw design, response and planted coefficients.

    Streams are keyed by ``(*key, replicate, stream)``. The planted blocks
    are redrawn for every replicate. With ``n_validation > 0`` an
    independent validation sample sharing the same coefficients is added.
    """
    c = config
    def rng(stream):
        return rng_for(c.seed, *key, replicate, stream)

    truth = true_beta(c.pattern, c.q, rng(_BETA), c.family, c.spread)
    respond = linear_response if c.family is Family.LINEAR else logistic_response
    X = toeplitz_design(c.n, c.q, c.tau, rng(_DESIGN))
    y = respond(X, truth.beta, c.snr, c.tau, rng(_NOISE))
    X_val = y_val = None
    if n_validation:
        X_val = toeplitz_design(n_validation, c.q, c.tau, rng(_VAL_DESIGN))
        y_val = respond(X_val, truth.beta, c.snr, c.tau, rng(_VAL_NOISE))
    sigma = noise_sd(truth.beta[1:], c.snr, c.tau)
    return SimulatedData(X, y, truth, sigma, X_val, y_val)
