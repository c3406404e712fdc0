"""Nonconvex accelerated gradient solver and its hyperparameter schedules.

The composite problem is ``min f(x) + h(x) + lam * |x_S|_1`` where ``f`` is
the convex loss, ``h`` the concave remainder of a SCAD/MCP penalty (both
smooth, together called ``Psi``), and ``S`` the penalized coordinates.

Each iteration of the accelerated method forms the extrapolated point::

    x_md[k] = (1 - alpha[k]) * x_ag[k-1] + alpha[k] * x[k-1]

evaluates ``g = grad Psi(x_md[k])`` and takes two proximal steps::

    x[k]    = prox(x[k-1],  g, delta[k])
    x_ag[k] = prox(x_md[k], g, omega)

The run stops once the gradient mapping ``(x_md - x_ag) / omega`` has norm
at most ``tol``; the returned point is ``x_md`` at that iteration.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import logsumexp

from .errors import (
    DivergenceError,
    NumericalError,
    ParameterError,
    PreconditionError,
    UnsupportedModeError,
)
from .model import Dataset, loss_and_grad, smooth_lipschitz
from .penalty import (
    PenaltySpec,
    dc_smooth_grad,
    dc_smooth_lipschitz,
    dc_smooth_value,
    penalty_value,
    prox_l1,
)

__all__ = [
    "AGSchedule",
    "proposed_schedule",
    "original_schedule",
    "proposed_alphas",
    "alpha_bounds",
    "ConditionReport",
    "verify_conditions",
    "complexity_bound_terms",
    "gradient_mapping",
    "CompositeProblem",
    "SolverConfig",
    "Status",
    "FitResult",
    "ag_solve",
    "ag_solve_momentum_form",
    "ista_solve",
]

COND_SLACK = 1e-12

# ---------------------------------------------------------------------------
# schedules
# ---------------------------------------------------------------------------

_alpha_lock = threading.Lock()
_alpha_cache = np.array([1.0])


def proposed_alphas(n: int) -> np.ndarray:
    """First `n` terms of ``alpha[k+1] = 2 / (1 + sqrt(1 + 4 / alpha[k]**2))``.

    ``alpha[1] = 1``. Values are memoized in a module-level cache that grows
    geometrically, so repeated calls are O(1) amortized per term.
    """
    global _alpha_cache
    if n < 1:
        raise ParameterError("n must be >= 1")
    cache = _alpha_cache
    if cache.size < n:
        with _alpha_lock:
            cache = _alpha_cache
            if cache.size < n:
                size = max(n, 2 * cache.size)
                out = np.empty(size)
                out[: cache.size] = cache
                a = float(cache[-1])
                sqrt = math.sqrt
                for i in range(cache.size, size):
                    a = 2.0 / (1.0 + sqrt(1.0 + 4.0 / (a * a)))
                    out[i] = a
                out.flags.writeable = False
                _alpha_cache = cache = out
    return cache[:n]


def _as_k(k):
    k = np.asarray(k)
    if np.any(k < 1):
        raise ParameterError("iteration index k must be >= 1")
    return k.astype(np.int64)


@dataclass(frozen=True)
class AGSchedule:
    """Hyperparameter sequences for the accelerated method.

    Parameters
    ----------
    omega : float
        Constant gradient-correction step.
    alpha_fn, delta_fn : callable
        Map an integer array of 1-based iteration indices to ``alpha_k`` and
        ``delta_k``.
    name : str
    """

    omega: float
    alpha_fn: Callable[[np.ndarray], np.ndarray]
    delta_fn: Callable[[np.ndarray], np.ndarray]
    name: str = "custom"

    def alpha(self, k):
        out = np.asarray(self.alpha_fn(_as_k(k)), dtype=float)
        return float(out) if out.ndim == 0 else out

    def delta(self, k):
        out = np.asarray(self.delta_fn(_as_k(k)), dtype=float)
        return float(out) if out.ndim == 0 else out

    def alphas(self, n: int) -> np.ndarray:
        return np.broadcast_to(self.alpha(np.arange(1, n + 1)), (n,)).astype(float)

    def deltas(self, n: int) -> np.ndarray:
        return np.broadcast_to(self.delta(np.arange(1, n + 1)), (n,)).astype(float)

    def log_gammas(self, n: int) -> np.ndarray:
        """``log Gamma_k`` for k = 1..n with ``Gamma_1 = 1``.

        Kept in log space because ``Gamma_k`` underflows for fast-decaying
        products (e.g. a constant ``alpha``).
        """
        a = self.alphas(n)
        out = np.zeros(n)
        if n > 1:
            with np.errstate(divide="ignore", invalid="ignore"):
                out[1:] = np.cumsum(np.log1p(-a[1:]))
        return out

    def gamma(self, k):
        k = _as_k(k)
        lg = self.log_gammas(int(np.max(k)))
        out = np.exp(lg[k - 1])
        return float(out) if out.ndim == 0 else out


def proposed_schedule(L_psi: float) -> AGSchedule:
    """Schedule minimizing the complexity bound for a convex smooth part.

    ``omega = 2 / (3 L)``, ``alpha`` from :func:`proposed_alphas` and
    ``delta_k = omega / alpha_k`` (so ``delta_1 = omega``).
    """
    if not L_psi > 0:
        raise ParameterError(f"L_psi must be > 0, got {L_psi}")
    omega = 2.0 / (3.0 * L_psi)

    def alpha_fn(k):
        return proposed_alphas(int(np.max(k)))[k - 1]

    def delta_fn(k):
        return omega / alpha_fn(k)

    return AGSchedule(omega, alpha_fn, delta_fn, "proposed")


def original_schedule(L_psi: float, alpha_fn=None, delta_fn=None, omega=None) -> AGSchedule:
    """Baseline schedule: ``alpha_k = 2/(k+1)``, ``omega = 1/(2L)``, ``delta_k = k*omega/2``.

    Any of the three pieces can be overridden.
    """
    if not L_psi > 0:
        raise ParameterError(f"L_psi must be > 0, got {L_psi}")
    w = 1.0 / (2.0 * L_psi) if omega is None else float(omega)
    if alpha_fn is None:
        def alpha_fn(k):
            return 2.0 / (k + 1.0)
    if delta_fn is None:
        def delta_fn(k):
            return k * w / 2.0
    return AGSchedule(w, alpha_fn, delta_fn, "original")


def alpha_bounds(k, a: float = 1.0, b: float = 0.5):
    """Lower and upper bounds on the proposed ``alpha_k``.

    ``2 / ((1 + a k^-b) k + 1) < alpha_k <= 2 / (k + 1)`` whenever
    ``a * 2^-b > sqrt(5) - 2`` and
    ``a(1-b) 2^(2-b) - a b (1-b) 2^-b - 1 >= 0``.
    """
    if not a > 0:
        raise ParameterError(f"a must be > 0, got {a}")
    if not 0 < b < 1:
        raise ParameterError(f"b must lie in (0, 1), got {b}")
    if not a * 2.0**-b > math.sqrt(5.0) - 2.0:
        raise ParameterError("condition 1 fails: a * 2^-b must exceed sqrt(5) - 2")
    if a * (1 - b) * 2.0 ** (2 - b) - a * b * (1 - b) * 2.0**-b - 1 < 0:
        raise ParameterError(
            "condition 2 fails: a(1-b)2^(2-b) - ab(1-b)2^(-b) - 1 must be >= 0"
        )
    k = np.asarray(k, dtype=float)
    if np.any(k < 1):
        raise ParameterError("k must be >= 1")
    lower = 2.0 / ((1.0 + a * k**-b) * k + 1.0)
    upper = 2.0 / (k + 1.0)
    if lower.ndim == 0:
        return float(lower), float(upper)
    return lower, upper


@dataclass
class ConditionReport:
    """Outcome of :func:`verify_conditions`.

    ``*_first_violation`` holds the first failing iteration index (1-based)
    or ``None``.
    """

    N: int
    alpha_domain_ok: bool
    alpha_domain_first_violation: int | None
    step_ok: bool
    step_first_violation: int | None
    monotone_ok: bool
    monotone_first_violation: int | None

    @property
    def ok(self) -> bool:
        return self.alpha_domain_ok and self.step_ok and self.monotone_ok


def _first(bad):
    idx = np.flatnonzero(bad)
    return None if idx.size == 0 else int(idx[0]) + 1


def verify_conditions(schedule: AGSchedule, L_psi: float, N: int) -> ConditionReport:
    """Check the convergence conditions for k = 1..N.

    * ``alpha_1 = 1`` and ``0 < alpha_k < 1`` for k >= 2;
    * ``alpha_k delta_k <= omega < 1/L_psi``;
    * ``alpha_k / (delta_k Gamma_k)`` nonincreasing. Checked through the
      local ratio ``alpha_{k+1} delta_k / (alpha_k delta_{k+1} (1 - alpha_{k+1})) <= 1``
      so no product of ``Gamma`` factors is formed.
    """
    if N < 1:
        raise ParameterError("N must be >= 1")
    a = schedule.alphas(N + 1)
    d = schedule.deltas(N + 1)
    w = schedule.omega

    bad_dom = np.zeros(N, dtype=bool)
    bad_dom[0] = a[0] != 1.0
    bad_dom[1:] = ~((a[1:N] > 0) & (a[1:N] < 1))

    prod = a[:N] * d[:N]
    bad_step = (prod > w * (1 + COND_SLACK)) | (not w * L_psi < 1.0) | ~(d[:N] > 0)

    bad_mono = np.zeros(N, dtype=bool)
    if N > 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = (a[1:N] * d[: N - 1]) / (a[: N - 1] * d[1:N] * (1.0 - a[1:N]))
        bad_mono[1:] = ~(ratio <= 1.0 + COND_SLACK)

    return ConditionReport(
        N,
        not bad_dom.any(), _first(bad_dom),
        not bad_step.any(), _first(bad_step),
        not bad_mono.any(), _first(bad_mono),
    )


def complexity_bound_terms(schedule: AGSchedule, N: int, L_psi: float, L_h: float,
                           dist0: float, xstar_norm: float, M: float) -> float:
    """Right-hand side of the complexity bound on ``min_k |G_k|^2``.

    ``[sum_k omega(1 - L omega) / Gamma_k]^-1 *
    [dist0^2 / delta_1 + 2 L_h (|x*|^2 + M^2) / Gamma_N]``.
    Diagnostic only; the solvers never call it.
    """
    if N < 1:
        raise ParameterError("N must be >= 1")
    w = schedule.omega
    step_term = w * (1.0 - L_psi * w)
    if not step_term > 0:
        raise ParameterError("omega(1 - L_psi omega) must be positive (omega < 1/L_psi)")
    lg = schedule.log_gammas(N)
    log_sum = logsumexp(-lg) + math.log(step_term)
    delta1 = schedule.delta(1)
    first = dist0**2 / delta1 * math.exp(-log_sum)
    second = 0.0
    if L_h > 0 and (xstar_norm > 0 or M > 0):
        second = 2.0 * L_h * (xstar_norm**2 + M**2) * math.exp(-lg[-1] - log_sum)
    return first + second


def gradient_mapping(x, y, c, lam, mask):
    """``(x - prox_l1(x, y, c, lam, mask)) / c``; equals `y` when ``lam = 0``."""
    x = np.asarray(x, dtype=float)
    return (x - prox_l1(x, y, c, lam, mask)) / c


# ---------------------------------------------------------------------------
# problems and results
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CompositeProblem:
    """Penalized loss on a dataset.

    ``L_psi`` defaults to ``smooth_lipschitz(data) + dc_smooth_lipschitz(penalty)``.
    ``penalized_mask`` defaults to every coordinate except the intercept.
    """

    data: Dataset
    penalty: PenaltySpec
    penalized_mask: np.ndarray | None = None
    L_psi: float | None = None

    def __post_init__(self):
        p = self.data.q + 1
        mask = self.data.penalized_mask if self.penalized_mask is None else self.penalized_mask
        mask = np.array(mask, dtype=bool)
        if mask.shape != (p,):
            raise ParameterError(f"penalized_mask must have length {p}")
        if mask[0]:
            raise ParameterError("the intercept (coordinate 0) must not be penalized")
        mask.flags.writeable = False
        object.__setattr__(self, "penalized_mask", mask)
        L = self.L_psi
        if L is None:
            L = smooth_lipschitz(self.data) + dc_smooth_lipschitz(self.penalty)
        if not L > 0:
            raise ParameterError(f"L_psi must be > 0, got {L}")
        object.__setattr__(self, "L_psi", float(L))

    @property
    def lam(self) -> float:
        return self.penalty.lam

    @property
    def dim(self) -> int:
        return self.data.q + 1

    def with_lambda(self, lam) -> "CompositeProblem":
        return CompositeProblem(self.data, self.penalty.with_lambda(lam),
                                self.penalized_mask, self.L_psi)

    def evaluate(self, x, with_value=True):
        """Objective ``f + sum p(x_j)`` and smooth gradient ``grad f + grad h``.

        With ``with_value=False`` the penalty sum is skipped and the returned
        value is the loss alone.
        """
        f, g = loss_and_grad(self.data, x)
        m = self.penalized_mask
        xm = x[m]
        if self.penalty.lam > 0:
            g[m] += dc_smooth_grad(self.penalty, xm)
            if with_value:
                f += float(np.sum(penalty_value(self.penalty, xm)))
        return f, g

    def smooth_value(self, x) -> float:
        """``Psi(x) = f(x) + h(x)``."""
        f, _ = loss_and_grad(self.data, x)
        return f + float(np.sum(dc_smooth_value(self.penalty, x[self.penalized_mask])))

    def objective(self, x) -> float:
        return self.evaluate(np.asarray(x, dtype=float))[0]


@dataclass(frozen=True)
class SolverConfig:
    max_iter: int = 2000
    tol: float = 1e-6
    record_trace: bool = True
    keep_iterates: bool = False
    check_curvature: bool = False

    def __post_init__(self):
        if int(self.max_iter) < 1:
            raise ParameterError("max_iter must be >= 1")
        if not self.tol > 0:
            raise ParameterError("tol must be > 0")


class Status(str, enum.Enum):
    TOLERANCE_REACHED = "ToleranceReached"
    MAX_ITERATIONS = "MaxIterations"


@dataclass
class FitResult:
    """Solver output.

    ``objective[k-1]`` and ``grad_norm[k-1]`` hold the objective and the
    gradient-mapping norm at the evaluation point of iteration ``k``.
    """

    beta: np.ndarray
    iterations: int
    status: Status
    objective: np.ndarray | None = None
    grad_norm: np.ndarray | None = None
    iterates: np.ndarray | None = None
    warnings: list = field(default_factory=list)
    method: str = ""

    @property
    def converged(self) -> bool:
        return self.status is Status.TOLERANCE_REACHED

    @property
    def best_index(self) -> int | None:
        """1-based iteration with the smallest gradient-mapping norm."""
        if self.grad_norm is None or self.grad_norm.size == 0:
            return None
        return int(np.argmin(self.grad_norm)) + 1


def _shrink(z, t):
    # soft threshold with per-coordinate level t (0 on unpenalized coordinates)
    return z - np.maximum(np.minimum(z, t), -t)


class _Recorder:
    def __init__(self, config, max_iter):
        self.config = config
        self.obj = np.empty(max_iter) if config.record_trace else None
        self.gn = np.empty(max_iter) if config.record_trace else None
        self.its = [] if config.keep_iterates else None

    def add(self, k, F, gnorm, x):
        if self.obj is not None:
            self.obj[k - 1] = F
            self.gn[k - 1] = gnorm
        if self.its is not None:
            self.its.append(x.copy())

    def result(self, beta, k, status, method, warnings):
        return FitResult(
            beta=beta, iterations=k, status=status,
            objective=None if self.obj is None else self.obj[:k].copy(),
            grad_norm=None if self.gn is None else self.gn[:k].copy(),
            iterates=None if self.its is None else np.array(self.its),
            warnings=warnings, method=method,
        )


def _start(problem, x0):
    if x0 is None:
        x0 = np.zeros(problem.dim)
    x0 = np.array(x0, dtype=float)
    if x0.shape != (problem.dim,):
        raise ParameterError(f"x0 must have shape ({problem.dim},)")
    if not np.all(np.isfinite(x0)):
        raise ParameterError("x0 must be finite")
    return x0


def _evaluate(problem, x, k, with_value):
    try:
        return problem.evaluate(x, with_value)
    except NumericalError as exc:
        raise DivergenceError(k, f"iteration {k}: {exc}") from exc


def _finite(k, F, gnorm):
    # a non-finite iterate propagates into the loss or the mapping norm
    if not (math.isfinite(F) and math.isfinite(gnorm)):
        raise DivergenceError(k)


def ag_solve(problem, schedule: AGSchedule, config: SolverConfig = SolverConfig(),
             x0=None, check_schedule: bool = True) -> FitResult:
    """Run the accelerated method on a composite problem.

    Parameters
    ----------
    problem : CompositeProblem
        Anything exposing ``evaluate(x) -> (objective, grad)``, ``lam``,
        ``penalized_mask``, ``L_psi`` and ``dim`` works.
    schedule : AGSchedule
    config : SolverConfig
    x0 : ndarray, optional
        Starting point; zeros by default.
    check_schedule : bool
        Verify the convergence conditions for ``config.max_iter`` steps first.

    Returns
    -------
    FitResult
        ``beta`` is the extrapolated point ``x_md`` of the last iteration.
    """
    N = int(config.max_iter)
    if check_schedule:
        report = verify_conditions(schedule, problem.L_psi, N)
        if not report.ok:
            raise PreconditionError(f"schedule violates convergence conditions: {report}")
    alphas = schedule.alphas(N)
    deltas = schedule.deltas(N)
    w = schedule.omega
    L = problem.L_psi
    lam_vec = problem.lam * problem.penalized_mask
    thr_w = w * lam_vec
    rec = _Recorder(config, N)
    warns = []

    x_prev = _start(problem, x0)
    x_ag = x_prev.copy()
    status = Status.MAX_ITERATIONS
    for k in range(1, N + 1):
        a = alphas[k - 1]
        x_md = (1.0 - a) * x_ag + a * x_prev
        F, g = _evaluate(problem, x_md, k, config.record_trace)
        x_new = _shrink(x_prev - deltas[k - 1] * g, deltas[k - 1] * lam_vec)
        x_ag = _shrink(x_md - w * g, thr_w)
        step = x_md - x_ag
        gnorm = math.sqrt(float(np.dot(step, step))) / w
        _finite(k, F, gnorm)
        rec.add(k, F, gnorm, x_md)
        if config.check_curvature:
            _curvature_check(problem, x_md, x_ag, g, L, config.tol, k, warns)
        if gnorm <= config.tol:
            status = Status.TOLERANCE_REACHED
            break
        x_prev = x_new
    return rec.result(x_md, k, status, schedule.name, warns)


def _curvature_check(problem, x_md, x_ag, g, L, tol, k, warns):
    d = x_ag - x_md
    lhs = problem.smooth_value(x_ag)
    ref = problem.smooth_value(x_md)
    rhs = ref + float(np.dot(g, d)) + 0.5 * L * float(np.dot(d, d))
    if lhs - rhs > 10.0 * tol * (1.0 + abs(ref)):
        warns.append(f"iteration {k}: descent inequality violated by {lhs - rhs:.3e}; "
                     f"L_psi={L:.6g} may underestimate the curvature")


def ag_solve_momentum_form(problem, schedule: AGSchedule,
                           config: SolverConfig = SolverConfig(), x0=None) -> FitResult:
    """Momentum rewrite of the accelerated method for smooth problems.

    ::

        x_ag[k]   = x_md[k] - omega * g_k
        x_md[k+1] = x_ag[k] + alpha[k+1] (1/alpha[k] - delta[k]/omega) omega g_k
                            + alpha[k+1] (1/alpha[k] - 1) (x_ag[k] - x_ag[k-1])

    Produces the same iterates as :func:`ag_solve` when ``lam = 0`` and is
    kept as an independent check of it. The schedule is not validated.
    """
    if problem.lam > 0:
        raise UnsupportedModeError("the momentum form is defined for smooth problems (lam = 0) only")
    N = int(config.max_iter)
    alphas = schedule.alphas(N + 1)
    deltas = schedule.deltas(N)
    w = schedule.omega
    rec = _Recorder(config, N)

    x_md = _start(problem, x0)
    x_ag_prev = x_md.copy()
    status = Status.MAX_ITERATIONS
    for k in range(1, N + 1):
        F, g = _evaluate(problem, x_md, k, config.record_trace)
        x_ag = x_md - w * g
        gnorm = math.sqrt(float(np.dot(g, g)))
        _finite(k, F, gnorm)
        rec.add(k, F, gnorm, x_md)
        if gnorm <= config.tol:
            status = Status.TOLERANCE_REACHED
            break
        a, a_next = alphas[k - 1], alphas[k]
        x_next = (x_ag
                  + a_next * (1.0 / a - deltas[k - 1] / w) * (w * g)
                  + a_next * (1.0 / a - 1.0) * (x_ag - x_ag_prev))
        x_ag_prev = x_ag
        x_md = x_next
    return rec.result(x_md, k, status, schedule.name + "-momentum", [])


def ista_solve(problem, config: SolverConfig = SolverConfig(), x0=None) -> FitResult:
    """Proximal gradient descent with constant step ``1 / L_psi``.

    The objective trace is nonincreasing (up to rounding).
    """
    L = problem.L_psi
    if not L > 0:
        raise ParameterError("L_psi must be > 0")
    N = int(config.max_iter)
    step = 1.0 / L
    thr = step * problem.lam * problem.penalized_mask
    rec = _Recorder(config, N)

    x = _start(problem, x0)
    status = Status.MAX_ITERATIONS
    for k in range(1, N + 1):
        F, g = _evaluate(problem, x, k, config.record_trace)
        x_new = _shrink(x - step * g, thr)
        d = x - x_new
        gnorm = math.sqrt(float(np.dot(d, d))) / step
        _finite(k, F, gnorm)
        rec.add(k, F, gnorm, x)
        if gnorm <= config.tol:
            status = Status.TOLERANCE_REACHED
            break
        x = x_new
    return rec.result(x, k, status, "ista", [])
