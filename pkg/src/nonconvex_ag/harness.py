"""Replicated experiments: convergence benchmarks and signal recovery.

Both drivers split the work into independent jobs keyed by
``(cell, replicate)``. Each job derives its own random streams from the
root seed and that key, so results do not depend on execution order or on
the number of worker processes. Records are sorted by key before they are
aggregated and written.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import json
import math
import typing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ag import (
    CompositeProblem,
    SolverConfig,
    ag_solve,
    ista_solve,
    original_schedule,
    proposed_schedule,
)
from .errors import DimensionMismatchError, ParameterError
from .model import Dataset, Family
from .path import lambda_grid, lambda_max, path_solve, select_by_validation
from .penalty import PenaltyKind, PenaltySpec
from .simgen import GroundTruth, Pattern, SimConfig, simulate

__all__ = [
    "Method",
    "RecoveryMetrics",
    "recovery_metrics",
    "iterations_to_target",
    "is_monotone_descent",
    "MedianCI",
    "bootstrap_median_ci",
    "BenchConfig",
    "BenchRecord",
    "BenchSummary",
    "BenchResult",
    "run_benchmark",
    "RecoveryConfig",
    "RecoveryRecord",
    "RecoverySummary",
    "RecoveryResult",
    "run_recovery",
    "write_records",
    "read_records",
    "write_sidecar",
    "bench_preset",
    "recovery_preset",
]

ZERO_TOL = 1e-8


class Method(str, enum.Enum):
    AG_PROPOSED = "AGProposed"
    AG_ORIGINAL = "AGOriginal"
    ISTA = "ISTA"


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecoveryMetrics:
    """Support recovery and estimation error of one fit.

    ``ppv`` is None when no coefficient is selected and ``npv`` is None when
    every coefficient is selected.
    """

    ppv: float | None
    npv: float | None
    scaled_error: float
    active_size: int


def recovery_metrics(truth, beta_hat, zero_tol: float = ZERO_TOL) -> RecoveryMetrics:
    """PPV, NPV and ``|b_true - b_hat|^2 / |b_true|^2`` over penalized coordinates.

    Parameters
    ----------
    truth : GroundTruth or array_like
        Planted coefficients including the intercept at index 0.
    beta_hat : array_like
        Estimate on the same scale, same length.
    zero_tol : float
        Coefficients with ``|b_j| <= zero_tol`` count as unselected.
    """
    if not isinstance(truth, GroundTruth):
        truth = GroundTruth.from_beta(truth)
    b_true = np.asarray(truth.beta, dtype=float)
    b_hat = np.asarray(beta_hat, dtype=float)
    if b_true.shape != b_hat.shape or b_true.ndim != 1:
        raise DimensionMismatchError(
            f"truth has shape {b_true.shape}, estimate has {b_hat.shape}")
    if zero_tol < 0:
        raise ParameterError("zero_tol must be >= 0")
    actual = b_true[1:] != 0
    chosen = np.abs(b_hat[1:]) > zero_tol
    n_chosen = int(chosen.sum())
    n_dropped = chosen.size - n_chosen
    ppv = float(np.sum(actual & chosen)) / n_chosen if n_chosen else None
    npv = float(np.sum(~actual & ~chosen)) / n_dropped if n_dropped else None
    denom = float(np.dot(b_true[1:], b_true[1:]))
    diff = b_true[1:] - b_hat[1:]
    err = float(np.dot(diff, diff)) / denom if denom > 0 else math.nan
    return RecoveryMetrics(ppv, npv, err, n_chosen)


def iterations_to_target(trace, target: float) -> int | None:
    """First 1-based iteration whose objective is ``<= target``; None if censored."""
    trace = np.asarray(trace, dtype=float)
    if trace.size == 0:
        raise ParameterError("empty trace")
    hits = np.flatnonzero(trace <= target)
    return int(hits[0]) + 1 if hits.size else None


def is_monotone_descent(trace, rtol: float = 1e-12) -> bool:
    """True when the trace never increases by more than rounding."""
    trace = np.asarray(trace, dtype=float)
    if trace.size < 2:
        return True
    slack = rtol * np.maximum(1.0, np.abs(trace[:-1]))
    return bool(np.all(np.diff(trace) <= slack))


@dataclass(frozen=True)
class MedianCI:
    """Median with a percentile bootstrap interval.

    With more than half the samples censored (or an infinite median) the
    median breaks down: ``breakdown`` is set and all three values are None.
    """

    median: float | None
    lo: float | None
    hi: float | None
    breakdown: bool = False
    n_censored: int = 0


def _percentile_sorted(s, p):
    # linear interpolation between order statistics; an infinite upper
    # neighbour yields inf rather than nan
    h = (s.size - 1) * p
    i = int(math.floor(h))
    frac = h - i
    if frac == 0 or i + 1 >= s.size:
        return float(s[i])
    if math.isinf(s[i + 1]):
        return math.inf
    return float(s[i] + frac * (s[i + 1] - s[i]))


def bootstrap_median_ci(samples, B: int = 1000, level: float = 0.95, seed=0) -> MedianCI:
    """Percentile bootstrap confidence interval for the median.

    Censored samples are passed as None or ``inf``.

    Parameters
    ----------
    samples : sequence of float or None
    B : int
        Number of bootstrap resamples.
    level : float
        Two-sided coverage in (0, 1).
    seed : int or sequence of int
        Seed for the resampling stream.
    """
    x = np.array([math.inf if s is None else float(s) for s in samples], dtype=float)
    if x.size == 0:
        raise ParameterError("bootstrap_median_ci needs at least one sample")
    if np.any(np.isnan(x)):
        raise ParameterError("samples contain NaN")
    if B < 1 or not 0 < level < 1:
        raise ParameterError("need B >= 1 and 0 < level < 1")
    n_cens = int(np.sum(np.isinf(x)))
    med = float(np.median(x))
    if 2 * n_cens > x.size or math.isinf(med):
        return MedianCI(None, None, None, True, n_cens)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    idx = rng.integers(0, x.size, size=(B, x.size))
    boot = np.sort(np.median(x[idx], axis=1))
    tail = 0.5 * (1.0 - level)
    lo = _percentile_sorted(boot, tail)
    hi = _percentile_sorted(boot, 1.0 - tail)
    return MedianCI(med, lo, hi, False, n_cens)


# ---------------------------------------------------------------------------
# CSV and JSON output
# ---------------------------------------------------------------------------

def _format(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parser(hint):
    args = [a for a in typing.get_args(hint) if a is not type(None)]
    base = args[0] if args else hint
    optional = type(None) in typing.get_args(hint)
    if base is bool:
        conv = {"true": True, "false": False}.__getitem__
    elif isinstance(base, type) and issubclass(base, enum.Enum):
        conv = base
    else:
        conv = base

    def parse(text):
        if text == "" and optional:
            return None
        return conv(text)
    return parse


def write_records(path, records, cls=None):
    """Write dataclass records as CSV with a header row.

    Floats are written with ``repr`` so that :func:`read_records` restores
    them exactly; None becomes an empty field.
    """
    records = list(records)
    cls = cls or type(records[0])
    names = [f.name for f in dataclasses.fields(cls)]
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for r in records:
            w.writerow([_format(getattr(r, n)) for n in names])


def read_records(path, cls):
    """Inverse of :func:`write_records`."""
    hints = typing.get_type_hints(cls)
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    names = [f.name for f in dataclasses.fields(cls)]
    if header != names:
        raise ParameterError(f"{path}: header {header} does not match {cls.__name__}")
    parsers = [_parser(hints[n]) for n in names]
    return [cls(*(p(v) for p, v in zip(parsers, row))) for row in body]


def _jsonable(obj):
    if dataclasses.is_dataclass(obj):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def write_sidecar(csv_path, command: str, config, extra=None) -> Path:
    """Write ``<csv_path>.json`` recording the command, config and version."""
    from . import __version__

    doc = {"library": "nonconvex_ag", "version": __version__,
           "command": command, "config": _jsonable(config)}
    if extra:
        doc.update(_jsonable(extra))
    out = Path(str(csv_path) + ".json")
    out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return out


# ---------------------------------------------------------------------------
# job plumbing
# ---------------------------------------------------------------------------

def _run_jobs(fn, jobs, workers):
    if workers is None or workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=1))


def _family_code(family):
    return 0 if family is Family.LINEAR else 1


def _tau_code(tau):
    return int(round(tau * 1_000_000))


def _mean_se(values):
    vals = [v for v in values if v is not None and not math.isnan(v)]
    if not vals:
        return None, None
    mean = float(np.mean(vals))
    se = float(np.std(vals, ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else None
    return mean, se


def _fix_enum(obj, name, cls):
    object.__setattr__(obj, name, cls(getattr(getattr(obj, name), "value", getattr(obj, name))))


def _as_tuple(obj, name, conv=lambda v: v):
    object.__setattr__(obj, name, tuple(conv(v) for v in getattr(obj, name)))


# ---------------------------------------------------------------------------
# convergence benchmark
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchConfig:
    """Grid and solver settings of a convergence benchmark.

    The descent target of a replicate is ``g* + offset`` where ``g*`` is the
    smallest objective value recorded by any of the three methods on that
    replicate. Logistic runs use their own ``lambda`` and offset because
    the mean logistic loss is bounded by ``log 2`` at the null model.
    """

    ns: tuple = (200,)
    q: int = 400
    taus: tuple = (0.1, 0.5, 0.9)
    families: tuple = (Family.LINEAR, Family.LOGISTIC)
    penalties: tuple = (PenaltyKind.SCAD, PenaltyKind.MCP)
    reps: int = 10
    seed: int = 0
    snr: float = 3.0
    lam: float = 0.5
    logistic_lam: float = 0.05
    scad_a: float = 3.7
    mcp_gamma: float = 3.0
    linear_offset: float = math.e ** 3
    logistic_offset: float = math.e ** -3
    max_iter: int = 2000
    tol: float = 1e-6
    B: int = 1000
    level: float = 0.95
    pattern: Pattern = Pattern.BLOCKS5X10

    def __post_init__(self):
        _as_tuple(self, "ns", int)
        _as_tuple(self, "taus", float)
        _as_tuple(self, "families", lambda v: Family(getattr(v, "value", v)))
        _as_tuple(self, "penalties", lambda v: PenaltyKind(getattr(v, "value", v)))
        _fix_enum(self, "pattern", Pattern)
        if self.reps < 1:
            raise ParameterError("reps must be >= 1")
        if not (self.ns and self.taus and self.families and self.penalties):
            raise ParameterError("every grid axis needs at least one value")
        if not (self.linear_offset > 0 and self.logistic_offset > 0):
            raise ParameterError("target offsets must be > 0")
        for n in self.ns:
            SimConfig(n, self.q, self.taus[0], self.snr)

    def shape(self, kind):
        return self.scad_a if kind is PenaltyKind.SCAD else self.mcp_gamma

    def lam_for(self, family):
        return self.lam if family is Family.LINEAR else self.logistic_lam

    def offset_for(self, family):
        return self.linear_offset if family is Family.LINEAR else self.logistic_offset


@dataclass(frozen=True)
class BenchRecord:
    """One method on one replicate. ``iterations_to_target`` is None when censored."""

    family: Family
    penalty: PenaltyKind
    n: int
    q: int
    tau: float
    q_over_n: float
    replicate: int
    method: Method
    iterations_to_target: int | None
    censored: bool
    iterations_run: int | None
    final_objective: float | None
    g_star: float | None
    target: float | None
    monotone: bool | None
    error: str | None = None


@dataclass(frozen=True)
class BenchSummary:
    """Median iterations-to-target with its bootstrap interval for one cell and method."""

    family: Family
    penalty: PenaltyKind
    n: int
    q: int
    tau: float
    q_over_n: float
    method: Method
    reps: int
    median: float | None
    ci_lo: float | None
    ci_hi: float | None
    breakdown: bool
    censored: int
    errors: int


@dataclass
class BenchResult:
    config: BenchConfig
    records: list
    summary: list

    def write(self, path, records_path=None, command="bench"):
        write_records(path, self.summary, BenchSummary)
        if records_path is not None:
            write_records(records_path, self.records, BenchRecord)
        write_sidecar(path, command, self.config)


def _bench_job(args):
    config, family, n, tau, rep = args
    key = (_family_code(family), n, _tau_code(tau))
    sim = SimConfig(n, config.q, tau, config.snr, family, config.pattern, config.seed)
    solver_cfg = SolverConfig(max_iter=config.max_iter, tol=config.tol)
    out = []
    common = dict(family=family, n=n, q=config.q, tau=tau, q_over_n=config.q / n,
                  replicate=rep)
    try:
        draw = simulate(sim, rep, key=key)
        data = Dataset.from_raw(draw.X, draw.y, family)
        x0 = data.null_coefficients()
    except (ValueError, FloatingPointError) as exc:
        return [BenchRecord(penalty=k, method=m, iterations_to_target=None, censored=True,
                            iterations_run=None, final_objective=None, g_star=None,
                            target=None, monotone=None, error=f"{type(exc).__name__}: {exc}",
                            **common)
                for k in config.penalties for m in Method]
    for kind in config.penalties:
        spec = PenaltySpec(kind, config.lam_for(family), config.shape(kind))
        fits, errors = {}, {}
        try:
            problem = CompositeProblem(data, spec)
        except (ValueError, FloatingPointError) as exc:
            errors = {m: f"{type(exc).__name__}: {exc}" for m in Method}
        else:
            for m in Method:
                try:
                    if m is Method.AG_PROPOSED:
                        fit = ag_solve(problem, proposed_schedule(problem.L_psi), solver_cfg, x0)
                    elif m is Method.AG_ORIGINAL:
                        fit = ag_solve(problem, original_schedule(problem.L_psi), solver_cfg, x0)
                    else:
                        fit = ista_solve(problem, solver_cfg, x0)
                    fits[m] = fit
                except (ValueError, FloatingPointError) as exc:
                    errors[m] = f"{type(exc).__name__}: {exc}"
        g_star = min((float(np.min(f.objective)) for f in fits.values()), default=None)
        target = None if g_star is None else g_star + config.offset_for(family)
        for m in Method:
            if m in fits:
                f = fits[m]
                hit = iterations_to_target(f.objective, target)
                out.append(BenchRecord(
                    penalty=kind, method=m, iterations_to_target=hit, censored=hit is None,
                    iterations_run=f.iterations, final_objective=float(f.objective[-1]),
                    g_star=g_star, target=target, monotone=is_monotone_descent(f.objective),
                    **common))
            else:
                out.append(BenchRecord(
                    penalty=kind, method=m, iterations_to_target=None, censored=True,
                    iterations_run=None, final_objective=None, g_star=g_star,
                    target=target, monotone=None, error=errors[m], **common))
    return out


def _record_key(r):
    return (_family_code(r.family), r.penalty.value, r.n, r.tau, list(Method).index(r.method),
            r.replicate)


def run_benchmark(config: BenchConfig, workers: int = 1) -> BenchResult:
    """Iterations needed by each method to reach the descent target.

    Every replicate of a ``(family, n, tau)`` cell shares one simulated
    dataset across penalties and methods. All methods start cold from the
    null (intercept-only) model.
    """
    jobs = [(config, fam, n, tau, rep)
            for fam in config.families for n in config.ns for tau in config.taus
            for rep in range(config.reps)]
    records = sorted((r for batch in _run_jobs(_bench_job, jobs, workers) for r in batch),
                     key=_record_key)
    summary = []
    for fam in config.families:
        for kind in config.penalties:
            for n in config.ns:
                for tau in config.taus:
                    for m in Method:
                        cell = [r for r in records if r.family is fam and r.penalty is kind
                                and r.n == n and r.tau == tau and r.method is m]
                        ok = [r for r in cell if r.error is None]
                        seed = (config.seed, _family_code(fam), list(PenaltyKind).index(kind),
                                n, _tau_code(tau), list(Method).index(m))
                        if ok:
                            ci = bootstrap_median_ci([r.iterations_to_target for r in ok],
                                                     config.B, config.level, seed)
                        else:
                            ci = MedianCI(None, None, None, True, 0)
                        summary.append(BenchSummary(
                            family=fam, penalty=kind, n=n, q=config.q, tau=tau,
                            q_over_n=config.q / n, method=m, reps=len(cell),
                            median=ci.median, ci_lo=ci.lo, ci_hi=ci.hi,
                            breakdown=ci.breakdown, censored=ci.n_censored,
                            errors=len(cell) - len(ok)))
    return BenchResult(config, records, summary)


# ---------------------------------------------------------------------------
# signal recovery
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecoveryConfig:
    """Grid and path settings of a signal recovery study.

    Every replicate draws a validation set of the training size; the path
    point with the smallest validation loss is scored against the planted
    coefficients on the original covariate scale.
    """

    n: int = 200
    q: int = 410
    snrs: tuple = (1.0, 3.0, 7.0, 10.0)
    taus: tuple = (0.1, 0.5, 0.9)
    families: tuple = (Family.LINEAR, Family.LOGISTIC)
    penalties: tuple = (PenaltyKind.SCAD, PenaltyKind.MCP)
    reps: int = 10
    seed: int = 0
    scad_a: float = 3.7
    mcp_gamma: float = 3.0
    grid_size: int = 50
    warm_start: bool = True
    max_iter: int = 2000
    tol: float = 1e-6
    zero_tol: float = ZERO_TOL
    pattern: Pattern = Pattern.BLOCKS5X10

    def __post_init__(self):
        _as_tuple(self, "snrs", float)
        _as_tuple(self, "taus", float)
        _as_tuple(self, "families", lambda v: Family(getattr(v, "value", v)))
        _as_tuple(self, "penalties", lambda v: PenaltyKind(getattr(v, "value", v)))
        _fix_enum(self, "pattern", Pattern)
        if self.reps < 1:
            raise ParameterError("reps must be >= 1")
        if not (self.snrs and self.taus and self.families and self.penalties):
            raise ParameterError("every grid axis needs at least one value")
        if self.grid_size < 2:
            raise ParameterError("grid_size must be >= 2")
        for snr in self.snrs:
            SimConfig(self.n, self.q, self.taus[0], snr)

    def shape(self, kind):
        return self.scad_a if kind is PenaltyKind.SCAD else self.mcp_gamma


@dataclass(frozen=True)
class RecoveryRecord:
    family: Family
    penalty: PenaltyKind
    tau: float
    snr: float
    replicate: int
    ppv: float | None
    npv: float | None
    scaled_error: float | None
    active_size: int | None
    selected_lambda: float | None
    error: str | None = None


@dataclass(frozen=True)
class RecoverySummary:
    """Replicate means and standard errors for one cell.

    Undefined PPV/NPV values are left out of the means; their counts are in
    ``ppv_missing`` and ``npv_missing``.
    """

    family: Family
    penalty: PenaltyKind
    tau: float
    snr: float
    reps: int
    ppv_mean: float | None
    ppv_se: float | None
    ppv_missing: int
    npv_mean: float | None
    npv_se: float | None
    npv_missing: int
    scaled_error_mean: float | None
    scaled_error_se: float | None
    active_size_mean: float | None
    active_size_se: float | None
    errors: int


@dataclass
class RecoveryResult:
    config: RecoveryConfig
    records: list
    summary: list

    def write(self, path, records_path=None, command="recover"):
        write_records(path, self.summary, RecoverySummary)
        if records_path is not None:
            write_records(records_path, self.records, RecoveryRecord)
        write_sidecar(path, command, self.config)


def _recovery_job(args):
    config, family, tau, snr, rep = args
    key = (_family_code(family), _tau_code(tau), _tau_code(snr))
    sim = SimConfig(config.n, config.q, tau, snr, family, config.pattern, config.seed)
    solver_cfg = SolverConfig(max_iter=config.max_iter, tol=config.tol, record_trace=False)
    common = dict(family=family, tau=tau, snr=snr, replicate=rep)

    def failed(kind, exc):
        return RecoveryRecord(penalty=kind, ppv=None, npv=None, scaled_error=None,
                              active_size=None, selected_lambda=None,
                              error=f"{type(exc).__name__}: {exc}", **common)
    try:
        draw = simulate(sim, rep, key=key, n_validation=config.n)
        train = Dataset.from_raw(draw.X, draw.y, family)
        valid = train.transform(draw.X_val, draw.y_val)
        grid = lambda_grid(lambda_max(train), config.grid_size)
    except (ValueError, FloatingPointError) as exc:
        return [failed(kind, exc) for kind in config.penalties]
    out = []
    for kind in config.penalties:
        try:
            path = path_solve(train, kind, config.shape(kind), grid, solver_cfg,
                              warm_start=config.warm_start)
            best = select_by_validation(path, valid)
        except (ValueError, FloatingPointError) as exc:
            out.append(failed(kind, exc))
            continue
        beta = train.to_original_scale(path.fits[best].beta)
        m = recovery_metrics(draw.truth, beta, config.zero_tol)
        out.append(RecoveryRecord(penalty=kind, ppv=m.ppv, npv=m.npv,
                                  scaled_error=m.scaled_error, active_size=m.active_size,
                                  selected_lambda=float(grid[best]), **common))
    return out


def run_recovery(config: RecoveryConfig, workers: int = 1) -> RecoveryResult:
    """Fit a lambda path per replicate, select by validation loss and score it."""
    jobs = [(config, fam, tau, snr, rep)
            for fam in config.families for tau in config.taus for snr in config.snrs
            for rep in range(config.reps)]
    records = sorted((r for batch in _run_jobs(_recovery_job, jobs, workers) for r in batch),
                     key=lambda r: (_family_code(r.family), r.penalty.value, r.tau, r.snr,
                                    r.replicate))
    summary = []
    for fam in config.families:
        for kind in config.penalties:
            for tau in config.taus:
                for snr in config.snrs:
                    cell = [r for r in records if r.family is fam and r.penalty is kind
                            and r.tau == tau and r.snr == snr]
                    ok = [r for r in cell if r.error is None]
                    ppv = _mean_se([r.ppv for r in ok])
                    npv = _mean_se([r.npv for r in ok])
                    err = _mean_se([r.scaled_error for r in ok])
                    size = _mean_se([float(r.active_size) for r in ok])
                    summary.append(RecoverySummary(
                        family=fam, penalty=kind, tau=tau, snr=snr, reps=len(cell),
                        ppv_mean=ppv[0], ppv_se=ppv[1],
                        ppv_missing=sum(r.ppv is None for r in ok),
                        npv_mean=npv[0], npv_se=npv[1],
                        npv_missing=sum(r.npv is None for r in ok),
                        scaled_error_mean=err[0], scaled_error_se=err[1],
                        active_size_mean=size[0], active_size_se=size[1],
                        errors=len(cell) - len(ok)))
    return RecoveryResult(config, records, summary)


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def bench_preset(name: str, **overrides) -> BenchConfig:
    """``desk`` (n=200, q=400, 10 reps) or ``paper`` (n up to 3000, q=2050, 100 reps)."""
    presets = {
        "desk": dict(ns=(200,), q=400, reps=10),
        "paper": dict(ns=(200, 500, 1000, 3000), q=2050, reps=100),
    }
    if name not in presets:
        raise ParameterError(f"unknown preset {name!r}; choose from {sorted(presets)}")
    kw = presets[name]
    kw.update({k: v for k, v in overrides.items() if v is not None})
    return BenchConfig(**kw)


def recovery_preset(name: str, **overrides) -> RecoveryConfig:
    """``desk`` (n=200, q=410, 10 reps) or ``paper`` (n=1000, q=2050, 100 reps)."""
    presets = {
        "desk": dict(n=200, q=410, reps=10),
        "paper": dict(n=1000, q=2050, reps=100),
    }
    if name not in presets:
        raise ParameterError(f"unknown preset {name!r}; choose from {sorted(presets)}")
    kw = presets[name]
    kw.update({k: v for k, v in overrides.items() if v is not None})
    return RecoveryConfig(**kw)
