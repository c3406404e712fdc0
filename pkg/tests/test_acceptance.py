"""Acceptance checks, one test per criterion, each at its stated tolerance.

A one-line verdict per criterion is printed and collected into the
"acceptance criteria" section at the end of the pytest report.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from nonconvex_ag.ag import (
    CompositeProblem,
    SolverConfig,
    ag_solve,
    ag_solve_momentum_form,
    alpha_bounds,
    complexity_bound_terms,
    ista_solve,
    original_schedule,
    proposed_alphas,
    proposed_schedule,
    verify_conditions,
)
from nonconvex_ag.cli import main
from nonconvex_ag.harness import (
    Method,
    bench_preset,
    recovery_metrics,
    recovery_preset,
    run_benchmark,
    run_recovery,
)
from nonconvex_ag.model import Dataset, loss, loss_grad
from nonconvex_ag.path import fit_solver, lambda_max
from nonconvex_ag.penalty import (
    PenaltySpec,
    dc_smooth_grad,
    dc_smooth_lipschitz,
    dc_smooth_value,
    penalty_value,
)
from nonconvex_ag.simgen import SimConfig, simulate

pytestmark = pytest.mark.acceptance


def reference_alphas(n):
    out = [1.0]
    for _ in range(n - 1):
        a = out[-1]
        out.append(2.0 / (1.0 + math.sqrt(1.0 + 4.0 / (a * a))))
    return np.array(out)


def test_criterion_01_alpha_schedule(criterion):
    t0 = time.perf_counter()
    a = proposed_schedule(1.0).alphas(100_000)
    ref = reference_alphas(100_000)
    ok_first = a[0] == 1.0 and abs(a[1] - (math.sqrt(5) - 1) / 2) <= 1e-12
    rec_err = float(np.max(np.abs(a - ref) / ref))
    # alpha_{k+1} solves alpha^2 = (1 - alpha) alpha_k^2
    resid = float(np.max(np.abs(a[1:] ** 2 - (1 - a[1:]) * a[:-1] ** 2) / a[:-1] ** 2))
    elapsed = time.perf_counter() - t0
    ok = ok_first and rec_err <= 1e-12 and resid <= 1e-12 and elapsed < 1.0
    assert criterion(1, "alpha_1 = 1, alpha_2 = (sqrt5-1)/2, recursion reproduced", ok,
                     f"alpha_2 err {abs(a[1] - (math.sqrt(5) - 1) / 2):.1e}, "
                     f"recursion rel err {rec_err:.1e}, residual {resid:.1e}, {elapsed:.2f}s")


def test_criterion_02_alpha_bounds(criterion):
    t0 = time.perf_counter()
    k = np.arange(1, 1_000_001, dtype=float)
    a = proposed_alphas(k.size)
    lo, hi = alpha_bounds(k)
    ok = bool(np.all(a <= hi) and np.all(lo[1:] < a[1:]) and lo[0] <= a[0])
    rng = np.random.default_rng(2024)
    pairs = []
    while len(pairs) < 20:
        aa, bb = rng.uniform(0.1, 6.0), rng.uniform(0.01, 0.99)
        c1 = aa * 2.0**-bb > math.sqrt(5) - 2
        c2 = aa * (1 - bb) * 2.0 ** (2 - bb) - aa * bb * (1 - bb) * 2.0**-bb - 1 >= 0
        if c1 and c2:
            pairs.append((aa, bb))
    bad = []
    for aa, bb in pairs:
        lo_ab, hi_ab = alpha_bounds(k, aa, bb)
        if not (np.all(a <= hi_ab) and np.all(lo_ab[1:] < a[1:])):
            bad.append((aa, bb))
    ok = ok and not bad
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 10.0
    assert criterion(2, "alpha bounds for k <= 1e6 and 20 random (a, b)", ok,
                     f"{len(bad)} failing pairs, {elapsed:.2f}s")


def test_criterion_03_convergence_conditions(criterion):
    details, ok = [], True
    for L in (0.1, 1.0, 100.0):
        for make in (proposed_schedule, original_schedule):
            rep = verify_conditions(make(L), L, 10_000)
            ok &= rep.ok
            if not rep.ok:
                details.append(f"{make.__name__} L={L}: {rep}")
        s = proposed_schedule(L)
        k = np.arange(1, 10_001)
        err = float(np.max(np.abs(s.alpha(k) * s.delta(k) - s.omega)) / s.omega)
        ok &= err <= 1e-12
        details.append(f"L={L} alpha*delta rel err {err:.1e}")
    assert criterion(3, "conditions hold for both schedules, N = 1e4", ok, "; ".join(details))


def test_criterion_04_dc_decomposition(criterion):
    rng = np.random.default_rng(4)
    recon_err, fd_err, lip_excess = 0.0, 0.0, -np.inf
    for _ in range(10_000):
        kind = rng.choice(["scad", "mcp"])
        lam = rng.uniform(0.01, 3.0)
        shape = rng.uniform(2.01, 8.0) if kind == "scad" else rng.uniform(1.01, 8.0)
        spec = PenaltySpec(kind, lam, shape)
        t = rng.uniform(-3 * shape * lam, 3 * shape * lam)
        p = penalty_value(spec, t)
        recon_err = max(recon_err, abs(lam * abs(t) + dc_smooth_value(spec, t) - p)
                        / max(1.0, abs(p)))
        knots = np.array([lam, shape * lam])
        if np.min(np.abs(abs(t) - knots)) > 1e-4 and abs(t) > 1e-4:
            h = 1e-7 * max(1.0, abs(t))
            fd = (dc_smooth_value(spec, t + h) - dc_smooth_value(spec, t - h)) / (2 * h)
            g = dc_smooth_grad(spec, t)
            fd_err = max(fd_err, abs(g - fd) / max(abs(fd), 1.0))
        s, u = rng.uniform(-3 * shape * lam, 3 * shape * lam, 2)
        if s != u:
            ratio = abs(dc_smooth_grad(spec, s) - dc_smooth_grad(spec, u)) / abs(s - u)
            lip_excess = max(lip_excess, ratio - dc_smooth_lipschitz(spec))
    ok = recon_err <= 1e-12 and fd_err <= 1e-6 and lip_excess <= 1e-8
    assert criterion(4, "DC split reconstructs penalty, h' correct and Lipschitz", ok,
                     f"recon {recon_err:.1e}, fd {fd_err:.1e}, Lipschitz excess {lip_excess:.1e}")


def test_criterion_05_gradient(criterion):
    rng = np.random.default_rng(5)
    worst = 0.0
    for i in range(100):
        family = "linear" if i % 2 == 0 else "logistic"
        n, q = int(rng.integers(3, 51)), int(rng.integers(1, 21))
        raw = rng.normal(size=(n, q))
        if family == "linear":
            y = rng.normal(size=n)
        else:
            y = (rng.random(n) < 0.5).astype(float)
        data = Dataset.from_raw(raw, y, family, standardized=False)
        beta = rng.normal(size=q + 1)
        g = loss_grad(data, beta)
        h = 1e-6
        fd = np.array([(loss(data, beta + h * e) - loss(data, beta - h * e)) / (2 * h)
                       for e in np.eye(q + 1)])
        worst = max(worst, float(np.linalg.norm(g - fd) / np.linalg.norm(fd)))
    assert criterion(5, "loss gradient vs central differences", worst < 1e-6,
                     f"worst relative error {worst:.1e}")


class _Quadratic:
    def __init__(self, A, b):
        self.A, self.b = A, b
        self.L_psi = float(np.linalg.eigvalsh(A)[-1])
        self.lam = 0.0
        self.dim = b.size
        self.penalized_mask = np.zeros(b.size, dtype=bool)

    def evaluate(self, x, with_value=True):
        Ax = self.A @ x
        return 0.5 * x @ Ax - self.b @ x, Ax - self.b


def test_criterion_06_form_equivalence(criterion):
    rng = np.random.default_rng(6)
    cfg = SolverConfig(max_iter=100, tol=1e-300, keep_iterates=True)
    worst = 0.0
    for _ in range(20):
        p = int(rng.integers(2, 30))
        M = rng.normal(size=(p, p))
        prob = _Quadratic(M.T @ M / p + rng.uniform(0, 0.5) * np.eye(p), rng.normal(size=p))
        s = proposed_schedule(prob.L_psi)
        a = ag_solve(prob, s, cfg)
        b = ag_solve_momentum_form(prob, s, cfg)
        worst = max(worst, float(np.max(np.abs(a.iterates - b.iterates))))
    assert criterion(6, "two-step and momentum forms agree over 100 iterations",
                     worst <= 1e-8, f"max |diff| {worst:.1e}")


def _orthonormal(z, rng, n=30):
    x = rng.normal(size=n)
    x -= x.mean()
    x *= math.sqrt(n) / np.linalg.norm(x)
    e = rng.normal(size=n)
    e -= e.mean() + (e @ x) / n * x
    return Dataset(np.column_stack([np.ones(n), x]), rng.normal() + z * x + e)


def test_criterion_07_scalar_oracle(criterion):
    rng = np.random.default_rng(7)
    cfg = SolverConfig(max_iter=20_000, tol=1e-9)
    worst = 0.0
    for kind in ("scad", "mcp"):
        for _ in range(50):
            z, lam = rng.uniform(-5, 5), rng.uniform(0.05, 2.0)
            shape = rng.uniform(2.1, 6.0) if kind == "scad" else rng.uniform(1.1, 6.0)
            spec = PenaltySpec(kind, lam, shape)
            grid = np.arange(-abs(z) - 1.0, abs(z) + 1.0, 1e-5)
            ref = grid[np.argmin(0.5 * (grid - z) ** 2 + penalty_value(spec, grid))]
            prob = CompositeProblem(_orthonormal(z, rng), spec)
            for fit in (ag_solve(prob, proposed_schedule(prob.L_psi), cfg),
                        ista_solve(prob, cfg)):
                worst = max(worst, abs(fit.beta[1] - ref))
    assert criterion(7, "1-D SCAD/MCP fits match grid search", worst <= 1e-4,
                     f"max distance {worst:.1e}")


def test_criterion_08_one_over_n_trend(criterion):
    L = 1.0
    s = proposed_schedule(L)
    Ns = [2**j for j in range(4, 15)]
    vals = np.array([N * complexity_bound_terms(s, N, L, 0.0, 1.0, 1.0, 1.0) for N in Ns])
    spread = float(vals.max() / vals.min())
    assert criterion(8, "N * bound (L_h = 0) within a factor of 3 over N = 2^4..2^14",
                     spread < 3.0, f"max/min = {spread:.3g}, N*bound from {vals[0]:.3g} "
                     f"to {vals[-1]:.3g}")


def test_criterion_09_convergence_ordering(criterion):
    t0 = time.perf_counter()
    res = run_benchmark(bench_preset("desk", seed=9))
    elapsed = time.perf_counter() - t0
    med = {}
    for s in res.summary:
        key = (s.family, s.penalty, s.n, s.tau)
        med.setdefault(key, {})[s.method] = math.inf if s.breakdown else s.median
    good = [m[Method.AG_PROPOSED] < m[Method.AG_ORIGINAL] and
            m[Method.AG_PROPOSED] < m[Method.ISTA] for m in med.values()]
    frac = sum(good) / len(good)
    ista = [r.monotone for r in res.records if r.method is Method.ISTA]
    mono = all(ista) and len(ista) == 120
    ok = frac >= 0.8 and mono and elapsed < 300
    assert criterion(9, "desk benchmark: proposed fastest in >= 80% of cells, ISTA monotone",
                     ok, f"{sum(good)}/{len(good)} cells, ISTA monotone {sum(ista)}/"
                     f"{len(ista)}, {elapsed:.0f}s")


def test_criterion_10_lambda_max(criterion):
    rng = np.random.default_rng(10)
    cfg = SolverConfig(record_trace=False)
    failures = 0
    for family in ("linear", "logistic"):
        for i in range(20):
            q = int(rng.integers(10, 60))
            sim = SimConfig(int(rng.integers(40, 120)), q, float(rng.uniform(0, 0.9)), 3.0,
                            family, "visual4", seed=i)
            draw = simulate(sim)
            data = Dataset.from_raw(draw.X, draw.y, family)
            lm = lambda_max(data)
            kind = "scad" if i % 2 else "mcp"
            shape = 3.7 if kind == "scad" else 3.0
            at = fit_solver(CompositeProblem(data, PenaltySpec(kind, lm, shape)), "ag", cfg,
                            data.null_coefficients())
            below = fit_solver(CompositeProblem(data, PenaltySpec(kind, 0.8 * lm, shape)),
                               "ag", cfg, data.null_coefficients())
            if np.any(at.beta[1:] != 0) or not np.any(below.beta[1:] != 0):
                failures += 1
    assert criterion(10, "empty support at lambda_max, nonempty at 0.8 lambda_max",
                     failures == 0, f"{failures}/40 failures")


def test_criterion_11_metrics_oracle(criterion):
    rng = np.random.default_rng(11)
    mismatches = 0
    for _ in range(1000):
        q = int(rng.integers(1, 40))
        truth = np.zeros(q + 1)
        est = np.zeros(q + 1)
        A = rng.random(q) < rng.random()
        S = rng.random(q) < rng.random()
        if not A.any():
            A[rng.integers(q)] = True
        # integer coefficients keep every sum exact
        truth[1:][A] = rng.choice([-3, -2, -1, 1, 2, 3], A.sum())
        est[1:][S] = rng.choice([-3, -2, -1, 1, 2, 3], S.sum())
        m = recovery_metrics(truth, est)
        Aset = {j for j in range(1, q + 1) if truth[j] != 0}
        Sset = {j for j in range(1, q + 1) if est[j] != 0}
        rest = set(range(1, q + 1)) - Sset
        ppv = Fraction(len(Aset & Sset), len(Sset)) if Sset else None
        npv = Fraction(len(rest - Aset), len(rest)) if rest else None
        err = Fraction(int(sum((truth[j] - est[j]) ** 2 for j in range(1, q + 1))),
                       int(sum(truth[j] ** 2 for j in range(1, q + 1))))
        same = ((m.ppv is None and ppv is None) or m.ppv == float(ppv)) and \
               ((m.npv is None and npv is None) or m.npv == float(npv)) and \
               m.scaled_error == float(err) and m.active_size == len(Sset)
        mismatches += not same
    assert criterion(11, "PPV/NPV/scaled error equal brute-force counting on 1e3 pairs",
                     mismatches == 0, f"{mismatches} mismatches")


@pytest.mark.slow
def test_criterion_12_recovery_trend(criterion):
    t0 = time.perf_counter()
    res = run_recovery(recovery_preset("desk", taus=(0.1,), seed=12))
    elapsed = time.perf_counter() - t0
    seqs = {}
    for s in res.summary:
        seqs.setdefault((s.family.value, s.penalty.value), []).append(
            (s.snr, s.scaled_error_mean))
    monotone = {}
    for key, vals in seqs.items():
        errs = [e for _, e in sorted(vals)]
        monotone[key] = all(b < a for a, b in zip(errs, errs[1:]))
    frac = sum(monotone.values()) / len(monotone)
    detail = ", ".join(f"{f}/{p}: {'yes' if v else 'no'}" for (f, p), v in monotone.items())
    assert criterion(12, "scaled error decreases in SNR at tau = 0.1 in >= 9/10 of cells",
                     frac >= 0.9, f"{detail}; {elapsed:.0f}s")


def test_criterion_13_determinism(criterion, tmp_path):
    bench = ["bench", "--preset", "desk", "--reps", "2", "--seed", "13", "--taus", "0.1,0.9"]
    recover = ["recover", "--preset", "desk", "--reps", "1", "--seed", "13", "--taus", "0.5",
               "--snrs", "1,7", "--grid-size", "10"]
    same = True
    for name, args in (("bench", bench), ("recover", recover)):
        blobs = []
        for run, workers in enumerate(("1", "1", "2")):
            out, rec = tmp_path / f"{name}{run}.csv", tmp_path / f"{name}{run}_rec.csv"
            assert main(args + ["--workers", workers, "--out", str(out),
                                "--records", str(rec)]) == 0
            side = (tmp_path / f"{name}{run}.csv.json").read_bytes()
            blobs.append((out.read_bytes(), rec.read_bytes(), side))
        same &= all(b == blobs[0] for b in blobs[1:])
    assert criterion(13, "bench and recover CSVs byte-identical across runs and workers", same)
