"""Simulated designs and planted signals.

Covariates are AR(1)-correlated with parameter tau.  The noise level is set
so that the signal-to-noise ratio matches the request.
"""
import numpy as np

from nonconvex_ag.simgen import (
    SimConfig,
    ar1_covariance,
    ar1_quadratic_form,
    noise_sd,
    simulate,
    true_beta,
)

truth = true_beta("blocks5x10", 410, seed=0)
print("blocks5x10 on q=410, support starts:",
      sorted(truth.support)[::10])

# The sample correlation of neighbouring columns should be close to tau.
d = simulate(SimConfig(n=4000, q=20, tau=0.7, pattern="visual4", seed=3))
c = np.corrcoef(d.X, rowvar=False)
print("mean lag-1 correlation:", np.mean(np.diag(c, 1)).round(3), "(tau = 0.7)")

# The quadratic form beta' Sigma beta is computed without building Sigma.
b = truth.beta[1:]
print("beta' Sigma beta:", ar1_quadratic_form(b, 0.5),
      "dense check:", b @ ar1_covariance(b.size, 0.5) @ b)
print("noise sd for SNR 3:", noise_sd(truth.beta, 3.0, 0.5))

# Same seed and replicate give identical data; another replicate differs.
a = simulate(SimConfig(n=50, q=60, seed=11), replicate=2)
b2 = simulate(SimConfig(n=50, q=60, seed=11), replicate=2)
c2 = simulate(SimConfig(n=50, q=60, seed=11), replicate=3)
print("reproducible:", np.array_equal(a.X, b2.X), " replicates differ:", not np.array_equal(a.X, c2.X))

# logistic responses are 0/1
lg = simulate(SimConfig(n=200, q=60, family="logistic", seed=1))
print("logistic response mean:", lg.y.mean())
