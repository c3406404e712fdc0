"""SCAD and MCP: values, the convex/concave split, and the l1 prox.

Run with ``python3 demos/01_penalties.py``.
"""
import numpy as np

from nonconvex_ag.penalty import (
    PenaltySpec,
    dc_smooth_grad,
    dc_smooth_lipschitz,
    dc_smooth_value,
    penalty_value,
    soft_threshold,
)

scad = PenaltySpec.scad(1.0, a=3.7)
mcp = PenaltySpec.mcp(1.0, gamma=3.0)
t = np.linspace(-6, 6, 13)

# Both penalties grow like |t| near zero and flatten out once |t| is large.
print("t     SCAD     MCP")
for ti, s, m in zip(t, penalty_value(scad, t), penalty_value(mcp, t)):
    print(f"{ti:+5.1f} {s:8.4f} {m:8.4f}")

# Each penalty is lam*|t| plus a smooth concave remainder h.
# Adding the two pieces back must give the penalty.
for spec in (scad, mcp):
    gap = penalty_value(spec, t) - (spec.lam * np.abs(t) + dc_smooth_value(spec, t))
    print(f"{spec.kind.value}: max |P - (lam|t| + h)| = {np.max(np.abs(gap)):.1e}, "
          f"Lipschitz constant of h' = {dc_smooth_lipschitz(spec):.4f}")

# h' is zero near the origin and then cancels the l1 slope, which is what flattens P.
print("h'(t) for SCAD:", np.round(dc_smooth_grad(scad, t), 3))

# The prox of the l1 part is soft thresholding.
print("soft_threshold([-2, -0.5, 0.3, 1.5], 1) =", soft_threshold(np.array([-2, -0.5, 0.3, 1.5]), 1.0))
