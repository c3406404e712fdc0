"""Step-size schedules for the accelerated method.

The proposed schedule picks alpha_k from a recursion and ties delta_k to it.
The baseline uses alpha_k = 2/(k+1).  This script checks the convergence
conditions for both and compares their complexity bounds.
"""
import numpy as np

from nonconvex_ag.ag import (
    alpha_bounds,
    complexity_bound_terms,
    original_schedule,
    proposed_schedule,
    verify_conditions,
)

L = 4.0
prop, orig = proposed_schedule(L), original_schedule(L)

print("k   alpha(proposed)  alpha(original)  lower  upper")
lo, hi = alpha_bounds(np.arange(1, 9))
for k in range(1, 9):
    print(f"{k}   {prop.alpha(k):.6f}         {orig.alpha(k):.6f}         "
          f"{lo[k - 1]:.4f} {hi[k - 1]:.4f}")

# Gamma_k telescopes to alpha_k^2 for the proposed recursion
k = np.arange(1, 200)
print("max |Gamma_k - alpha_k^2| =", np.max(np.abs(prop.gamma(k) - prop.alpha(k) ** 2)))

for s in (prop, orig):
    print(s.name, "conditions hold for N=1000:", verify_conditions(s, L, 1000).ok)

# A constant alpha = 1/2 breaks the first-iterate condition alpha_1 = 1.
bad = original_schedule(L, alpha_fn=lambda k: np.full(k.shape, 0.5))
rep = verify_conditions(bad, L, 50)
print("constant alpha: domain ok =", rep.alpha_domain_ok,
      "first violation at k =", rep.alpha_domain_first_violation)

# With a nonconvex remainder (L_h > 0) the bound falls like 1/N.
# With L_h = 0 the bound falls faster.
print("\nN      proposed     original     N*proposed (L_h=1)  N^3*proposed (L_h=0)")
for N in (10, 100, 1000, 10000):
    bp = complexity_bound_terms(prop, N, L, 1.0, 1.0, 1.0, 1.0)
    bo = complexity_bound_terms(orig, N, L, 1.0, 1.0, 1.0, 1.0)
    b0 = complexity_bound_terms(prop, N, L, 0.0, 1.0, 1.0, 1.0)
    print(f"{N:<6} {bp:.4e}   {bo:.4e}   {N * bp:<18.4f}  {N**3 * b0:.4f}")
