"""
A twisted product system without units
======================================

For lam not proportional to mu the affine candidates for a unit all leave a
residual on the second interval.  The grid scan and the exact minimax bound
agree.
"""

# %%
import numpy as np

from ccrflow import twisted

pairs = [((1.0, 0.0), (1.0, 0.0)), ((0.0, 1.0), (1.0, 0.0)), ((1.0, 1.0), (0.0, 1.0))]

# %%
for lam, mu in (([2.0, 2.0], [1.0, 1.0]), ([1.0, 2.0], [1.0, 1.0])):
    sys = twisted.TwistedSystem(lam, mu)
    scan = twisted.unit_scan(sys, pairs, np.linspace(-3, 3, 61), np.linspace(-3, 3, 13))
    bound = twisted.residual_lower_bound(sys, pairs)
    print(f"lam={lam}, mu={mu}: unit exists {twisted.unit_exists(lam, mu).exists}, "
          f"scan min {scan.min_residual:.4f} at alpha={scan.alpha:.2f}, exact bound {bound:.4f}")

# %%
# When lam = c mu the unit has defects (c x + beta) on (0, <mu|a>).
unit = twisted.UnitFamily(twisted.TwistedSystem([3.0, 1.5], [2.0, 1.0]), beta=0.4)
print("unit residual", unit.residual(pairs))
