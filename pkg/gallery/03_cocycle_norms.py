"""
Contractive local cocycles on the half-line
===========================================

A cocycle is fixed by a drift lam, an additive cocycle xi and a pointwise
contraction A.  Its operator norm has a closed form, which we compare with a
truncated Fock-space computation as the drift is increased past the
contractivity threshold.
"""

# %%
import numpy as np

from ccrflow import cocycles
from ccrflow.errors import NotContractive
from ccrflow.isometric import AdditiveCocycle, ModuleRep

rep = ModuleRep.half_line(eps=0.5)
xi = AdditiveCocycle.indicator(rep, 0.5)
A = cocycles.PointwiseOperator.scalar(0.5)

# %%
# The threshold is |c|^2 / (1 - A) = 0.5; below it the family is rejected.
for lam in (0.25, 0.5, 1.0):
    params = cocycles.CocycleParams([lam], xi, A)
    try:
        fam = cocycles.CocycleFamily(rep, params)
    except NotContractive:
        print(f"lam = {lam}: not contractive")
        continue
    x = 1.0
    print(f"lam = {lam}: formula {cocycles.norm_formula(params, x):.6f}, "
          f"truncated {cocycles.truncated_norm(rep, fam, x):.6f}")

# %%
# The parameters can be read back from the action on decomposable vectors.
fam = cocycles.CocycleFamily(rep, cocycles.CocycleParams([1.0], xi, A))
rec = cocycles.recover_params(rep, fam)
print("recovered lam", np.round(rec.lam, 12), "residual", rec.residual)
