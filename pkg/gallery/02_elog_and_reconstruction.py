"""
From the e-logarithm back to the one-particle space
===================================================

The e-logarithm of two decomposable vectors is a positive definite kernel.
Differences of samples, embedded through that kernel, reproduce the
one-particle Gram matrix, and left multiplication by a decomposable plays the
role of the isometry.
"""

# %%
import numpy as np

from ccrflow import ccr, elog, reconstruction
from ccrflow.isometric import ModuleRep

rep = ModuleRep.half_line(eps=1 / 64)
ones = rep.space.from_values({i: 1.0 for i in range(64)})
u = ccr.decomposable(rep, 1.0, ones)

# %%
# Riemann sums over finer partitions of [0, 1] converge to <xi|xi> = 1.
for n in (1, 4, 16, 64):
    print(f"n = {n:2d}: {elog.elog_partition(rep, 1.0, u, u, n).real:.6f}")

# %%
# Reconstruction on the quarter plane.
rng = np.random.default_rng(1)
quarter = ModuleRep.quarter_plane(1.0)
keys = reconstruction.defect_keys(quarter, (2, 2))
defects = [quarter.space.from_values(dict(zip(keys, rng.normal(size=len(keys))))) for _ in range(4)]
report = reconstruction.verify_injectivity(quarter, (2, 2), defects, [(1, 0), (0, 1)], rng)
for key, val in report.as_dict().items():
    print(f"{key:>22}: {val}")
