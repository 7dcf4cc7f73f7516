"""
Weyl operators without a Fock space
===================================

Every operator we need acts on exponential vectors by
``e(eta) -> c exp(<eta|w>) e(B eta + zeta)``, so it is stored as the tuple
(c, w, B, zeta) and composed symbolically.  This script checks the calculus
against explicit number-basis matrices.
"""

# %%
import numpy as np

from ccrflow import fock, truncated
from ccrflow.grid import GridSpace

S = GridSpace(dim=1)
xi = S.from_values({0: 0.6, 1: -0.3j})
eta = S.from_values({0: 0.2 + 0.1j, 1: 0.4})

# %%
# The vacuum expectation of W(xi) is exp(-|xi|^2 / 2).
W = fock.weyl(xi)
print("vacuum entry", fock.matrix_element(W, S.zero(), S.zero()), np.exp(-0.5 * xi.norm() ** 2))

# %%
# Composition picks up the phase exp(i Im<xi|eta>).
lhs = fock.compose(fock.weyl(xi), fock.weyl(eta))
rhs = fock.weyl(xi + eta) * np.exp(1j * xi.inner(eta).imag)
print("commutation residual", fock.tuple_distance(lhs, rhs))

# %%
# The same operator as a matrix on two modes, degree <= 20.  Entries between
# number states are exact; only the exponential vectors are truncated.
basis = [S.delta(0), S.delta(1)]
M = truncated.truncated_matrix(W, basis, 20)
e_eta = truncated.truncated_exp_vector([eta[((0,), 0)], eta[((1,), 0)]], 20)
vac = truncated.truncated_exp_vector([0, 0], 20)
print("matrix size", M.shape)
print("oracle vs calculus", abs(np.vdot(vac, M @ e_eta) - fock.matrix_element(W, eta, S.zero())))
