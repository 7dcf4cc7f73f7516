"""Number-basis matrices of Weyl-affine operators: an independent oracle.

On an m-mode subspace K (orthonormal basis b_1..b_m) invariant under B and
containing zeta, the operator factorises in normal order as

    O = c * exp(sum_i zeta_i a_i^dagger) Gamma(B) exp(sum_i conj(w_i) a_i)

and every matrix entry between number states of total degree <= N is exact:
the left factor only raises and the right factor only lowers the degree.
Only quantities that need the whole Fock space (norms, inner products of
exponential vectors) carry a truncation error.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from .errors import SubspaceNotInvariant
from .fock import WeylAffineOp

MAX_MODES = 3
MAX_CUTOFF = 20


def number_basis(m: int, N: int) -> list[tuple[int, ...]]:
    """Multi-indices of total degree <= N, ordered by degree then lexicographically."""
    out = []
    for deg in range(N + 1):
        for n in itertools.product(range(deg + 1), repeat=m):
            if sum(n) == deg:
                out.append(n)
    return out


def _fact_sqrt(n: Sequence[int]) -> float:
    return math.sqrt(math.prod(math.factorial(k) for k in n))


def annihilation(m: int, N: int) -> list[np.ndarray]:
    basis = number_basis(m, N)
    pos = {n: i for i, n in enumerate(basis)}
    ops = []
    for i in range(m):
        a = np.zeros((len(basis), len(basis)))
        for col, n in enumerate(basis):
            if n[i] > 0:
                lower = n[:i] + (n[i] - 1,) + n[i + 1:]
                a[pos[lower], col] = math.sqrt(n[i])
        ops.append(a)
    return ops


def gamma_matrix(B: np.ndarray, N: int) -> np.ndarray:
    """Second quantisation of an m x m matrix on the truncated number basis."""
    m = B.shape[0]
    basis = number_basis(m, N)
    pos = {n: i for i, n in enumerate(basis)}
    # poly[n] = prod_i (sum_j B[j, i] y_j)^{n_i} as {exponent: coeff}
    poly: dict[tuple[int, ...], dict[tuple[int, ...], complex]] = {(0,) * m: {(0,) * m: 1.0}}
    G = np.zeros((len(basis), len(basis)), dtype=complex)
    for n in basis:
        if n not in poly:
            i = next(k for k in range(m) if n[k] > 0)
            prev = n[:i] + (n[i] - 1,) + n[i + 1:]
            out: dict[tuple[int, ...], complex] = {}
            for expo, coef in poly[prev].items():
                for j in range(m):
                    if B[j, i] != 0:
                        e = expo[:j] + (expo[j] + 1,) + expo[j + 1:]
                        out[e] = out.get(e, 0) + coef * B[j, i]
            poly[n] = out
        norm_n = _fact_sqrt(n)
        for expo, coef in poly[n].items():
            G[pos[expo], pos[n]] += coef * _fact_sqrt(expo) / norm_n
    return G


def _nilpotent_exp(X: np.ndarray, N: int) -> np.ndarray:
    out = np.eye(X.shape[0], dtype=complex)
    term = np.eye(X.shape[0], dtype=complex)
    for k in range(1, N + 1):
        term = term @ X / k
        out = out + term
    return out


def subspace_coordinates(v, basis: Sequence, tol: float = 1e-10) -> tuple[np.ndarray, float]:
    coords = np.array([v.inner(b) for b in basis], dtype=complex)
    resid = v
    for c, b in zip(coords, basis):
        resid = resid - c * b
    return coords, resid.norm()


def truncated_matrix(O: WeylAffineOp, basis: Sequence, N: int) -> np.ndarray:
    """Matrix of O on the number basis of Gamma(span(basis)), degree <= N.

    Args:
        basis: orthonormal one-particle vectors spanning a subspace that
            contains zeta and is invariant under B.
    """
    m = len(basis)
    if not 1 <= m <= MAX_MODES or not 0 <= N <= MAX_CUTOFF:
        raise ValueError(f"need 1 <= m <= {MAX_MODES} and N <= {MAX_CUTOFF}")
    gram = np.array([[b.inner(c) for c in basis] for b in basis])
    if not np.allclose(gram, np.eye(m), atol=1e-10):
        raise ValueError("basis is not orthonormal")
    zeta, rz = subspace_coordinates(O.zeta, basis)
    if rz > 1e-10:
        raise SubspaceNotInvariant("zeta is not in the subspace")
    w, _ = subspace_coordinates(O.w, basis)
    Bm = np.zeros((m, m), dtype=complex)
    for i, b in enumerate(basis):
        col, r = subspace_coordinates(O.B(b), basis)
        if r > 1e-10:
            raise SubspaceNotInvariant(f"B moves basis vector {i} out of the subspace")
        Bm[:, i] = col
    a = annihilation(m, N)
    raise_part = _nilpotent_exp(sum(z * ai.T for z, ai in zip(zeta, a)), N)
    lower_part = _nilpotent_exp(sum(np.conj(x) * ai for x, ai in zip(w, a)), N)
    return O.c * raise_part @ gamma_matrix(Bm, N) @ lower_part


def truncated_exp_vector(coords, N: int) -> np.ndarray:
    """Components xi^n / sqrt(n!) of e(xi) for |n| <= N."""
    coords = np.asarray(coords, dtype=complex)
    return np.array([np.prod(coords ** np.array(n)) / _fact_sqrt(n) for n in number_basis(len(coords), N)])


def truncation_bound(r: float, N: int) -> float:
    """Bound on the error of a truncated kernel <e(xi)|e(eta)> for |xi|, |eta| <= r."""
    return math.exp(r**2) * r ** (2 * (N + 1)) / math.factorial(N + 1)


def dump_matrix(path, M: np.ndarray) -> None:
    """Write real and imaginary parts as plain text, one row per line."""
    np.savetxt(path, np.hstack([M.real, M.imag]), header=f"{M.shape[0]}x{M.shape[1]} complex: real|imag")
