"""The e-logarithm of a CCR flow.

For decomposables u = T_{e(xi)}, v = T_{e(eta)} at x and a left coherent
reference section with defects rho_x (normalised to unit length),

    exp(L) = <u|v> / (<u|e_x> <e_x|v>) = exp(<xi - rho_x | eta - rho_x>),

and the continuous branch vanishing at the origin is the exponent itself.  It
is read from defect inner products, never from a complex logarithm.  With the
canonical unit as reference rho = 0 and L = <xi|eta>.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import ccr
from .ccr import DecomposableVector
from .errors import BasePointMismatch, FactorizationFailed, NotLatticePoint


class ReferenceSection:
    """A left coherent section x -> e_x of unit vectors, stored by its defects."""

    def __init__(self, rep, defect_fn: Callable, name: str = "e"):
        self.rep = rep
        self._defect = defect_fn
        self.name = name

    def __repr__(self):
        return f"ReferenceSection({self.name})"

    def defect(self, x):
        return self._defect(np.atleast_1d(np.asarray(x, dtype=float)))

    def at(self, x) -> DecomposableVector:
        rho = self.defect(x)
        return DecomposableVector(x, float(np.exp(-0.5 * rho.norm() ** 2)), rho)

    def propagator(self, y, x) -> DecomposableVector:
        """e(y, x): the right factor of e_x at y, normalised."""
        _, right = ccr.factorize(self.rep, self.at(x), y)
        rho = right.defect
        return DecomposableVector(right.x, float(np.exp(-0.5 * rho.norm() ** 2)), rho)

    @property
    def is_unit(self) -> bool:
        return self.name == "unit"

    @classmethod
    def unit(cls, rep) -> "ReferenceSection":
        return cls(rep, lambda x: rep.space.zero(), "unit")

    @classmethod
    def from_profile(cls, rep, g) -> "ReferenceSection":
        """rho_x = E_x^perp g for a fixed one-particle vector g."""
        return cls(rep, lambda x: rep.defect_projection(x)(g), "profile")

    @classmethod
    def from_seed(cls, rep, a, seed: DecomposableVector) -> "ReferenceSection":
        return cls(rep, lambda x: ccr.coherent_section(rep, a, seed, x).defect, "seeded")


def _same_base(*vectors: DecomposableVector):
    bases = {u.x for u in vectors}
    if len(bases) != 1:
        raise BasePointMismatch(f"decomposables based at {sorted(bases)}")


def elog(a, u: DecomposableVector, v: DecomposableVector, reference: ReferenceSection | None = None) -> complex:
    """L^e(a, u, v); independent of the scalars of u and v."""
    if ccr._key(a) != u.x:
        raise BasePointMismatch(f"u is based at {u.x}, not {a}")
    _same_base(u, v)
    if reference is None or reference.is_unit:
        return complex(u.defect.inner(v.defect))
    rho = reference.defect(u.point)
    return complex((u.defect - rho).inner(v.defect - rho))


def exp_identity_residual(rep, a, u, v, reference: ReferenceSection | None = None) -> float:
    """Relative defect of exp(L) <u|e_a><e_a|v> = <u|v>, inner products via operators."""
    reference = reference or ReferenceSection.unit(rep)
    e = ccr.as_operator(rep, reference.at(a))
    U, V = ccr.as_operator(rep, u), ccr.as_operator(rep, v)
    lhs = cmath.exp(elog(a, u, v, reference)) * ccr.ex_inner(U, e) * ccr.ex_inner(e, V)
    rhs = ccr.ex_inner(U, V)
    return abs(lhs - rhs) / abs(rhs)


def elog_partition(rep, a, u: DecomposableVector, v: DecomposableVector, n: int,
                   reference: ReferenceSection | None = None) -> complex:
    """Sum over n uniform cells of the ray t -> t a of (<u_k|v_k>/(<u_k|e_k><e_k|v_k>) - 1).

    The pieces u_k, v_k are propagators obtained by repeatedly factorising u
    and v; all inner products are computed through operator products.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _same_base(u, v)
    a = np.atleast_1d(np.asarray(a, dtype=float))
    step = a / n
    if hasattr(rep, "lattice_index"):
        try:
            rep.lattice_index(step)
        except NotLatticePoint:
            g = math.gcd(*(abs(i) for i in rep.lattice_index(a)))
            ok = max((m for m in range(1, g + 1) if g % m == 0 and m <= n), default=1)
            raise FactorizationFailed(f"a/{n} is off the lattice; try n = {ok}") from None
    reference = reference or ReferenceSection.unit(rep)
    rest_u, rest_v = u, v
    total = 0j
    for k in range(1, n + 1):
        if k < n:
            uk, rest_u = ccr.factorize(rep, rest_u, step)
            vk, rest_v = ccr.factorize(rep, rest_v, step)
        else:
            uk, vk = rest_u, rest_v
        ek = reference.propagator((k - 1) * step, k * step) if k > 1 else reference.at(step)
        Uk, Vk, Ek = (ccr.as_operator(rep, w) for w in (uk, vk, ek))
        ratio = ccr.ex_inner(Uk, Vk) / (ccr.ex_inner(Uk, Ek) * ccr.ex_inner(Ek, Vk))
        total += ratio - 1
    return total


@dataclass
class ELogKernel:
    base: tuple
    samples: list[DecomposableVector]
    reference: ReferenceSection | None
    matrix: np.ndarray


def elog_kernel(a, samples: Sequence[DecomposableVector], reference: ReferenceSection | None = None) -> ELogKernel:
    n = len(samples)
    K = np.empty((n, n), dtype=complex)
    for i, u in enumerate(samples):
        for j, v in enumerate(samples):
            K[i, j] = elog(a, u, v, reference) if j >= i else np.conj(K[j, i])
    return ELogKernel(tuple(np.atleast_1d(a)), list(samples), reference, K)


def gram_psd(kernel: ELogKernel) -> float:
    """Smallest eigenvalue of the Hermitian part of the kernel matrix."""
    K = kernel.matrix
    return float(np.linalg.eigvalsh(0.5 * (K + K.conj().T)).min())


def is_psd(kernel: ELogKernel, rel_tol: float = 1e-10) -> bool:
    scale = max(1.0, float(np.abs(np.trace(kernel.matrix))))
    return gram_psd(kernel) >= -rel_tol * scale


def psi(rep, a, b, v: DecomposableVector, reference: ReferenceSection) -> complex:
    """The coboundary psi_a(b, v) in the additivity defect of a non-unit reference.

    Continuous logarithm of |<e(a,a+b)|e_b>| <v|e_b> / (<v|e(a,a+b)> <e(a,a+b)|e_b>).
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    rho_b = reference.defect(b)
    rho_p = reference.propagator(a, a + b).defect
    eta = v.defect
    return (eta.inner(rho_b - rho_p) + 0.5 * (rho_p.norm() ** 2 - rho_b.norm() ** 2)
            - 1j * rho_p.inner(rho_b).imag)


class Additivity(NamedTuple):
    residual: complex
    predicted: complex


def additivity_check(rep, a, b, u1, u2, v1, v2, reference: ReferenceSection | None = None) -> Additivity:
    """L(a+b, u1 v1, u2 v2) - L(a, u1, u2) - L(b, v1, v2), with the psi prediction."""
    _same_base(u1, u2)
    _same_base(v1, v2)
    if u1.x != ccr._key(a) or v1.x != ccr._key(b):
        raise BasePointMismatch("u's must sit at a and v's at b")
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    w1, w2 = ccr.product(rep, u1, v1), ccr.product(rep, u2, v2)
    res = elog(a + b, w1, w2, reference) - elog(a, u1, u2, reference) - elog(b, v1, v2, reference)
    if reference is None or reference.is_unit:
        pred = 0j
    else:
        pred = psi(rep, a, b, v1, reference) + np.conj(psi(rep, a, b, v2, reference))
    return Additivity(complex(res), complex(pred))


def ray_profile(rep, a, seed_u, seed_v, points: Sequence, reference: ReferenceSection | None = None) -> np.ndarray:
    """t -> L(x_t, u_{x_t}, v_{x_t}) for coherent sections through two seeds at a."""
    out = []
    for x in points:
        u = ccr.coherent_section(rep, a, seed_u, x)
        v = ccr.coherent_section(rep, a, seed_v, x)
        out.append(elog(x, u, v, reference))
    return np.array(out)
