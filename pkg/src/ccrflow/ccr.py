"""The CCR flow of an isometric representation, through its product system.

The product system element T^(x)_{e(xi)} (xi in Ker V_x^*) acts by
e(eta) -> e(xi + V_x eta); its scalar multiples are the decomposable vectors.
Nothing here builds the endomorphisms alpha_x themselves: every identity is
checked on Weyl-affine tuples.

A "representation" is anything with ``space``, ``cone``, ``shift(x)`` and
``defect_projection(x)``: both the lattice module representations and the
continuous shift of the twisted systems qualify.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .cone import archimedean_bound, order_relation
from .errors import NotComparable, NotInKernel
from .fock import (
    WeylAffineOp,
    adjoint,
    compose,
    scalar_part,
    second_quantization,
    tuple_distance,
    weyl,
)

KERNEL_TOL = 1e-12


def _key(x) -> tuple[float, ...]:
    return tuple(float(c) for c in np.atleast_1d(np.asarray(x, dtype=float)))


@dataclass(frozen=True)
class DecomposableVector:
    """scalar * T^(x)_{e(defect)}."""

    x: tuple[float, ...]
    scalar: complex
    defect: object

    def __post_init__(self):
        object.__setattr__(self, "x", _key(self.x))
        if self.scalar == 0:
            raise ValueError("decomposable vectors are nonzero")

    @property
    def point(self) -> np.ndarray:
        return np.array(self.x)

    def scaled(self, s: complex) -> "DecomposableVector":
        return DecomposableVector(self.x, s * self.scalar, self.defect)


def kernel_residual(rep, x, xi) -> float:
    return rep.shift(x).adjoint_apply(xi).norm()


def exp_op(rep, x, xi) -> WeylAffineOp:
    """T^(x)_{e(xi)} as the tuple (1, 0, V_x, xi)."""
    r = kernel_residual(rep, x, xi)
    if r > KERNEL_TOL * max(1.0, xi.norm()):
        raise NotInKernel(f"|V_x^* xi| = {r:.3g}")
    return WeylAffineOp(1.0 + 0j, rep.space.zero(), rep.shift(x), xi)


def decomposable(rep, x, xi=None, scalar: complex = 1.0) -> DecomposableVector:
    xi = rep.space.zero() if xi is None else xi
    r = kernel_residual(rep, x, xi)
    if r > KERNEL_TOL * max(1.0, xi.norm()):
        raise NotInKernel(f"|V_x^* xi| = {r:.3g}")
    return DecomposableVector(x, complex(scalar), xi)


def as_operator(rep, u: DecomposableVector) -> WeylAffineOp:
    return exp_op(rep, u.point, u.defect) * u.scalar


def unit_section(rep, x) -> DecomposableVector:
    """Gamma(V_x), the canonical unit."""
    return DecomposableVector(x, 1.0, rep.space.zero())


def gamma(rep, x) -> WeylAffineOp:
    return second_quantization(rep.shift(x), rep.space)


def product(rep, u: DecomposableVector, v: DecomposableVector) -> DecomposableVector:
    """u v in D(x + y): defect xi + V_x eta."""
    return DecomposableVector(u.point + v.point, u.scalar * v.scalar, u.defect + rep.shift(u.point)(v.defect))


def read_decomposable(rep, x, O: WeylAffineOp, probes: Iterable = (), tol: float = 1e-10) -> DecomposableVector:
    """Read an operator tuple back as a decomposable at x, checking it is one."""
    if O.w.norm() > tol:
        raise ValueError("tuple has a nonzero annihilation part")
    out = DecomposableVector(x, O.c, O.zeta)
    target = exp_op(rep, out.point, out.defect) * out.scalar
    dist = tuple_distance(O, target, [O.zeta, *probes])
    if dist > tol:
        raise ValueError(f"tuple is not a multiple of T^(x) (distance {dist:.3g})")
    return out


def operator_product(rep, u: DecomposableVector, v: DecomposableVector, tol: float = 1e-10) -> DecomposableVector:
    """u v computed by composing the tuples, then read back as a decomposable at x + y."""
    prod = compose(as_operator(rep, u), as_operator(rep, v))
    return read_decomposable(rep, u.point + v.point, prod, [u.defect, v.defect], tol)


def intertwining_check(rep, x, T: WeylAffineOp, probes: Iterable) -> float:
    """max over probes of the distance between W(V_x eta) T and T W(eta)."""
    V = rep.shift(x)
    worst = 0.0
    for eta in probes:
        lhs = compose(weyl(V(eta)), T)
        rhs = compose(T, weyl(eta))
        worst = max(worst, tuple_distance(lhs, rhs, [eta, V(eta)]))
    return worst


def factorize(rep, u: DecomposableVector, y) -> tuple[DecomposableVector, DecomposableVector]:
    """Split u at y <= x: left defect E_y^perp xi at y, right defect V_y^* xi at x - y."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if not order_relation(rep.cone, y, u.point).leq or not rep.cone.contains(y):
        raise NotComparable(f"{y.tolist()} is not between 0 and {list(u.x)}")
    left = DecomposableVector(y, u.scalar, rep.defect_projection(y)(u.defect))
    right = DecomposableVector(u.point - y, 1.0, rep.shift(y).adjoint_apply(u.defect))
    return left, right


def ex_inner(S: WeylAffineOp, T: WeylAffineOp, probes: Iterable = ()) -> complex:
    """<S|T> = T^* S, which is a scalar for S, T in the same E(x)."""
    prod = compose(adjoint(T), S)
    return scalar_part(prod, [S.zeta, T.zeta, *probes])


def decomposable_inner(rep, u: DecomposableVector, v: DecomposableVector) -> complex:
    """<u|v> computed through the operator product."""
    return ex_inner(as_operator(rep, u), as_operator(rep, v))


class UnitCheck(NamedTuple):
    ok: bool
    residual: float


def is_unit(section: Mapping, pairs: Sequence | None = None, tol: float = 1e-10, probes: Iterable = ()) -> UnitCheck:
    """Check u_x u_y = u_{x+y} on a sum-closed sample.

    Args:
        section: {lattice point tuple: WeylAffineOp}.
        pairs: (x, y) pairs to test; defaults to all pairs whose sum is sampled.
    """
    sec = {_key(x): op for x, op in section.items()}
    if pairs is None:
        pairs = [(x, y) for x in sec for y in sec if _key(np.add(x, y)) in sec]
    probes = list(probes)
    worst = 0.0
    for x, y in pairs:
        s = _key(np.add(x, y))
        worst = max(worst, tuple_distance(compose(sec[_key(x)], sec[_key(y)]), sec[s], probes))
    nonzero = all(abs(op.c) > 0 for op in sec.values())
    return UnitCheck(bool(nonzero and worst <= tol), float(worst))


def coherent_section(rep, a, seed: DecomposableVector, x) -> DecomposableVector:
    """Value at x of the left coherent section through seed^n, n from the Archimedean bound."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    n = archimedean_bound(rep.cone, x, a)
    V = rep.shift(a)
    big = rep.space.zero()
    step = seed.defect
    for _ in range(n):
        big = big + step
        step = V(step)
    return DecomposableVector(x, 1.0, rep.defect_projection(x)(big))


def normalized_pairing(u: DecomposableVector, v: DecomposableVector) -> complex:
    """<u|v> / (|u| |v|) for u, v in the same D(x)."""
    xi, eta = u.defect, v.defect
    phase = u.scalar * np.conj(v.scalar) / (abs(u.scalar) * abs(v.scalar))
    return phase * cmath.exp(xi.inner(eta) - 0.5 * xi.norm() ** 2 - 0.5 * eta.norm() ** 2)


def continuity_probe(rep, a, seed_u: DecomposableVector, seed_v: DecomposableVector, points: Sequence) -> list[complex]:
    """Normalised pairings of two coherent sections along a sequence of lattice points."""
    return [
        normalized_pairing(coherent_section(rep, a, seed_u, x), coherent_section(rep, a, seed_v, x))
        for x in points
    ]
