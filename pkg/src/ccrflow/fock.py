"""Operator calculus on the exponential vectors of a symmetric Fock space.

Every operator that appears in the CCR-flow constructions acts on exponential
vectors as

    O e(eta) = c * exp(<eta|w>) * e(B eta + zeta)

for a scalar c, one-particle vectors w and zeta and a one-particle linear map
B.  Such operators are closed under products and adjoints, with closed-form
rules, so nothing here truncates the Fock space.

Inner products are linear in the first argument.  One-particle vectors may be
of any type providing ``space``, ``+``, ``-``, scalar ``*``, ``inner``,
``norm``, ``probes`` and ``is_zero`` (``GridFunction`` and
``PiecewiseLinearFn`` both do).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import NoAdjointAvailable, NotScalar, SpaceMismatch


class LinearMap:
    """A linear map on one-particle vectors, given by its action and adjoint action.

    Maps compose with ``@``, add with ``+``/``-`` and scale by numbers.
    """

    def __init__(self, apply: Callable, adjoint_apply: Callable | None = None, name: str = "B",
                 is_identity: bool = False):
        self._apply = apply
        self._adjoint_apply = adjoint_apply
        self.name = name
        self.is_identity = is_identity

    def __call__(self, v):
        return self._apply(v)

    def __repr__(self):
        return f"LinearMap({self.name})"

    @property
    def has_adjoint(self) -> bool:
        return self._adjoint_apply is not None

    def adjoint(self) -> "LinearMap":
        if self._adjoint_apply is None:
            raise NoAdjointAvailable(f"no adjoint supplied for {self.name}")
        return LinearMap(self._adjoint_apply, self._apply, f"{self.name}*", self.is_identity)

    def adjoint_apply(self, v):
        if self._adjoint_apply is None:
            raise NoAdjointAvailable(f"no adjoint supplied for {self.name}")
        return self._adjoint_apply(v)

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        if self.is_identity:
            return other
        if other.is_identity:
            return self
        adj = None
        if self.has_adjoint and other.has_adjoint:
            adj = lambda v: other._adjoint_apply(self._adjoint_apply(v))  # noqa: E731
        return LinearMap(lambda v: self._apply(other._apply(v)), adj, f"{self.name}{other.name}")

    def __add__(self, other: "LinearMap") -> "LinearMap":
        adj = None
        if self.has_adjoint and other.has_adjoint:
            adj = lambda v: self._adjoint_apply(v) + other._adjoint_apply(v)  # noqa: E731
        return LinearMap(lambda v: self._apply(v) + other._apply(v), adj, f"({self.name}+{other.name})")

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "LinearMap":
        s = complex(scalar)
        adj = None
        if self.has_adjoint:
            adj = lambda v: s.conjugate() * self._adjoint_apply(v)  # noqa: E731
        return LinearMap(lambda v: s * self._apply(v), adj, f"{scalar}{self.name}")


IDENTITY = LinearMap(lambda v: v, lambda v: v, "I", is_identity=True)


@dataclass(frozen=True)
class WeylAffineOp:
    """O e(eta) = c exp(<eta|w>) e(B eta + zeta)."""

    c: complex
    w: object
    B: LinearMap
    zeta: object

    def __post_init__(self):
        if self.w.space != self.zeta.space:
            raise SpaceMismatch("w and zeta live in different spaces")

    @property
    def space(self):
        return self.w.space

    def apply(self, eta) -> tuple[complex, object]:
        """Image of e(eta) as (coefficient, argument of the exponential vector)."""
        if eta.space != self.space:
            raise SpaceMismatch("probe vector from another space")
        return self.c * cmath.exp(eta.inner(self.w)), self.B(eta) + self.zeta

    def __mul__(self, scalar) -> "WeylAffineOp":
        return WeylAffineOp(scalar * self.c, self.w, self.B, self.zeta)

    __rmul__ = __mul__

    def __matmul__(self, other: "WeylAffineOp") -> "WeylAffineOp":
        return compose(self, other)

    def act(self, state: "ExpSpanState") -> "ExpSpanState":
        terms = []
        for coef, xi in state.terms:
            c, arg = self.apply(xi)
            terms.append((coef * c, arg))
        return ExpSpanState(terms)


def identity_op(space) -> WeylAffineOp:
    z = space.zero()
    return WeylAffineOp(1.0 + 0j, z, IDENTITY, z)


def second_quantization(B: LinearMap, space) -> WeylAffineOp:
    """Gamma(B): e(eta) -> e(B eta)."""
    z = space.zero()
    return WeylAffineOp(1.0 + 0j, z, B, z)


def weyl(xi) -> WeylAffineOp:
    """W(xi) e(eta) = exp(-|xi|^2/2 - <eta|xi>) e(xi + eta)."""
    return WeylAffineOp(complex(np.exp(-0.5 * xi.norm() ** 2)), -1 * xi, IDENTITY, xi)


def compose(O1: WeylAffineOp, O2: WeylAffineOp) -> WeylAffineOp:
    """The product O1 O2."""
    if O1.space != O2.space:
        raise SpaceMismatch(f"{O1.space} vs {O2.space}")
    c = O1.c * O2.c * cmath.exp(O2.zeta.inner(O1.w))
    w = O2.w + O2.B.adjoint_apply(O1.w) if not O1.w.is_zero() else O2.w
    zeta = O1.B(O2.zeta) + O1.zeta
    return WeylAffineOp(c, w, O1.B @ O2.B, zeta)


def adjoint(O: WeylAffineOp) -> WeylAffineOp:
    """O* e(mu) = conj(c) exp(<mu|zeta>) e(B* mu + w)."""
    return WeylAffineOp(O.c.conjugate(), O.zeta, O.B.adjoint(), O.w)


def _probe_set(ops: Sequence[WeylAffineOp], probes: Iterable) -> list:
    seen = {}
    for O in ops:
        for v in (O.w, O.zeta):
            for p in v.probes():
                seen[p] = None
    for p in probes:
        seen[p] = None
        for q in p.probes():
            seen[q] = None
    return list(seen)


def tuple_distance(O1: WeylAffineOp, O2: WeylAffineOp, probes: Iterable = ()) -> float:
    """Componentwise distance between the canonical tuples of two operators.

    The scalar is compared relatively; B and B* are compared on the supports
    of w and zeta of both operators plus the supplied probe vectors.
    """
    if O1.space != O2.space:
        raise SpaceMismatch(f"{O1.space} vs {O2.space}")
    dist = abs(O1.c - O2.c) / max(1.0, abs(O1.c), abs(O2.c))
    dist = max(dist, (O1.w - O2.w).norm(), (O1.zeta - O2.zeta).norm())
    for p in _probe_set((O1, O2), probes):
        dist = max(dist, (O1.B(p) - O2.B(p)).norm())
        if O1.B.has_adjoint and O2.B.has_adjoint:
            dist = max(dist, (O1.B.adjoint_apply(p) - O2.B.adjoint_apply(p)).norm())
    return float(dist)


def scalar_part(O: WeylAffineOp, probes: Iterable = (), tol: float = 1e-10) -> complex:
    """Return c when O is c times the identity, else raise NotScalar."""
    ident = identity_op(O.space) * O.c
    dist = tuple_distance(O, ident, probes)
    if dist > tol:
        raise NotScalar(f"operator is not a multiple of the identity (distance {dist:.3g})")
    return O.c


class ExpSpanState:
    """A finite combination sum_i c_i e(xi_i) with distinct arguments."""

    def __init__(self, terms: Iterable[tuple[complex, object]]):
        merged: dict = {}
        for coef, xi in terms:
            merged[xi] = merged.get(xi, 0) + complex(coef)
        self.terms = [(c, xi) for xi, c in merged.items()]
        spaces = {xi.space for _, xi in self.terms}
        if len(spaces) > 1:
            raise SpaceMismatch("state mixes one-particle spaces")

    @classmethod
    def exponential(cls, xi, coef: complex = 1.0) -> "ExpSpanState":
        return cls([(coef, xi)])

    def __len__(self):
        return len(self.terms)


def exp_inner(s: ExpSpanState, t: ExpSpanState) -> complex:
    """sum_ij c_i conj(d_j) exp(<xi_i|eta_j>)."""
    total = 0j
    for c, xi in s.terms:
        for d, eta in t.terms:
            if xi.space != eta.space:
                raise SpaceMismatch("states from different spaces")
            total += c * d.conjugate() * cmath.exp(xi.inner(eta))
    return total


def matrix_element(O: WeylAffineOp, eta, mu) -> complex:
    """<O e(eta)|e(mu)>."""
    c, arg = O.apply(eta)
    return c * cmath.exp(arg.inner(mu))
