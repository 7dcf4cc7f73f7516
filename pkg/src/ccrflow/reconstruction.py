"""Recovering the isometric representation from the e-logarithm.

Elements of H_a are formal zero-sum combinations sum_i c_i [u_i] of sampled
decomposables at a, with the semi-inner product

    < sum c_i [u_i] | sum d_j [u_j] > = sum_ij c_i conj(d_j) L(a, u_i, u_j).

Spaces at different base points are compared only inside a common space at
a larger point; there is no stored inductive limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import ccr
from .ccr import DecomposableVector
from .elog import ReferenceSection, elog_kernel
from .isometric import Window
from .errors import BasePointMismatch, DegenerateRepresentation, KernelNotPSD

CLIP_TOL = 1e-10
PSD_TOL = 1e-8


def _zero_sum_basis(n: int) -> np.ndarray:
    """Orthonormal basis (columns) of the zero-sum vectors in C^n."""
    if n < 2:
        return np.zeros((n, 0))
    M = np.eye(n) - 1.0 / n
    w, U = np.linalg.eigh(M)
    return U[:, w > 0.5]


def psd_factor(G: np.ndarray) -> np.ndarray:
    """Rows C with C C^H = G, after clipping float-noise eigenvalues.

    Raises:
        KernelNotPSD: if an eigenvalue is below -PSD_TOL times the scale.
    """
    G = 0.5 * (G + G.conj().T)
    if G.size == 0:
        return np.zeros((G.shape[0], 0))
    w, U = np.linalg.eigh(G)
    scale = max(1.0, float(np.abs(w).max()))
    if w.min() < -PSD_TOL * scale:
        raise KernelNotPSD(f"min eigenvalue {w.min():.3g} (scale {scale:.3g})")
    # anything this small is numerical noise around the null space
    w = np.where(w < CLIP_TOL * scale, 0.0, w)
    return U * np.sqrt(w)


@dataclass
class ReconstructionSpace:
    """Sampled H_a: the samples, their e-log kernel and difference coordinates.

    Attributes:
        pairs: index pairs (i, j) naming the formal elements [u_i] - [u_j].
        gram: Gram matrix of those elements.
        coords: rows of a PSD factor of ``gram``.
        anchor: rows of a PSD factor for [u_i] - [u_0], i >= 1; norms of
            general elements are read from these coordinates, which avoids
            the square-root loss of evaluating the quadratic form.
    """

    base: tuple
    samples: list[DecomposableVector]
    kernel: np.ndarray
    pairs: list[tuple[int, int]]
    gram: np.ndarray
    coords: np.ndarray
    anchor: np.ndarray
    reference: ReferenceSection | None = field(default=None, repr=False)

    def difference(self, i: int, j: int) -> np.ndarray:
        c = np.zeros(len(self.samples), dtype=complex)
        c[i] += 1
        c[j] -= 1
        return c

    def inner(self, c, d) -> complex:
        """Semi-inner product of two zero-sum coefficient vectors."""
        c, d = np.asarray(c), np.asarray(d)
        for v in (c, d):
            if abs(v.sum()) > 1e-12 * max(1.0, np.abs(v).sum()):
                raise ValueError("coefficients must sum to zero")
        return complex(c @ self.kernel @ d.conj())

    def coordinates(self, c) -> np.ndarray:
        c = np.asarray(c)
        if abs(c.sum()) > 1e-12 * max(1.0, np.abs(c).sum()):
            raise ValueError("coefficients must sum to zero")
        return c[1:] @ self.anchor

    def norm(self, c) -> float:
        return float(np.linalg.norm(self.coordinates(c)))

    def coordinate_residual(self) -> float:
        if not self.pairs:
            return 0.0
        return float(np.abs(self.coords @ self.coords.conj().T - self.gram).max())


def build_space(a, samples: Sequence[DecomposableVector], pairs: Sequence[tuple[int, int]] | None = None,
                reference: ReferenceSection | None = None) -> ReconstructionSpace:
    """Assemble the sampled H_a.

    Args:
        pairs: formal differences to embed; defaults to [u_i] - [u_0] for all i.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one sample")
    key = ccr._key(a)
    for u in samples:
        if u.x != key:
            raise BasePointMismatch(f"sample at {u.x}, expected {key}")
    K = elog_kernel(a, samples, reference).matrix
    if pairs is None:
        pairs = [(i, 0) for i in range(len(samples))]
    pairs = [tuple(p) for p in pairs]
    P = np.zeros((len(pairs), len(samples)), dtype=complex)
    for r, (i, j) in enumerate(pairs):
        P[r, i] += 1
        P[r, j] -= 1
    G = P @ K @ P.conj().T
    coords = psd_factor(G) if pairs else np.zeros((0, 0))
    n = len(samples)
    A = K[1:, 1:] - K[1:, :1] - K[:1, 1:] + K[0, 0]
    anchor = psd_factor(A) if n > 1 else np.zeros((0, 0))
    return ReconstructionSpace(key, samples, K, pairs, G, coords, anchor, reference)


def one_particle_residuals(rep, b, defects: Sequence) -> tuple[float, float]:
    """Inner-product and linearity residuals of U: xi -> [T_e(xi)] - [T_e(0)].

    The linearity check uses the sums xi_i + xi_j of consecutive defects.
    """
    defects = list(defects)
    zero = rep.space.zero()
    sums = [defects[i] + defects[i + 1] for i in range(len(defects) - 1)]
    samples = [ccr.decomposable(rep, b, zero)] + [ccr.decomposable(rep, b, f) for f in defects + sums]
    space = build_space(b, samples)
    m = len(defects)
    gram = np.array([[f.inner(g) for g in defects] for f in defects])
    U = [space.difference(i + 1, 0) for i in range(m)]
    got = np.array([[space.inner(c, d) for d in U] for c in U])
    inner_res = float(np.abs(got - gram).max()) if m else 0.0
    lin_res = 0.0
    for i in range(len(sums)):
        c = space.difference(1 + m + i, 0) - U[i] - U[i + 1]
        lin_res = max(lin_res, space.norm(c))
    return inner_res, lin_res


class RecoveredIsometry:
    """Left multiplication by a decomposable f at a: [u] - [v] -> [f u] - [f v]."""

    def __init__(self, rep, f: DecomposableVector, reference: ReferenceSection | None = None):
        self.rep = rep
        self.f = f
        self.reference = reference

    def image(self, u: DecomposableVector) -> DecomposableVector:
        return ccr.operator_product(self.rep, self.f, u)

    def image_space(self, space: ReconstructionSpace) -> ReconstructionSpace:
        """The sampled space at a + b spanned by f u_i; coefficient vectors carry over."""
        target = np.add(self.f.point, np.array(space.base))
        return build_space(target, [self.image(u) for u in space.samples], space.pairs, self.reference)

    def isometry_residual(self, space: ReconstructionSpace) -> float:
        img = self.image_space(space)
        if not space.pairs:
            return 0.0
        return float(np.abs(img.gram - space.gram).max())


def recovered_isometry(rep, f: DecomposableVector, reference: ReferenceSection | None = None) -> RecoveredIsometry:
    return RecoveredIsometry(rep, f, reference)


def f_independence(rep, space: ReconstructionSpace, f1: DecomposableVector, f2: DecomposableVector,
                   reference: ReferenceSection | None = None) -> float:
    """max over the space's pairs of |V_f1 ([u]-[v]) - V_f2 ([u]-[v])| in a joint space at a+b."""
    if f1.x != f2.x:
        raise BasePointMismatch("both choices of f must sit at the same point")
    n = len(space.samples)
    joint = [ccr.operator_product(rep, f, u) for f in (f1, f2) for u in space.samples]
    J = build_space(np.add(f1.point, space.base), joint, [], reference)
    worst = 0.0
    for i, j in space.pairs:
        c = np.zeros(2 * n, dtype=complex)
        c[i] += 1
        c[j] -= 1
        c[n + i] -= 1
        c[n + j] += 1
        worst = max(worst, J.norm(c))
    return worst


class InjectivityReport(NamedTuple):
    inner_residual: float
    linearity_residual: float
    intertwining_residual: float
    shifts: list
    ok: bool

    def as_dict(self) -> dict:
        return {
            "inner_residual": self.inner_residual,
            "linearity_residual": self.linearity_residual,
            "intertwining_residual": self.intertwining_residual,
            "shifts": [list(map(float, np.atleast_1d(a))) for a in self.shifts],
            "ok": self.ok,
        }


def defect_keys(rep, a) -> list:
    """Grid keys in the defect space of V_a, within the box spanned by the module offsets and a."""
    idx = rep.lattice_index(a)
    offs = [rep.space.index_of(o) for o in rep.module.offsets] or [(0,) * rep.dim]
    lo = tuple(min(o[i] for o in offs) for i in range(rep.dim))
    hi = tuple(max(o[i] for o in offs) + idx[i] for i in range(rep.dim))
    window = Window(lo, hi)
    E = rep.defect_projection(a)
    return [k for k in rep.window_keys(window) if not E(rep.space.delta(*k)).is_zero()]


def _default_f(rep, a, rng) -> DecomposableVector:
    """A decomposable at a with a nonzero random defect in Ker V_a^*."""
    if hasattr(rep, "random_defect"):
        return ccr.decomposable(rep, a, rep.random_defect(a, rng))
    keys = defect_keys(rep, a)[:4]
    if not keys:
        return ccr.unit_section(rep, a)
    vals = rng.normal(size=len(keys)) + 1j * rng.normal(size=len(keys))
    sigma = rep.space.from_values(dict(zip(keys, vals)))
    return ccr.decomposable(rep, a, sigma)


def verify_injectivity(rep, b, defects: Sequence, shifts: Sequence, rng=None, tol: float = 1e-9,
                       f: DecomposableVector | None = None) -> InjectivityReport:
    """Check that U: xi -> [T_e(xi)] - [T_e(0)] is isometric and U V_a = V~_a U.

    Args:
        b: base point; every defect must lie in Ker V_b^*.
        shifts: the points a at which the intertwining is tested.
        f: decomposable used for V~_a; a random one with nonzero defect by default.

    Representations with a ``decomposable_product`` method (twisted systems)
    use it for V~_a; otherwise the tuples are composed.
    """
    if getattr(rep.space, "multiplicity", 1) == 0:
        raise DegenerateRepresentation("the one-particle space is zero")
    defects = [g for g in defects if not g.is_zero()]
    if not defects:
        raise DegenerateRepresentation("no nonzero defect vectors to sample")
    rng = np.random.default_rng(0) if rng is None else rng
    # twisted systems bring their own product; CCR flows compose tuples
    multiply = getattr(rep, "decomposable_product", None) or (lambda u, v: ccr.operator_product(rep, u, v))
    inner_res, lin_res = one_particle_residuals(rep, b, defects)
    zero = rep.space.zero()
    inter = 0.0
    for a in shifts:
        a = np.atleast_1d(np.asarray(a, dtype=float))
        fa = f if f is not None and f.x == ccr._key(a) else _default_f(rep, a, rng)
        base = [ccr.decomposable(rep, b, zero)] + [ccr.decomposable(rep, b, g) for g in defects]
        moved = [multiply(fa, u) for u in base]
        # U V_a xi, at a + b: V_a xi is in Ker V_{a+b}^*
        direct = [ccr.decomposable(rep, a + b, rep.shift(a)(g)) for g in [zero] + defects]
        J = build_space(a + np.atleast_1d(b), moved + direct, [])
        n = len(base)
        for i in range(1, n):
            c = np.zeros(2 * n, dtype=complex)
            c[i], c[0], c[n + i], c[n] = 1, -1, -1, 1
            inter = max(inter, J.norm(c))
    ok = max(inner_res, lin_res, inter) <= tol
    return InjectivityReport(inner_res, lin_res, inter, list(shifts), bool(ok))


def kernel_match(rep, x, defects: Sequence) -> float:
    """max |ex_inner(T_xi, T_eta) - exp<xi|eta>| over sampled pairs."""
    ops = [ccr.exp_op(rep, x, g) for g in defects]
    worst = 0.0
    for S, g in zip(ops, defects):
        for T, h in zip(ops, defects):
            worst = max(worst, abs(ccr.ex_inner(S, T) - np.exp(g.inner(h))))
    return worst


def induced_map_residual(rep, theta: Callable[[DecomposableVector], DecomposableVector], a, b,
                         defects: Sequence) -> float:
    """|V~_a theta~ - theta~ V~_a| on [T_e(eta)] - [T_e(0)], eta in the sample, at a + b.

    ``theta`` maps a decomposable at x to one at x (an endomorphism of the product system).
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    zero = rep.space.zero()
    ea = ccr.unit_section(rep, a)
    us = [ccr.decomposable(rep, b, g) for g in [zero, *defects]]
    left = [ccr.operator_product(rep, ea, theta(u)) for u in us]
    right = [theta(ccr.operator_product(rep, ea, u)) for u in us]
    J = build_space(a + b, left + right, [])
    n = len(us)
    worst = 0.0
    for i in range(1, n):
        c = np.zeros(2 * n, dtype=complex)
        c[i], c[0], c[n + i], c[n] = 1, -1, -1, 1
        worst = max(worst, J.norm(c))
    return worst


def gram_domination(theta: Callable[[DecomposableVector], DecomposableVector], a,
                    samples: Sequence[DecomposableVector]) -> float:
    """Largest eigenvalue of K_theta - K compressed to zero-sum coefficient vectors.

    A contraction induced by theta makes this <= 0 up to rounding.
    """
    K = elog_kernel(a, samples).matrix
    Kt = elog_kernel(a, [theta(u) for u in samples]).matrix
    Z = _zero_sum_basis(len(samples))
    if Z.shape[1] == 0:
        return 0.0
    D = Z.T @ (Kt - K) @ Z
    return float(np.linalg.eigvalsh(0.5 * (D + D.conj().T)).max())
