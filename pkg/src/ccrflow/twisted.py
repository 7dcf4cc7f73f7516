"""Twisted product systems on the half-line shift pulled back through mu.

One-particle vectors are compactly supported piecewise-linear functions on
[0, inf), which are closed under the shifts S_t and their adjoints and have
exact L^2 inner products.  For lam, mu strictly positive on the cone, the
representation is V_a = S_<mu|a>, and the twisted product of S at a and T at
b is S W(chi(a) h_b) T with chi(a) = <lam|a> and h_b = 1_(0, <mu|b>).

A unit must have defects xi_a = (alpha x + beta) 1_(0, <mu|a>): subtracting
the unit equations at neighbouring points forces xi_a' = chi(b0) on
(0, <mu|a>) in the distributional sense.  The falsifier therefore only scans
(alpha, beta), and the exact residual of that family is

    |chi(a) - alpha <mu|a>| * sqrt(<mu|b>),

coming from the interval [<mu|a>, <mu|a> + <mu|b>).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import ccr
from .ccr import DecomposableVector
from .cone import Cone
from .errors import NotInDualInterior, SpaceMismatch
from .fock import LinearMap, WeylAffineOp, compose, tuple_distance, weyl

MERGE_TOL = 1e-14
# breakpoints are snapped to this many decimals so that S_s S_t = S_{s+t} holds
# exactly; otherwise float slivers of width 1e-16 show up as L^2 errors of 1e-8
SNAP_DECIMALS = 12


@dataclass(frozen=True)
class L2HalfLine:
    """L^2[0, inf), as the space tag of piecewise-linear functions."""

    def zero(self) -> "PiecewiseLinearFn":
        return PiecewiseLinearFn(())

    def indicator(self, l: float, r: float, value: complex = 1.0) -> "PiecewiseLinearFn":
        return PiecewiseLinearFn(((l, r, value, 0.0),))

    def affine(self, l: float, r: float, alpha: complex, beta: complex) -> "PiecewiseLinearFn":
        """(alpha x + beta) 1_[l, r)."""
        return PiecewiseLinearFn(((l, r, alpha * l + beta, alpha),))


HALF_LINE = L2HalfLine()


class PiecewiseLinearFn:
    """f = sum over pieces (l, r, a, b) of (a + b (x - l)) 1_[l, r), pieces disjoint.

    The representation is canonical: pieces are sorted, zero pieces dropped and
    adjacent pieces continuing the same affine function merged.
    """

    __array_ufunc__ = None
    space = HALF_LINE

    def __init__(self, pieces):
        self.pieces = self._canonical(pieces)

    @staticmethod
    def _canonical(pieces):
        out = []
        snap = lambda v: round(float(v), SNAP_DECIMALS) + 0.0  # noqa: E731
        for l, r, a, b in sorted((snap(l), snap(r), complex(a), complex(b)) for l, r, a, b in pieces):
            if r <= l:
                continue
            if l < 0:
                raise ValueError("functions live on [0, inf)")
            if a == 0 and b == 0:
                continue
            if out:
                pl, pr, pa, pb = out[-1]
                if pr > l + MERGE_TOL:
                    raise ValueError("pieces overlap")
                if abs(pr - l) <= MERGE_TOL and abs(pb - b) <= MERGE_TOL and abs(pa + pb * (pr - pl) - a) <= MERGE_TOL:
                    out[-1] = (pl, r, pa, pb)
                    continue
            out.append((l, r, a, b))
        return tuple(out)

    def __repr__(self):
        body = ", ".join(f"[{l:g},{r:g}): {a:.4g}+{b:.4g}(x-{l:g})" for l, r, a, b in self.pieces)
        return f"PL({body})"

    def __eq__(self, other):
        return isinstance(other, PiecewiseLinearFn) and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def is_zero(self) -> bool:
        return not self.pieces

    @property
    def breakpoints(self) -> list[float]:
        return sorted({p for l, r, _, _ in self.pieces for p in (l, r)})

    def __call__(self, x: float) -> complex:
        for l, r, a, b in self.pieces:
            if l <= x < r:
                return a + b * (x - l)
        return 0j

    def _local(self, p: float, q: float) -> tuple[complex, complex]:
        """Value at p and slope on [p, q), assuming no breakpoint inside."""
        mid = 0.5 * (p + q)
        for l, r, a, b in self.pieces:
            if l <= mid < r:
                return a + b * (p - l), b
        return 0j, 0j

    def _check(self, other):
        if not isinstance(other, PiecewiseLinearFn):
            raise SpaceMismatch(f"{type(other).__name__} is not a piecewise-linear function")

    def _refine(self, other):
        pts = sorted(set(self.breakpoints) | set(other.breakpoints))
        return list(zip(pts[:-1], pts[1:]))

    def __add__(self, other):
        self._check(other)
        pieces = []
        for p, q in self._refine(other):
            a1, b1 = self._local(p, q)
            a2, b2 = other._local(p, q)
            pieces.append((p, q, a1 + a2, b1 + b2))
        return PiecewiseLinearFn(pieces)

    def __mul__(self, s):
        s = complex(s)
        return PiecewiseLinearFn((l, r, s * a, s * b) for l, r, a, b in self.pieces)

    __rmul__ = __mul__

    def __neg__(self):
        return (-1) * self

    def __sub__(self, other):
        return self + (-1) * other

    def inner(self, other) -> complex:
        """<self|other> = int f conj(g), exact."""
        self._check(other)
        total = 0j
        for p, q in self._refine(other):
            a1, b1 = self._local(p, q)
            a2, b2 = other._local(p, q)
            h = q - p
            a2c, b2c = a2.conjugate(), b2.conjugate()
            total += a1 * a2c * h + (a1 * b2c + b1 * a2c) * h**2 / 2 + b1 * b2c * h**3 / 3
        return total

    def norm(self) -> float:
        return math.sqrt(max(self.inner(self).real, 0.0))

    def shift(self, t: float) -> "PiecewiseLinearFn":
        """(S_t f)(x) = f(x - t)."""
        return PiecewiseLinearFn((l + t, r + t, a, b) for l, r, a, b in self.pieces)

    def shift_back(self, t: float) -> "PiecewiseLinearFn":
        """(S_t^* f)(x) = f(x + t) on [0, inf)."""
        out = []
        for l, r, a, b in self.pieces:
            if r <= t:
                continue
            if l >= t:
                out.append((l - t, r - t, a, b))
            else:
                out.append((0.0, r - t, a + b * (t - l), b))
        return PiecewiseLinearFn(out)

    def restrict(self, lo: float, hi: float = math.inf) -> "PiecewiseLinearFn":
        out = []
        for l, r, a, b in self.pieces:
            nl, nr = max(l, lo), min(r, hi)
            if nr > nl:
                out.append((nl, nr, a + b * (nl - l), b))
        return PiecewiseLinearFn(out)

    def probes(self) -> list["PiecewiseLinearFn"]:
        out = []
        for l, r, _, _ in self.pieces:
            out.append(PiecewiseLinearFn(((l, r, 1.0, 0.0),)))
            out.append(PiecewiseLinearFn(((l, r, 0.0, 1.0),)))
        return out


def shift_map(t: float) -> LinearMap:
    if t == 0:
        return LinearMap(lambda f: f, lambda f: f, "S0", is_identity=True)
    return LinearMap(lambda f: f.shift(t), lambda f: f.shift_back(t), f"S{t:g}")


def _positive_on(cone: Cone, v: np.ndarray) -> bool:
    return bool(np.all(cone.generators @ v > 0))


class TwistedSystem:
    """The twisted product system for (lam, mu) over a cone (default the orthant).

    Raises:
        NotInDualInterior: lam or mu is not strictly positive on the cone generators.
    """

    def __init__(self, lam, mu, cone: Cone | None = None):
        self.lam = np.atleast_1d(np.asarray(lam, dtype=float))
        self.mu = np.atleast_1d(np.asarray(mu, dtype=float))
        if self.lam.shape != self.mu.shape:
            raise ValueError("lam and mu must have the same dimension")
        self.cone = cone if cone is not None else Cone.orthant(len(self.mu))
        for name, v in (("lam", self.lam), ("mu", self.mu)):
            if not _positive_on(self.cone, v):
                raise NotInDualInterior(f"{name} = {v.tolist()} is not strictly positive on the cone")
        self.space = HALF_LINE

    def __repr__(self):
        return f"TwistedSystem(lam={self.lam.tolist()}, mu={self.mu.tolist()})"

    @property
    def dim(self) -> int:
        return len(self.mu)

    def t(self, a) -> float:
        return float(self.mu @ np.atleast_1d(np.asarray(a, dtype=float)))

    def chi(self, a) -> float:
        return float(self.lam @ np.atleast_1d(np.asarray(a, dtype=float)))

    def h(self, b) -> PiecewiseLinearFn:
        return HALF_LINE.indicator(0.0, self.t(b))

    # the representation interface used by the ccr and reconstruction modules
    def shift(self, a) -> LinearMap:
        return shift_map(self.t(a))

    def defect_projection(self, a) -> LinearMap:
        t = self.t(a)
        proj = lambda f: f.restrict(0.0, t)  # noqa: E731
        return LinearMap(proj, proj, f"Eperp{t:g}")

    def range_projection(self, a) -> LinearMap:
        t = self.t(a)
        proj = lambda f: f.restrict(t)  # noqa: E731
        return LinearMap(proj, proj, f"E{t:g}")

    def random_defect(self, a, rng, pieces: int = 3) -> PiecewiseLinearFn:
        t = self.t(a)
        if t == 0:
            return HALF_LINE.zero()
        cuts = np.linspace(0.0, t, pieces + 1)
        vals = rng.normal(size=(pieces, 2)) + 1j * rng.normal(size=(pieces, 2))
        return PiecewiseLinearFn((cuts[i], cuts[i + 1], vals[i, 0], vals[i, 1]) for i in range(pieces))

    def twisted_product(self, a, S: WeylAffineOp, b, T: WeylAffineOp) -> WeylAffineOp:
        """S.T = S W(chi(a) h_b) T."""
        if S.space != self.space or T.space != self.space:
            raise SpaceMismatch("operators are not over L^2[0, inf)")
        return compose(S, compose(weyl(self.chi(a) * self.h(b)), T))

    def decomposable_product(self, u: DecomposableVector, v: DecomposableVector) -> DecomposableVector:
        """u.v for decomposables, read back as a decomposable at a + b."""
        op = self.twisted_product(u.point, ccr.as_operator(self, u), v.point, ccr.as_operator(self, v))
        return ccr.read_decomposable(self, u.point + v.point, op, [u.defect, v.defect])


def associativity_residual(sys: TwistedSystem, triples: Sequence, rng=None) -> float:
    """max tuple distance between (S.T).R and S.(T.R) for random decomposables."""
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 0.0
    for a, b, c in triples:
        a, b, c = (np.atleast_1d(np.asarray(p, dtype=float)) for p in (a, b, c))
        ops = [ccr.exp_op(sys, p, sys.random_defect(p, rng)) * complex(*rng.normal(size=2)) for p in (a, b, c)]
        S, T, R = ops
        left = sys.twisted_product(a + b, sys.twisted_product(a, S, b, T), c, R)
        right = sys.twisted_product(a, S, b + c, sys.twisted_product(b, T, c, R))
        probes = [S.zeta, T.zeta, R.zeta, sys.h(a + b + c)]
        worst = max(worst, tuple_distance(left, right, probes))
    return worst


def closure_residual(sys: TwistedSystem, pairs: Sequence, rng=None) -> float:
    """Worst tuple distance of u.v from the decomposable read back at a + b; raises if not decomposable."""
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 0.0
    for a, b in pairs:
        u = ccr.decomposable(sys, a, sys.random_defect(a, rng))
        v = ccr.decomposable(sys, b, sys.random_defect(b, rng))
        w = sys.decomposable_product(u, v)
        op = sys.twisted_product(u.point, ccr.as_operator(sys, u), v.point, ccr.as_operator(sys, v))
        worst = max(worst, tuple_distance(op, ccr.as_operator(sys, w), [u.defect, v.defect]))
    return worst


def candidate_defect(sys: TwistedSystem, alpha: float, beta: float, a) -> PiecewiseLinearFn:
    return HALF_LINE.affine(0.0, sys.t(a), alpha, beta)


def unit_residual(sys: TwistedSystem, alpha: float, beta: float, pairs: Sequence) -> float:
    """max |xi_a + V_a xi_b + chi(a) V_a h_b - xi_{a+b}| for xi_a = (alpha x + beta) 1_(0, <mu|a>)."""
    worst = 0.0
    for a, b in pairs:
        a = np.atleast_1d(np.asarray(a, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        V = sys.shift(a)
        r = (candidate_defect(sys, alpha, beta, a) + V(candidate_defect(sys, alpha, beta, b))
             + sys.chi(a) * V(sys.h(b)) - candidate_defect(sys, alpha, beta, a + b))
        worst = max(worst, r.norm())
    return worst


class Scan(NamedTuple):
    min_residual: float
    alpha: float
    beta: float


def unit_scan(sys: TwistedSystem, pairs: Sequence, alphas: Sequence, betas: Sequence) -> Scan:
    best = Scan(math.inf, math.nan, math.nan)
    for al, be in itertools.product(alphas, betas):
        r = unit_residual(sys, al, be, pairs)
        if r < best.min_residual:
            best = Scan(r, float(al), float(be))
    return best


def residual_lower_bound(sys: TwistedSystem, pairs: Sequence, alpha_range: tuple[float, float] | None = None) -> float:
    """Exact min over alpha of max_i |chi(a_i) - alpha <mu|a_i>| sqrt(<mu|b_i>).

    The objective is a convex maximum of absolute affine functions, so the
    minimum sits at a kink: a zero of one term or a crossing of two.
    """
    terms = []
    for a, b in pairs:
        w = math.sqrt(sys.t(b))
        terms.append((w * sys.chi(a), w * sys.t(a)))  # w (c - alpha d)
    cands = set()
    for c, d in terms:
        if d:
            cands.add(c / d)
    for (c1, d1), (c2, d2) in itertools.combinations(terms, 2):
        for s in (1, -1):
            den = d1 - s * d2
            if den:
                cands.add((c1 - s * c2) / den)
    if alpha_range is not None:
        lo, hi = alpha_range
        cands = {min(max(x, lo), hi) for x in cands} | {lo, hi}
    if not cands:
        cands = {0.0}
    return min(max(abs(c - x * d) for c, d in terms) for x in cands)


class UnitExistence(NamedTuple):
    exists: bool
    c: float | None


def unit_exists(lam, mu, cone: Cone | None = None, rel_tol: float = 1e-12) -> UnitExistence:
    """True iff lam = c mu for some c > 0."""
    sys = TwistedSystem(lam, mu, cone)
    c = float(sys.lam @ sys.mu / (sys.mu @ sys.mu))
    off = np.linalg.norm(sys.lam - c * sys.mu)
    if off <= rel_tol * np.linalg.norm(sys.lam) and c > 0:
        return UnitExistence(True, c)
    return UnitExistence(False, None)


class UnitFamily:
    """The unit a -> s(t) T^(a)_{e((c x + beta) 1_(0, t))}, t = <mu|a>, when lam = c mu.

    s(t) = exp(-c^2 t^3 / 6 - c beta t^2 / 2) absorbs the scalar produced by the
    Weyl factor of the twisted product.
    """

    def __init__(self, sys: TwistedSystem, beta: float = 0.0):
        ex = unit_exists(sys.lam, sys.mu, sys.cone)
        if not ex.exists:
            raise ValueError("no unit: lam is not a positive multiple of mu")
        self.sys = sys
        self.c = ex.c
        self.beta = float(beta)

    def scalar(self, a) -> float:
        t = self.sys.t(a)
        return math.exp(-self.c**2 * t**3 / 6 - self.c * self.beta * t**2 / 2)

    def __call__(self, a) -> WeylAffineOp:
        xi = candidate_defect(self.sys, self.c, self.beta, a)
        return ccr.exp_op(self.sys, a, xi) * self.scalar(a)

    def residual(self, pairs: Sequence) -> float:
        worst = 0.0
        for a, b in pairs:
            a = np.atleast_1d(np.asarray(a, dtype=float))
            b = np.atleast_1d(np.asarray(b, dtype=float))
            prod = self.sys.twisted_product(a, self(a), b, self(b))
            worst = max(worst, tuple_distance(prod, self(a + b), [self.sys.h(a + b)]))
        return worst


def twisted_invariant(mu1, mu2, rel_tol: float = 1e-12) -> bool:
    """True iff mu1 and mu2 are proportional (their kernel hyperplanes agree)."""
    mu1 = np.atleast_1d(np.asarray(mu1, dtype=float))
    mu2 = np.atleast_1d(np.asarray(mu2, dtype=float))
    if mu1.shape != mu2.shape:
        raise ValueError("dimension mismatch")
    c = float(mu1 @ mu2 / (mu2 @ mu2))
    return bool(np.linalg.norm(mu1 - c * mu2) <= rel_tol * np.linalg.norm(mu1))
