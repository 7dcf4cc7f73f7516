"""Pointed, spanning polyhedral cones in R^d.

A cone is held in both of its descriptions: the extreme rays (generators) and
the inward facet normals.  Conversion is done by exhaustive enumeration of
(d-1)-subsets, which is exact enough at the dimensions supported here (d <= 4).

Example
-------
>>> P = Cone([[1, 0], [1, 1]])
>>> P.dual().generators.tolist()
[[0.0, 1.0], [1.0, -1.0]]
"""

from __future__ import annotations

import itertools
import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    DimensionTooLarge,
    EmptyResult,
    NotInCone,
    NotInterior,
    NotPointed,
    NotSpanning,
)

MAX_DIM = 4
TIGHT_TOL = 1e-10
BOUNDARY_TOL = 1e-9


def _is_integral(arr: np.ndarray) -> bool:
    return bool(np.all(np.abs(arr - np.round(arr)) < 1e-12))


def _primitive(v: np.ndarray, integral: bool) -> np.ndarray:
    if integral:
        iv = np.round(v).astype(np.int64)
        g = 0
        for c in iv:
            g = math.gcd(g, int(abs(c)))
        return (iv // max(g, 1)).astype(float)
    return v / np.max(np.abs(v))


def _orthogonal_complement_ray(rows: np.ndarray, d: int) -> np.ndarray | None:
    """Generalised cross product of d-1 vectors in R^d (None if dependent)."""
    if d == 1:
        return np.ones(1)
    out = np.empty(d)
    for j in range(d):
        minor = np.delete(rows, j, axis=1)
        out[j] = (-1) ** j * np.linalg.det(minor)
    if np.max(np.abs(out)) < 1e-12 * max(1.0, np.max(np.abs(rows)) ** (d - 1)):
        return None
    return out


def _extreme_directions(vectors: np.ndarray, d: int) -> np.ndarray:
    """Extreme rays of {x : <x|v> >= 0 for all rows v of `vectors`}.

    The rows are assumed to span R^d, which makes the cone pointed.
    """
    integral = _is_integral(vectors)
    scale = np.linalg.norm(vectors, axis=1)
    found: list[np.ndarray] = []
    for idx in itertools.combinations(range(len(vectors)), d - 1):
        sub = vectors[list(idx)] if idx else np.zeros((0, d))
        ray = _orthogonal_complement_ray(sub, d)
        if ray is None:
            continue
        vals = vectors @ ray / (scale * np.linalg.norm(ray))
        if np.all(vals >= -TIGHT_TOL):
            pass
        elif np.all(vals <= TIGHT_TOL):
            ray = -ray
        else:
            continue
        ray = _primitive(ray, integral)
        if not any(np.allclose(ray / np.linalg.norm(ray), r / np.linalg.norm(r), atol=1e-10) for r in found):
            found.append(ray)
    return np.array(found, dtype=float).reshape(-1, d)


def _canonical_rays(rays: np.ndarray) -> np.ndarray:
    unit = rays / np.linalg.norm(rays, axis=1, keepdims=True)
    order = np.lexsort(np.round(unit, 9).T[::-1])
    return unit[order]


class Order(NamedTuple):
    leq: bool
    lt: bool


class Cone:
    """A pointed, spanning polyhedral cone.

    Args:
        generators: vectors whose nonnegative combinations form the cone.
        normals: inward normals n_i with P = {x : <x|n_i> >= 0}.

    Exactly one of the two descriptions must be given; the other one is
    computed.  Non-extreme generators and redundant normals are discarded.
    """

    def __init__(self, generators=None, normals=None):
        if (generators is None) == (normals is None):
            raise ValueError("give exactly one of generators or normals")
        given = np.atleast_2d(np.asarray(generators if normals is None else normals, dtype=float))
        d = given.shape[1]
        if d > MAX_DIM:
            raise DimensionTooLarge(f"d={d} exceeds the supported maximum {MAX_DIM}")
        self.dim = d
        if normals is None:
            if np.linalg.matrix_rank(given) < d:
                raise NotSpanning("generators do not span R^d")
            facets = _extreme_directions(given, d)
            if len(facets) == 0 or np.linalg.matrix_rank(facets) < d:
                raise NotPointed("cone contains a line")
            rays = self._prune(given, facets)
        else:
            if np.linalg.matrix_rank(given) < d:
                raise NotPointed("normals do not span R^d, the cone contains a line")
            rays = _extreme_directions(given, d)
            if len(rays) == 0 or np.linalg.matrix_rank(rays) < d:
                raise NotSpanning("halfspaces cut out a cone with empty interior")
            facets = self._prune(given, rays)
        self.generators = rays
        self.normals = facets
        self._unit_normals = facets / np.linalg.norm(facets, axis=1, keepdims=True)

    @staticmethod
    def _prune(candidates: np.ndarray, dual_rays: np.ndarray) -> np.ndarray:
        """Keep candidates that are extreme: tight on d-1 independent dual rays."""
        d = candidates.shape[1]
        kept: list[np.ndarray] = []
        unit_dual = dual_rays / np.linalg.norm(dual_rays, axis=1, keepdims=True)
        for c in candidates:
            vals = unit_dual @ (c / np.linalg.norm(c))
            tight = unit_dual[np.abs(vals) <= TIGHT_TOL]
            rank = np.linalg.matrix_rank(tight) if len(tight) else 0
            if rank != d - 1 and d > 1:
                continue
            if not any(np.allclose(c / np.linalg.norm(c), k / np.linalg.norm(k), atol=1e-10) for k in kept):
                kept.append(c)
        return np.array(kept, dtype=float).reshape(-1, d)

    def __repr__(self):
        return f"Cone(generators={self.generators.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, Cone) or other.dim != self.dim:
            return NotImplemented
        a, b = _canonical_rays(self.generators), _canonical_rays(other.generators)
        return a.shape == b.shape and bool(np.allclose(a, b, atol=1e-9))

    __hash__ = None

    @classmethod
    def orthant(cls, d: int) -> "Cone":
        return cls(np.eye(d))

    # -- membership ---------------------------------------------------------

    def halfspace_values(self, x) -> np.ndarray:
        return self._unit_normals @ np.atleast_1d(np.asarray(x, dtype=float))

    def contains(self, x, tol: float = BOUNDARY_TOL) -> bool:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return bool(np.all(self.halfspace_values(x) >= -tol * (1 + np.linalg.norm(x))))

    def is_interior(self, x, tol: float = BOUNDARY_TOL) -> bool:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return bool(np.all(self.halfspace_values(x) > tol * (1 + np.linalg.norm(x))))

    def is_boundary(self, x, tol: float = BOUNDARY_TOL) -> bool:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        scaled = tol * (1 + np.linalg.norm(x))
        vals = self.halfspace_values(x)
        return bool(np.all(vals >= -scaled) and np.min(vals) <= scaled)

    # -- duality ------------------------------------------------------------

    def dual(self) -> "Cone":
        """The dual cone {y : <x|y> >= 0 for all x in P}, in generator form."""
        return Cone(self.normals)

    def dual_values(self, x) -> np.ndarray:
        """Pairings of x against the generators of the dual cone."""
        return self.normals @ np.atleast_1d(np.asarray(x, dtype=float))


def same_cone(p: Cone, q: Cone) -> bool:
    """Equality of generator sets up to positive rescaling and permutation."""
    return p == q


def order_relation(cone: Cone, x, y, tol: float = BOUNDARY_TOL) -> Order:
    """Compare x and y in the order induced by the cone."""
    diff = np.atleast_1d(np.asarray(y, dtype=float)) - np.atleast_1d(np.asarray(x, dtype=float))
    return Order(cone.contains(diff, tol), cone.is_interior(diff, tol))


def archimedean_bound(cone: Cone, x, a) -> int:
    """Smallest positive integer n with x < n*a, for interior a."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if not cone.is_interior(a):
        raise NotInterior(f"{a.tolist()} is not interior")
    ratios = cone.halfspace_values(x) / cone.halfspace_values(a)
    n = max(1, int(math.floor(np.max(ratios))) + 1)
    # tolerance in the strict test can push the answer by one either way
    while n > 1 and order_relation(cone, x, (n - 1) * a).lt:
        n -= 1
    while not order_relation(cone, x, n * a).lt:
        n += 1
    return n


def decreasing_subsequence(cone: Cone, seq: Sequence, small: float = 1.0) -> list[int]:
    """Indices of a chain z_{k1} >= z_{k2} >= ... extracted from `seq`.

    The chain is built greedily, taking at each step the earliest later point
    whose pairing with every dual generator does not increase; by duality this
    is the cone order.  Indices are 0-based.

    Args:
        small: the last element must have norm below this (a crude check that
            the list is heading to 0).
    """
    pts = [np.atleast_1d(np.asarray(z, dtype=float)) for z in seq]
    for i, z in enumerate(pts):
        if not cone.contains(z):
            raise NotInCone(f"element {i} = {z.tolist()} is not in the cone")
    if pts and np.linalg.norm(pts[-1]) > small:
        raise ValueError("sequence does not appear to tend to 0")
    pairings = [cone.dual_values(z) for z in pts]
    scale = max((np.max(np.abs(p)) for p in pairings), default=1.0)
    chain = [0] if pts else []
    for j in range(1, len(pts)):
        if np.all(pairings[j] <= pairings[chain[-1]] + TIGHT_TOL * scale):
            chain.append(j)
    if len(chain) < 2:
        raise EmptyResult("no decreasing chain of length >= 2")
    return chain


def ray_decomposition(cone: Cone, x, a) -> tuple[np.ndarray, float]:
    """Write interior x as z + t*a with z on the boundary and t maximal."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    a = np.atleast_1d(np.asarray(a, dtype=float))
    for name, v in (("x", x), ("a", a)):
        if not cone.is_interior(v):
            raise NotInterior(f"{name}={v.tolist()} is not interior")
    t = float(np.min(cone.halfspace_values(x) / cone.halfspace_values(a)))
    return x - t * a, t


class Embedding(NamedTuple):
    valid: bool
    cone: Cone | None
    vertices: np.ndarray
    offending: int | None


def embed_polyhedral(cone: Cone, a, k: int, basis) -> Embedding:
    """Polyhedral cone spanned by a + v_i/k, i = 1..d+1, with v_{d+1} = -sum v_i.

    `basis` may hold d vectors (the last one is appended) or all d+1.
    The result is valid when every a + v_i/k is interior to `cone`.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    v = np.atleast_2d(np.atleast_1d(np.asarray(basis, dtype=float)))
    d = cone.dim
    if len(v) == d:
        v = np.vstack([v, -v.sum(axis=0)])
    if len(v) != d + 1 or not np.allclose(v[-1], -v[:-1].sum(axis=0)):
        raise ValueError("basis must be d vectors, or d+1 with v_{d+1} = -sum v_i")
    if np.linalg.matrix_rank(v[:-1]) < d:
        raise NotSpanning("basis does not span R^d")
    if not cone.is_interior(a):
        raise NotInterior(f"{a.tolist()} is not interior")
    verts = a + v / k
    for i, w in enumerate(verts):
        if not cone.is_interior(w):
            return Embedding(False, None, verts, i)
    return Embedding(True, Cone(verts), verts, None)


def lattice_generators(cone: Cone) -> np.ndarray:
    """Hilbert basis of Z^d intersected with a rational cone.

    Brute force over the lattice points of the zonotope spanned by the
    primitive extreme rays, keeping the irreducible ones.
    """
    rays = cone.generators
    if not _is_integral(rays):
        rays = np.array([_rationalize(r) for r in rays])
    rays = np.array([_primitive(r, True) for r in rays])
    lo = np.minimum(rays, 0).sum(axis=0).astype(int)
    hi = np.maximum(rays, 0).sum(axis=0).astype(int)
    pts = [np.array(p, dtype=float) for p in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi)))]
    pts = [p for p in pts if np.any(p) and cone.contains(p)]
    keys = {tuple(p.astype(int)) for p in pts}
    basis = []
    for p in pts:
        reducible = any(
            tuple((p - q).astype(int)) in keys for q in pts if not np.array_equal(p, q)
        )
        if not reducible:
            basis.append(p)
    basis.sort(key=lambda p: (np.abs(p).sum(), tuple(-p)))
    return np.array(basis)


def _rationalize(v: np.ndarray, max_den: int = 64) -> np.ndarray:
    from fractions import Fraction

    fr = [Fraction(float(c)).limit_denominator(max_den) for c in v]
    den = 1
    for f in fr:
        den = den * f.denominator // math.gcd(den, f.denominator)
    return np.array([float(f * den) for f in fr])
