"""Isometric representations of a cone coming from P-modules, on a lattice.

A P-module is A = union_i (a_i + P).  The representation acts on finitely
supported functions on the lattice points of A (with k multiplicity slots) by

    (V_x f)(y) = f(y - x)  if y - x in A,  else 0,

which is an exact isometry on such functions: nothing is truncated.  Finite
windows only enter the commutant, intertwiner and purity computations.

Public functions take lattice points in ambient coordinates (multiples of
eps); windows are boxes of lattice indices.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .cone import Cone, lattice_generators
from .errors import (
    DegenerateRepresentation,
    ModuleError,
    NotLatticePoint,
    WindowTooSmall,
)
from .fock import LinearMap
from .grid import GridFunction, GridSpace, Key


class Window(NamedTuple):
    """Inclusive box lo <= index <= hi of lattice indices."""

    lo: tuple[int, ...]
    hi: tuple[int, ...]

    @classmethod
    def square(cls, n: int, d: int, lo: int = 0) -> "Window":
        return cls((lo,) * d, (lo + n - 1,) * d)

    def indices(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(l, h + 1) for l, h in zip(self.lo, self.hi))))

    def __contains__(self, idx) -> bool:
        return all(l <= i <= h for i, l, h in zip(idx, self.lo, self.hi))


class PModule:
    """A = union of a_i + P on the eps-lattice, with multiplicity k."""

    def __init__(self, cone: Cone, offsets, eps: float = 1.0, multiplicity: int = 1, *, _whole=False):
        self.cone = cone
        self.offsets = tuple(tuple(float(c) for c in np.atleast_1d(a)) for a in offsets)
        self.eps = float(eps)
        self.multiplicity = int(multiplicity)
        self.whole_space = _whole
        if _whole:
            return
        if not self.offsets:
            raise ModuleError("a P-module must be nonempty")
        if multiplicity < 0:
            raise ModuleError("multiplicity must be >= 0")
        space = GridSpace(cone.dim, eps, multiplicity)
        for a in self.offsets:
            if len(a) != cone.dim:
                raise ModuleError(f"offset {a} has the wrong dimension")
            try:
                space.index_of(a)
            except ValueError as exc:
                raise ModuleError(str(exc)) from None

    def __repr__(self):
        return f"PModule(offsets={self.offsets}, eps={self.eps}, k={self.multiplicity})"

    @classmethod
    def whole(cls, cone: Cone, eps: float = 1.0, multiplicity: int = 1) -> "PModule":
        """The invariant set R^d itself; not a P-module, used to exhibit non-purity."""
        return cls(cone, (), eps, multiplicity, _whole=True)

    def contains_index(self, idx) -> bool:
        if self.whole_space:
            return True
        y = self.eps * np.atleast_1d(np.asarray(idx, dtype=float))
        return any(self.cone.contains(y - np.asarray(a)) for a in self.offsets)


class ModuleRep:
    """The isometric representation V^(A,k) of the cone on l^2(A cap lattice, C^k)."""

    def __init__(self, module: PModule):
        self.module = module
        self.cone = module.cone
        self.space = GridSpace(module.cone.dim, module.eps, module.multiplicity)
        self.generators = lattice_generators(module.cone).astype(int)
        self._in_a: dict[tuple[int, ...], bool] = {}

    @classmethod
    def half_line(cls, eps: float = 1.0, multiplicity: int = 1) -> "ModuleRep":
        return cls(PModule(Cone([[1.0]]), [[0.0]], eps, multiplicity))

    @classmethod
    def quarter_plane(cls, eps: float = 1.0, multiplicity: int = 1) -> "ModuleRep":
        return cls(PModule(Cone.orthant(2), [[0.0, 0.0]], eps, multiplicity))

    def __repr__(self):
        m = self.module
        return f"ModuleRep(offsets={m.offsets}, eps={m.eps}, k={m.multiplicity})"

    @property
    def dim(self) -> int:
        return self.cone.dim

    # -- lattice bookkeeping -------------------------------------------------

    def in_module(self, idx: tuple[int, ...]) -> bool:
        hit = self._in_a.get(idx)
        if hit is None:
            hit = self._in_a[idx] = self.module.contains_index(idx)
        return hit

    def lattice_index(self, x) -> tuple[int, ...]:
        """Index of a lattice point of P; NotLatticePoint otherwise."""
        try:
            idx = self.space.index_of(x)
        except ValueError as exc:
            raise NotLatticePoint(str(exc)) from None
        if not self.cone.contains(np.atleast_1d(np.asarray(idx, dtype=float))):
            raise NotLatticePoint(f"{x} is not in the cone")
        return idx

    def point(self, idx) -> np.ndarray:
        return self.module.eps * np.atleast_1d(np.asarray(idx, dtype=float))

    def generator_points(self) -> list[np.ndarray]:
        return [self.point(g) for g in self.generators]

    def window_keys(self, window: Window) -> list[Key]:
        k = self.module.multiplicity
        return [(idx, m) for idx in window.indices() if self.in_module(idx) for m in range(k)]

    # -- operators -----------------------------------------------------------

    def _forward(self, n: tuple[int, ...], f: GridFunction) -> GridFunction:
        return f.map_keys(lambda key: (tuple(i + j for i, j in zip(key[0], n)), key[1]))

    def _backward(self, n: tuple[int, ...], f: GridFunction) -> GridFunction:
        def move(key):
            idx = tuple(i - j for i, j in zip(key[0], n))
            return (idx, key[1]) if self.in_module(idx) else None

        return f.map_keys(move)

    def shift(self, x) -> LinearMap:
        """V_x as a linear map with adjoint."""
        n = self.lattice_index(x)
        if not any(n):
            return LinearMap(lambda f: f, lambda f: f, "V0", is_identity=True)
        return LinearMap(lambda f: self._forward(n, f), lambda f: self._backward(n, f), f"V{n}")

    def shift_apply(self, x, f: GridFunction, adjoint: bool = False) -> GridFunction:
        V = self.shift(x)
        return V.adjoint_apply(f) if adjoint else V(f)

    def _in_range(self, n, idx) -> bool:
        return self.in_module(tuple(i - j for i, j in zip(idx, n)))

    def range_projection(self, x) -> LinearMap:
        """E_x = V_x V_x^*."""
        n = self.lattice_index(x)
        proj = lambda f: f.restrict(lambda key: self._in_range(n, key[0]))  # noqa: E731
        return LinearMap(proj, proj, f"E{n}")

    def defect_projection(self, x) -> LinearMap:
        """E_x^perp = 1 - V_x V_x^*, the projection onto Ker(V_x^*)."""
        n = self.lattice_index(x)
        proj = lambda f: f.restrict(lambda key: not self._in_range(n, key[0]))  # noqa: E731
        return LinearMap(proj, proj, f"Eperp{n}")

    def kernel_residual(self, x, xi: GridFunction) -> float:
        """|V_x^* xi|; zero exactly when xi is a defect vector at x."""
        return self.shift_apply(x, xi, adjoint=True).norm()

    def window_operators(self, window: Window) -> tuple[list[Key], list[np.ndarray]]:
        """Zero-filled compressions of V_g, g a lattice generator, to the window."""
        keys = self.window_keys(window)
        pos = {key: i for i, key in enumerate(keys)}
        mats = []
        for g in self.generators:
            M = np.zeros((len(keys), len(keys)))
            for key, col in pos.items():
                row = pos.get((tuple(i + j for i, j in zip(key[0], g)), key[1]))
                if row is not None:
                    M[row, col] = 1.0
            mats.append(M)
        return keys, mats

    def range_dimension(self, x, window: Window) -> int:
        """dim of range(V_x) intersected with the span of the window."""
        n = self.lattice_index(x)
        return sum(1 for idx, _ in self.window_keys(window) if self._in_range(n, idx))


class DirectSumRep:
    """V (+) W, only through its window compressions."""

    def __init__(self, *reps):
        if len({r.dim for r in reps}) != 1:
            raise ValueError("summands must share the cone")
        self.reps = reps
        self.cone = reps[0].cone
        self.generators = reps[0].generators

    @property
    def dim(self):
        return self.cone.dim

    def window_keys(self, window):
        return [(i, key) for i, r in enumerate(self.reps) for key in r.window_keys(window)]

    def window_operators(self, window):
        parts = [r.window_operators(window) for r in self.reps]
        keys = [(i, key) for i, (ks, _) in enumerate(parts) for key in ks]
        mats = [scipy.linalg.block_diag(*(p[1][g] for p in parts)) for g in range(len(self.generators))]
        return keys, mats

    def range_dimension(self, x, window):
        return sum(r.range_dimension(x, window) for r in self.reps)

    def lattice_index(self, x):
        return self.reps[0].lattice_index(x)


# -- defect spaces and cocycles -----------------------------------------------


def defect_support(rep: ModuleRep, x, window: Window) -> list[tuple[int, ...]]:
    """Lattice indices of A \\ (x + A) inside the window; E_x^perp projects onto them."""
    n = rep.lattice_index(x)
    return [idx for idx in window.indices() if rep.in_module(idx) and not rep._in_range(n, idx)]


def decompose(rep: ModuleRep, n: tuple[int, ...]) -> list[int]:
    """Multiplicities of the lattice generators summing to the index n."""
    gens = [tuple(g) for g in rep.generators]
    target = tuple(n)
    memo: dict[tuple[int, ...], list[int] | None] = {}

    def search(t):
        if not any(t):
            return [0] * len(gens)
        if t in memo:
            return memo[t]
        memo[t] = None
        if not rep.cone.contains(np.atleast_1d(np.asarray(t, dtype=float))):
            return None
        for i, g in enumerate(gens):
            rest = tuple(a - b for a, b in zip(t, g))
            sub = search(rest)
            if sub is not None:
                memo[t] = sub[:i] + [sub[i] + 1] + sub[i + 1:]
                return memo[t]
        return None

    out = search(target)
    if out is None:
        raise NotLatticePoint(f"{n} is not a nonnegative combination of lattice generators")
    return out


class AdditiveCocycle:
    """A family x -> xi_x of one-particle vectors indexed by lattice points of P.

    Use one of the constructors; the family is only a genuine additive cocycle
    when ``additive_cocycle_check`` says so.
    """

    def __init__(self, rep: ModuleRep, fn: Callable[[tuple[int, ...]], GridFunction], name: str = "xi"):
        self.rep = rep
        self._fn = fn
        self._cache: dict[tuple[int, ...], GridFunction] = {}
        self.name = name

    def at_index(self, n) -> GridFunction:
        n = tuple(int(i) for i in n)
        if n not in self._cache:
            self._cache[n] = self._fn(n)
        return self._cache[n]

    def __call__(self, x) -> GridFunction:
        return self.at_index(self.rep.lattice_index(x))

    def __repr__(self):
        return f"AdditiveCocycle({self.name})"

    @classmethod
    def zero(cls, rep: ModuleRep) -> "AdditiveCocycle":
        return cls(rep, lambda n: rep.space.zero(), "0")

    @classmethod
    def from_function(cls, rep: ModuleRep, fn: Callable, name: str = "family") -> "AdditiveCocycle":
        """Arbitrary family; fn takes a lattice point (ambient coordinates)."""
        return cls(rep, lambda n: fn(rep.point(n)), name)

    @classmethod
    def from_generators(cls, rep: ModuleRep, values: Sequence[GridFunction]) -> "AdditiveCocycle":
        """Extend values on the lattice generators by xi_{x+g} = xi_x + V_x xi_g."""
        gens = [tuple(g) for g in rep.generators]
        if len(values) != len(gens):
            raise ValueError("one value per lattice generator required")

        def build(n):
            counts = decompose(rep, n)
            xi = rep.space.zero()
            cur = (0,) * rep.dim
            for g, val, cnt in zip(gens, values, counts):
                for _ in range(cnt):
                    xi = xi + rep._forward(cur, val)
                    cur = tuple(a + b for a, b in zip(cur, g))
            return xi

        return cls(rep, build, "generated")

    @classmethod
    def indicator(cls, rep: ModuleRep, c: complex = 1.0, slot: int = 0) -> "AdditiveCocycle":
        """xi_x = c * 1_{A \\ (x + A)}; finitely supported only for d = 1."""
        if rep.dim != 1:
            raise ValueError("indicator cocycle is square integrable only on a one-dimensional module")

        def build(n):
            lo = min(int(round(a[0] / rep.module.eps)) for a in rep.module.offsets)
            data = {}
            for i in range(lo, lo + n[0] + 1):
                if rep.in_module((i,)) and not rep._in_range(n, (i,)):
                    data[((i,), slot)] = c
            return GridFunction(rep.space, data)

        return cls(rep, build, f"indicator({c})")


class CocycleCheck(NamedTuple):
    residual: float
    kernel_residual: float
    mu: np.ndarray
    linearity_residual: float


def additive_cocycle_check(rep: ModuleRep, xi: AdditiveCocycle, samples: Iterable) -> CocycleCheck:
    """Residuals of the cocycle law, of Ker(V_x^*) membership, and of |xi_x|^2 = <mu|x>."""
    res = kern = 0.0
    pts, sq = [], []
    for x, y in samples:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        lhs = xi(x + y)
        rhs = xi(x) + rep.shift_apply(x, xi(y))
        res = max(res, (lhs - rhs).norm())
        for z in (x, y, x + y):
            kern = max(kern, rep.kernel_residual(z, xi(z)))
            pts.append(z)
            sq.append(xi(z).norm() ** 2)
    X = np.array(pts)
    s = np.array(sq)
    mu, *_ = np.linalg.lstsq(X, s, rcond=None)
    lin = float(np.max(np.abs(X @ mu - s), initial=0.0))
    return CocycleCheck(float(res), float(kern), mu, lin)


# -- commutants, primality, purity --------------------------------------------


class IntertwinerSpace(NamedTuple):
    dim: int
    basis: list[np.ndarray]


def intertwiner_space(repV, repW, window: Window, tol: float = 1e-8) -> IntertwinerSpace:
    """Windowed solutions T of T V_g = W_g T and T V_g^* = W_g^* T for all generators g."""
    _, Vs = repV.window_operators(window)
    _, Ws = repW.window_operators(window)
    nV, nW = (Vs[0].shape[0] if Vs else 0), (Ws[0].shape[0] if Ws else 0)
    if nV < 2 or nW < 2:
        raise WindowTooSmall("window must contain at least two grid points of each module")
    if len(Vs) != len(Ws):
        raise ValueError("representations use different lattice generators")
    IV, IW = sp.identity(nV, format="csr"), sp.identity(nW, format="csr")
    blocks = []
    for V, W in zip(Vs, Ws):
        for A, B in ((V, W), (V.conj().T, W.conj().T)):
            # row-major vec: vec(T A) = (I kron A^T) vec(T), vec(B T) = (B kron I) vec(T)
            blocks.append(sp.kron(IW, sp.csr_matrix(A).T) - sp.kron(sp.csr_matrix(B), IV))
    M = sp.vstack(blocks).tocsr()
    G = (M.conj().T @ M).toarray()
    vals, vecs = np.linalg.eigh(G)
    null = vecs[:, vals < tol * max(1.0, vals.max(initial=0.0))]
    return IntertwinerSpace(null.shape[1], [null[:, i].reshape(nW, nV) for i in range(null.shape[1])])


class PurityProbe(NamedTuple):
    dims: list[int]
    pure: bool


def purity_probe(rep, a, steps: int, window: Window) -> PurityProbe:
    """dim(range V_{na} within the window) for n = 1..steps."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if not rep.cone.is_interior(a):
        raise ValueError("a must be interior to the cone")
    dims = [rep.range_dimension(n * a, window) for n in range(1, steps + 1)]
    return PurityProbe(dims, bool(dims) and dims[-1] == 0)


def _interior_lattice_point(rep) -> np.ndarray:
    idx = np.sum(rep.generators, axis=0)
    eps = rep.reps[0].module.eps if isinstance(rep, DirectSumRep) else rep.module.eps
    return eps * idx


def is_prime(rep, window: Window) -> bool:
    """Irreducibility of the windowed representation: commutant of dimension 1."""
    keys, _ = rep.window_operators(window)
    if len(keys) == 0:
        raise DegenerateRepresentation("representation space is trivial on the window")
    a = _interior_lattice_point(rep)
    span = max(h - l for l, h in zip(window.lo, window.hi)) + 1
    probe = purity_probe(rep, a, span + 1, window)
    if not probe.pure:
        raise DegenerateRepresentation("representation is not pure on the window; E(x) collapses")
    return intertwiner_space(rep, rep, window).dim == 1
