"""Finitely supported functions on an epsilon-lattice with a multiplicity index.

These are the one-particle vectors of the discretised representations.  A
point of the lattice is stored by its integer index n (the point itself is
eps * n) together with a multiplicity slot m in range(k).  The inner product
is the counting measure scaled by eps**d, so indicators of lattice boxes have
continuum-consistent norms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import SpaceMismatch

Key = tuple[tuple[int, ...], int]


@dataclass(frozen=True)
class GridSpace:
    dim: int
    eps: float = 1.0
    multiplicity: int = 1

    @property
    def cell(self) -> float:
        return self.eps**self.dim

    def zero(self) -> "GridFunction":
        return GridFunction(self, {})

    def delta(self, index, slot: int = 0, value: complex = 1.0) -> "GridFunction":
        return GridFunction(self, {(tuple(int(i) for i in np.atleast_1d(index)), slot): value})

    def from_values(self, values: Mapping) -> "GridFunction":
        """Build from {index: value} or {(index, slot): value}."""
        data = {}
        for key, val in values.items():
            if isinstance(key, tuple) and len(key) == 2 and isinstance(key[0], tuple):
                idx, slot = key
            else:
                idx, slot = key, 0
            idx = tuple(int(i) for i in np.atleast_1d(idx))
            data[(idx, slot)] = data.get((idx, slot), 0) + complex(val)
        return GridFunction(self, data)

    def index_of(self, point) -> tuple[int, ...]:
        """Lattice index of a point, or ValueError when it is off the lattice."""
        scaled = np.atleast_1d(np.asarray(point, dtype=float)) / self.eps
        idx = np.round(scaled)
        if np.max(np.abs(scaled - idx), initial=0.0) > 1e-9:
            raise ValueError(f"{point} is not on the lattice of step {self.eps}")
        return tuple(int(i) for i in idx)


class GridFunction:
    """Immutable finitely supported complex function on (lattice index, slot)."""

    # make numpy scalars defer to __rmul__ instead of iterating over us
    __array_ufunc__ = None

    __slots__ = ("space", "_data", "_key")

    def __init__(self, space: GridSpace, data: Mapping[Key, complex]):
        self.space = space
        self._data = {k: complex(v) for k, v in data.items() if v != 0}
        self._key = None

    # -- container protocol --------------------------------------------------

    def items(self):
        return self._data.items()

    def support(self) -> list[Key]:
        return sorted(self._data)

    def __getitem__(self, key: Key) -> complex:
        return self._data.get(key, 0j)

    def __len__(self):
        return len(self._data)

    def is_zero(self) -> bool:
        return not self._data

    def __repr__(self):
        body = ", ".join(f"{k}: {v:.4g}" for k, v in sorted(self._data.items())[:6])
        more = ", ..." if len(self._data) > 6 else ""
        return f"GridFunction({{{body}{more}}})"

    def __eq__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        return self.space == other.space and self._data == other._data

    def __hash__(self):
        if self._key is None:
            self._key = hash((self.space, tuple(sorted(self._data.items()))))
        return self._key

    # -- vector space --------------------------------------------------------

    def _check(self, other: "GridFunction"):
        if not isinstance(other, GridFunction) or other.space != self.space:
            raise SpaceMismatch(f"{getattr(other, 'space', type(other))} vs {self.space}")

    def __add__(self, other):
        self._check(other)
        out = dict(self._data)
        for k, v in other._data.items():
            out[k] = out.get(k, 0) + v
        return GridFunction(self.space, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __mul__(self, scalar):
        return GridFunction(self.space, {k: scalar * v for k, v in self._data.items()})

    __rmul__ = __mul__

    def conj(self) -> "GridFunction":
        return GridFunction(self.space, {k: v.conjugate() for k, v in self._data.items()})

    def inner(self, other: "GridFunction") -> complex:
        """<self|other>, linear in self and conjugate-linear in other."""
        self._check(other)
        small, big = (self._data, other._data) if len(self._data) <= len(other._data) else (other._data, self._data)
        total = 0j
        for k in small:
            if k in big:
                total += self._data[k] * other._data[k].conjugate()
        return total * self.space.cell

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(v) ** 2 for v in self._data.values()) * self.space.cell))

    # -- structural helpers --------------------------------------------------

    def map_keys(self, fn) -> "GridFunction":
        """Relabel the support by fn(key) -> key or None (None drops the entry)."""
        out: dict[Key, complex] = {}
        for k, v in self._data.items():
            nk = fn(k)
            if nk is not None:
                out[nk] = out.get(nk, 0) + v
        return GridFunction(self.space, out)

    def restrict(self, keep) -> "GridFunction":
        return GridFunction(self.space, {k: v for k, v in self._data.items() if keep(k)})

    def probes(self) -> list["GridFunction"]:
        """Unit deltas on the support; used when comparing linear maps."""
        return [GridFunction(self.space, {k: 1.0}) for k in self.support()]

    def coordinates(self, basis_keys: Iterable[Key]) -> np.ndarray:
        return np.array([self._data.get(k, 0j) for k in basis_keys], dtype=complex)


def random_grid_function(space: GridSpace, keys: list[Key], rng: np.random.Generator, scale: float = 1.0) -> GridFunction:
    vals = rng.normal(size=len(keys)) + 1j * rng.normal(size=len(keys))
    return GridFunction(space, {k: scale * v for k, v in zip(keys, vals)})
