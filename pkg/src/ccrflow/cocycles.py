"""Positive contractive and projective local cocycles of a CCR flow.

For parameters (lam, xi, A) the cocycle is the Weyl-affine family

    C_x e(eta) = exp(-<lam|x>) exp(<eta|xi_x>) e((A E_x^perp + E_x) eta + xi_x),

i.e. the tuple (exp(-<lam|x>), xi_x, A E_x^perp + E_x, xi_x).  A is a
positive contraction in the commutant of the representation.  On a P-module
with multiplicity k, the operators commuting with every V_x and V_x^* are
multiplication by a constant k x k matrix; position-dependent matrices are
supported so that non-commuting parameters can be built and rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import ccr
from .ccr import DecomposableVector
from .errors import InvalidParams, NotContractive, SubspaceNotInvariant
from .fock import LinearMap, WeylAffineOp, adjoint, compose, matrix_element, tuple_distance, weyl
from .grid import GridFunction
from .isometric import AdditiveCocycle, Window
from .reconstruction import defect_keys
from .truncated import truncated_matrix

C2_TOL = 1e-10
C1_TOL = 1e-10
MODES = ("contractive", "positive", "projective")


class PointwiseOperator:
    """f(n, s) -> sum_t M(n)[s, t] f(n, t) for k x k matrices M(n).

    Args:
        matrix: a constant k x k matrix, or a callable index -> k x k matrix.
    """

    def __init__(self, matrix, k: int | None = None, name: str = "A"):
        if callable(matrix):
            if k is None:
                raise ValueError("k is required for a position-dependent operator")
            self._fn = matrix
            self.constant = None
            self.k = k
        else:
            M = np.atleast_2d(np.asarray(matrix, dtype=complex))
            if M.shape[0] != M.shape[1]:
                raise ValueError("matrix must be square")
            self._fn = lambda idx: M
            self.constant = M
            self.k = M.shape[0]
        self.name = name
        self._eig: dict = {}

    def __repr__(self):
        return f"PointwiseOperator({self.name})"

    @classmethod
    def scalar(cls, s: float, k: int = 1) -> "PointwiseOperator":
        return cls(s * np.eye(k), name=f"{s}*I")

    @classmethod
    def identity(cls, k: int = 1) -> "PointwiseOperator":
        return cls(np.eye(k), name="I")

    @classmethod
    def block_projection(cls, k: int, rank: int | None = None) -> "PointwiseOperator":
        """Projection onto the first ``rank`` multiplicity slots (default k // 2)."""
        rank = k // 2 if rank is None else rank
        return cls(np.diag([1.0] * rank + [0.0] * (k - rank)), name=f"Q{rank}")

    def matrix_at(self, idx) -> np.ndarray:
        return np.atleast_2d(np.asarray(self._fn(tuple(idx)), dtype=complex))

    def __call__(self, f: GridFunction) -> GridFunction:
        out: dict = {}
        for idx in {key[0] for key in f.support()}:
            v = np.array([f[(idx, s)] for s in range(self.k)])
            w = self.matrix_at(idx) @ v
            for s in range(self.k):
                if w[s] != 0:
                    out[(idx, s)] = w[s]
        return GridFunction(f.space, out)

    def adjoint_apply(self, f: GridFunction) -> GridFunction:
        return PointwiseOperator(lambda idx: self.matrix_at(idx).conj().T, self.k)(f)

    def as_linear_map(self) -> LinearMap:
        return LinearMap(self, self.adjoint_apply, self.name)

    def eig_at(self, idx):
        M = self.matrix_at(idx)
        key = None if self.constant is not None else tuple(idx)
        if key not in self._eig:
            self._eig[key] = np.linalg.eigh(0.5 * (M + M.conj().T))
        return self._eig[key]


def inv_sqrt_one_minus(A: PointwiseOperator, f: GridFunction, tol: float = C2_TOL) -> tuple[GridFunction, float]:
    """(1 - A)^{-1/2} f off Ker(1 - A), and the norm of the part of f inside Ker(1 - A)."""
    out: dict = {}
    ker2 = 0.0
    for idx in {key[0] for key in f.support()}:
        w, U = A.eig_at(idx)
        v = np.array([f[(idx, s)] for s in range(A.k)])
        c = U.conj().T @ v
        gap = 1.0 - w
        on_kernel = np.abs(gap) <= tol
        ker2 += float(np.sum(np.abs(c[on_kernel]) ** 2))
        c = np.where(on_kernel, 0.0, c / np.sqrt(np.where(on_kernel, 1.0, np.abs(gap))))
        res = U @ c
        for s in range(A.k):
            if res[s] != 0:
                out[(idx, s)] = res[s]
    return GridFunction(f.space, out), float(np.sqrt(ker2 * f.space.cell))


@dataclass
class CocycleParams:
    lam: np.ndarray
    xi: AdditiveCocycle
    A: PointwiseOperator
    mode: str = "contractive"

    def __post_init__(self):
        self.lam = np.atleast_1d(np.asarray(self.lam, dtype=float))
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")

    @classmethod
    def identity(cls, rep) -> "CocycleParams":
        return cls(np.zeros(rep.dim), AdditiveCocycle.zero(rep), PointwiseOperator.identity(rep.space.multiplicity))

    @classmethod
    def projective(cls, rep, xi: AdditiveCocycle, Q: PointwiseOperator) -> "CocycleParams":
        """Projection Q with (1 - Q) xi = xi and lam = lam_xi from |xi_x|^2 = <lam_xi|x>."""
        return cls(lambda_xi(rep, xi), xi, Q, "projective")


def lambda_xi(rep, xi: AdditiveCocycle) -> np.ndarray:
    """Solve |xi_g|^2 = <lam|g> over the lattice generators."""
    G = np.array(rep.generator_points())
    s = np.array([xi(g).norm() ** 2 for g in G])
    lam, *_ = np.linalg.lstsq(G, s, rcond=None)
    return lam


def sample_points(rep, rng: np.random.Generator | None = None, n_sums: int = 10, max_coeff: int = 3) -> list[np.ndarray]:
    """Lattice generators plus random nonnegative integer combinations of them."""
    rng = np.random.default_rng(0) if rng is None else rng
    gens = rep.generator_points()
    pts = list(gens)
    for _ in range(n_sums):
        coeffs = rng.integers(0, max_coeff + 1, size=len(gens))
        if not coeffs.any():
            coeffs[0] = 1
        pts.append(sum(c * g for c, g in zip(coeffs, gens)))
    return pts


class Validation(NamedTuple):
    positivity: float
    norm: float
    commutation: float
    kernel_overlap: float
    c3_margin: float
    ok: bool


def _commutation_residual(rep, A: PointwiseOperator, window: Window) -> float:
    worst = 0.0
    for g in rep.generator_points():
        V = rep.shift(g)
        for key in rep.window_keys(window):
            f = rep.space.delta(*key)
            worst = max(worst, (V(A(f)) - A(V(f))).norm() / rep.space.cell ** 0.5,
                        (V.adjoint_apply(A(f)) - A(V.adjoint_apply(f))).norm() / rep.space.cell ** 0.5)
    return worst


def validate(rep, params: CocycleParams, points: Sequence | None = None, window: Window | None = None,
             raise_errors: bool = True) -> Validation:
    """Check positivity, the kernel condition and, unless mode is "positive", contractivity on sampled points.

    Raises:
        InvalidParams: the positivity or kernel condition fails (or Q is not a projection in projective mode).
        NotContractive: contractivity fails.
    """
    points = sample_points(rep) if points is None else [np.atleast_1d(np.asarray(p, dtype=float)) for p in points]
    A = params.A
    if A.k != rep.space.multiplicity:
        raise InvalidParams(f"A acts on C^{A.k}, the representation has multiplicity {rep.space.multiplicity}")
    if window is None:
        window = Window.square(4, rep.dim)
    idxs = {key[0] for key in rep.window_keys(window)}
    for p in points:
        idxs.update(key[0] for key in params.xi(p).support())
    pos, nrm = np.inf, 0.0
    proj = 0.0
    for idx in idxs:
        M = A.matrix_at(idx)
        herm = float(np.abs(M - M.conj().T).max())
        w = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
        pos = min(pos, float(w.min()) - herm)
        nrm = max(nrm, float(np.linalg.norm(M, 2)))
        proj = max(proj, float(np.abs(M @ M - M).max()))
    comm = _commutation_residual(rep, A, window)
    overlap, margin = 0.0, -np.inf
    for p in points:
        xi = params.xi(p)
        g, ker = inv_sqrt_one_minus(A, xi)
        overlap = max(overlap, ker)
        margin = max(margin, -float(params.lam @ p) + g.norm() ** 2)
    c1 = pos >= -C1_TOL and nrm <= 1 + C1_TOL and comm <= C1_TOL
    c2 = overlap <= C2_TOL
    c3 = params.mode == "positive" or margin <= 1e-10 * max(1.0, float(np.abs(params.lam).sum()))
    if params.mode == "projective" and proj > C1_TOL:
        c1 = False
    if raise_errors:
        if not c1:
            raise InvalidParams(f"positivity condition fails: min eig {pos:.3g}, norm {nrm:.3g}, commutation {comm:.3g}")
        if not c2:
            raise InvalidParams(f"kernel condition fails: xi has a component {overlap:.3g} in Ker(1 - A)")
        if not c3:
            raise NotContractive(f"contractivity fails: -<lam|x> + |(1-A)^(-1/2) xi_x|^2 reaches {margin:.3g}")
    return Validation(pos, nrm, comm, overlap, float(margin), bool(c1 and c2 and c3))


def cocycle_B(rep, A: PointwiseOperator, x) -> LinearMap:
    """A E_x^perp + E_x."""
    Ep = rep.defect_projection(x)
    E = rep.range_projection(x)
    Am = A.as_linear_map()
    apply = lambda f: Am(Ep(f)) + E(f)  # noqa: E731
    adj = lambda f: Ep(Am.adjoint_apply(f)) + E(f)  # noqa: E731
    return LinearMap(apply, adj, f"({A.name}E^perp+E)")


def make_cocycle(rep, params: CocycleParams, x, validate_params: bool = False) -> WeylAffineOp:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if validate_params:
        validate(rep, params)
    xi = params.xi(x)
    c = complex(np.exp(-float(params.lam @ x)))
    return WeylAffineOp(c, xi, cocycle_B(rep, params.A, x), xi)


class CocycleFamily:
    """x -> C_x with validation done once and tuples cached per point."""

    def __init__(self, rep, params: CocycleParams, validate_params: bool = True, points: Sequence | None = None):
        self.rep = rep
        self.params = params
        self.validation = validate(rep, params, points) if validate_params else None
        self._cache: dict = {}

    def __call__(self, x) -> WeylAffineOp:
        key = ccr._key(x)
        if key not in self._cache:
            self._cache[key] = make_cocycle(self.rep, self.params, x)
        return self._cache[key]

    def theta(self, u: DecomposableVector) -> DecomposableVector:
        """theta_x(u) = C_x u, read back as a decomposable at the same point."""
        return ccr.read_decomposable(self.rep, u.point, compose(self(u.point), ccr.as_operator(self.rep, u)), [u.defect])


def _random_defect(rep, x, rng, scale=0.5):
    keys = defect_keys(rep, x)
    vals = scale * (rng.normal(size=len(keys)) + 1j * rng.normal(size=len(keys)))
    return rep.space.from_values(dict(zip(keys, vals)))


def cocycle_identity_check(rep, family: CocycleFamily, pairs: Sequence, rng=None) -> float:
    """max tuple distance between C_{x+y}(T S) and (C_x T)(C_y S) for random T, S."""
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 0.0
    for x, y in pairs:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        sigma, tau = _random_defect(rep, x, rng), _random_defect(rep, y, rng)
        T, S = ccr.exp_op(rep, x, sigma), ccr.exp_op(rep, y, tau)
        lhs = compose(family(x + y), compose(T, S))
        rhs = compose(compose(family(x), T), compose(family(y), S))
        probes = [sigma, tau, family.params.xi(x + y), family.params.xi(x), family.params.xi(y)]
        worst = max(worst, tuple_distance(lhs, rhs, probes))
    return worst


def locality_check(rep, family: CocycleFamily, x, probes: Sequence) -> float:
    """max tuple distance between C_x W(V_x eta) and W(V_x eta) C_x."""
    C = family(x)
    V = rep.shift(x)
    worst = 0.0
    for eta in probes:
        W = weyl(V(eta))
        worst = max(worst, tuple_distance(compose(C, W), compose(W, C), [V(eta), C.zeta]))
    return worst


def adjoint_residual(family: CocycleFamily, x, probes: Sequence = ()) -> float:
    C = family(x)
    return tuple_distance(adjoint(C), C, list(probes))


def positivity_check(rep, family: CocycleFamily, x, probes: Sequence) -> float:
    """Minimum eigenvalue of M_ij = <C_x e(eta_j) | e(eta_i)>."""
    C = family(x)
    M = np.array([[matrix_element(C, ej, ei) for ej in probes] for ei in probes])
    return float(np.linalg.eigvalsh(0.5 * (M + M.conj().T)).min())


def nonvanishing(rep, family: CocycleFamily, samples: Sequence[DecomposableVector]) -> float:
    """min |c| of C_x u over sampled decomposables u."""
    return min(abs(compose(family(u.point), ccr.as_operator(rep, u)).c) for u in samples)


def norm_formula(params: CocycleParams, x) -> float:
    """exp(-<lam|x>) exp(|(1 - A)^{-1/2} xi_x|^2)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    g, _ = inv_sqrt_one_minus(params.A, params.xi(x))
    return float(np.exp(-float(params.lam @ x) + g.norm() ** 2))


def _orthonormalize(vectors, tol=1e-12):
    basis = []
    for v in vectors:
        for b in basis:
            v = v - v.inner(b) * b
        n = v.norm()
        if n > tol:
            basis.append((1.0 / n) * v)
    return basis


def truncated_norm(rep, family: CocycleFamily, x, N: int = 16, modes: int = 2) -> float:
    """Operator norm of C_x compressed to the Fock space of a small invariant subspace.

    The subspace is the Krylov span of xi_x under A, padded with range vectors
    of V_x (on which B is the identity) up to ``modes`` dimensions.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    C = family(x)
    xi = C.zeta
    krylov = [xi]
    for _ in range(modes - 1):
        krylov.append(C.B(krylov[-1]))
    basis = _orthonormalize([v for v in krylov if not v.is_zero()])
    j = 0
    while len(basis) < modes:
        pad = rep.shift(x)(rep.space.delta(rep.space.index_of(rep.module.offsets[0]), 0))
        pad = rep.shift(j * rep.generator_points()[0])(pad)
        basis = _orthonormalize(basis + [pad])
        j += 1
    basis = basis[:modes]
    try:
        M = truncated_matrix(C, basis, N)
    except SubspaceNotInvariant:
        raise SubspaceNotInvariant(f"xi_x does not span an A-invariant subspace of dimension {modes}") from None
    return float(np.linalg.norm(M, 2))


def log_norm_additivity(params: CocycleParams, pairs: Sequence) -> float:
    """max |log N(x+y) - log N(x) - log N(y)| using the norm formula."""
    worst = 0.0
    for x, y in pairs:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        d = np.log(norm_formula(params, x + y)) - np.log(norm_formula(params, x)) - np.log(norm_formula(params, y))
        worst = max(worst, abs(float(d)))
    return worst


class RecoveredParams(NamedTuple):
    lam: np.ndarray
    xi: dict
    A: dict
    residual: float


def recover_params(rep, family: CocycleFamily, points: Sequence | None = None, window: Window | None = None) -> RecoveredParams:
    """Read (lam, xi, A) back from the cocycle's action on decomposables.

    xi_x is the defect of theta_x(Gamma(V_x)); lam solves |c| = exp(-<lam|x>)
    over the points; A is read from theta_x(T_e(delta)) - theta_x(Gamma(V_x))
    on unit deltas of the defect space at the largest sampled point.
    """
    params = family.params
    points = [np.atleast_1d(np.asarray(p, dtype=float)) for p in (points or sample_points(rep))]
    xs, logs, xis = [], [], {}
    worst = 0.0
    for p in points:
        img = family.theta(ccr.unit_section(rep, p))
        xis[ccr._key(p)] = img.defect
        xs.append(p)
        logs.append(-np.log(abs(img.scalar)))
        worst = max(worst, (img.defect - params.xi(p)).norm())
    lam, *_ = np.linalg.lstsq(np.array(xs), np.array(logs), rcond=None)
    worst = max(worst, float(np.abs(lam - params.lam).max()))
    big = max(points, key=lambda p: float(np.sum(p)))
    base = family.theta(ccr.unit_section(rep, big))
    mats: dict = {}
    k = rep.space.multiplicity
    for key in defect_keys(rep, big):
        idx, s = key
        img = family.theta(ccr.decomposable(rep, big, rep.space.delta(*key)))
        # the scalar e^{<delta|xi>} does not affect the defect
        col = img.defect - base.defect
        M = mats.setdefault(idx, np.zeros((k, k), dtype=complex))
        M[:, s] = [col[(idx, t)] for t in range(k)]
    for idx, M in mats.items():
        worst = max(worst, float(np.abs(M - params.A.matrix_at(idx)).max()))
    return RecoveredParams(lam, xis, mats, worst)


def half_line_example(rep, c: complex = 0.5, a: float = 0.5) -> CocycleParams:
    """A = a, xi = c 1_{[0, x)}, lam at equality in the contractivity bound: lam = |c|^2 / (1 - a)."""
    xi = AdditiveCocycle.indicator(rep, c)
    return CocycleParams([abs(c) ** 2 / (1 - a)], xi, PointwiseOperator.scalar(a, rep.space.multiplicity))


def parse_A(spec: str, k: int) -> PointwiseOperator:
    """'scalar:0.5' or 'projection:block'."""
    kind, _, arg = spec.partition(":")
    if kind == "scalar":
        return PointwiseOperator.scalar(float(arg), k)
    if kind == "projection" and arg in ("block", ""):
        return PointwiseOperator.block_projection(k)
    raise InvalidParams(f"unknown A specification {spec!r}")


def parse_xi(spec: str, rep, slot: int = 0) -> AdditiveCocycle:
    """'indicator:c' or 'zero'."""
    kind, _, arg = spec.partition(":")
    if kind == "indicator":
        return AdditiveCocycle.indicator(rep, complex(arg or 1.0), slot)
    if kind == "zero":
        return AdditiveCocycle.zero(rep)
    raise InvalidParams(f"unknown xi specification {spec!r}")
