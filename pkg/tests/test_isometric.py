import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ccrflow.cone import Cone
from ccrflow.errors import DegenerateRepresentation, ModuleError, NotLatticePoint, WindowTooSmall
from ccrflow.isometric import (
    AdditiveCocycle,
    DirectSumRep,
    ModuleRep,
    PModule,
    Window,
    additive_cocycle_check,
    defect_support,
    intertwiner_space,
    is_prime,
    purity_probe,
)

HALF = ModuleRep.half_line(1.0)
QUARTER = ModuleRep.quarter_plane(1.0)


def test_shift_examples():
    S = HALF.space
    assert HALF.shift(1)(S.delta(0)) == S.delta(1)
    Q = QUARTER.space
    assert QUARTER.shift((1, 2))(Q.delta((0, 0))) == Q.delta((1, 2))
    assert QUARTER.shift((1, 0)).adjoint_apply(Q.delta((0, 0))).is_zero()


def test_defect_support_examples():
    assert defect_support(HALF, 2, Window.square(6, 1)) == [(0,), (1,)]
    band = {(i, j) for i in range(4) for j in range(4) if i == 0 or j == 0}
    assert set(defect_support(QUARTER, (1, 1), Window.square(4, 2))) == band
    assert defect_support(HALF, 0, Window.square(6, 1)) == []


def test_off_lattice_point():
    with pytest.raises(NotLatticePoint):
        ModuleRep.half_line(0.5).shift(0.3)


def test_module_validation():
    with pytest.raises(ModuleError):
        PModule(Cone.orthant(2), [])
    with pytest.raises(ModuleError):
        PModule(Cone.orthant(2), [[0.5, 0]], eps=1.0)


def test_zero_cocycle():
    chk = additive_cocycle_check(HALF, AdditiveCocycle.zero(HALF), [(1, 2), (3, 0)])
    assert chk.residual == 0 and chk.kernel_residual == 0


def test_indicator_cocycle_mu():
    c = 0.5 - 0.5j
    chk = additive_cocycle_check(HALF, AdditiveCocycle.indicator(HALF, c), [(1, 2), (2, 3), (4, 1)])
    assert chk.residual == 0 and chk.kernel_residual == 0
    # norms carry the cell volume, so |xi_x|^2 = |c|^2 x in ambient units
    assert chk.mu[0] == pytest.approx(abs(c) ** 2)
    assert chk.linearity_residual < 1e-12


def test_constant_family_is_not_a_cocycle():
    const = AdditiveCocycle.from_function(HALF, lambda x: HALF.space.delta(0))
    assert additive_cocycle_check(HALF, const, [(1, 1), (2, 1)]).residual > 0.5


def test_from_generators_matches_indicator():
    gen = AdditiveCocycle.from_generators(HALF, [HALF.space.delta(0, value=0.7)])
    ind = AdditiveCocycle.indicator(HALF, 0.7)
    assert all(gen(n) == ind(n) for n in range(6))


def test_incompatible_generator_values_flagged():
    # on the quarter plane the values on the two generators must commute through the cocycle law
    rep = QUARTER
    xi = AdditiveCocycle.from_generators(rep, [rep.space.zero(), rep.space.delta((0, 0))])
    assert additive_cocycle_check(rep, xi, [((1, 0), (0, 1)), ((0, 1), (1, 0))]).residual > 0.5


def test_intertwiner_dimensions():
    assert intertwiner_space(HALF, HALF, Window.square(4, 1)).dim == 1
    half2 = ModuleRep.half_line(1.0, 2)
    assert intertwiner_space(half2, half2, Window.square(4, 1)).dim == 4
    A1 = ModuleRep(PModule(Cone.orthant(2), [[0, 0]]))
    A2 = ModuleRep(PModule(Cone.orthant(2), [[0, 0], [-1, 0]]))
    assert intertwiner_space(A1, A2, Window((-1, 0), (3, 4))).dim == 0


def test_intertwiner_basis_commutes():
    half2 = ModuleRep.half_line(1.0, 2)
    space = intertwiner_space(half2, half2, Window.square(4, 1))
    _, Vs = half2.window_operators(Window.square(4, 1))
    for T in space.basis:
        for V in Vs:
            assert np.abs(T @ V - V @ T).max() < 1e-8


def test_window_too_small():
    with pytest.raises(WindowTooSmall):
        intertwiner_space(HALF, HALF, Window.square(1, 1))


def test_primality():
    w = Window.square(5, 2)
    assert is_prime(ModuleRep.quarter_plane(1.0, 1), w)
    assert not is_prime(ModuleRep.quarter_plane(1.0, 2), w)
    assert not is_prime(DirectSumRep(HALF, HALF), Window.square(5, 1))


def test_zero_module_is_degenerate():
    with pytest.raises(DegenerateRepresentation):
        is_prime(ModuleRep.half_line(1.0, 0), Window.square(4, 1))


def test_purity_examples():
    assert purity_probe(HALF, 1, 10, Window.square(10, 1)).dims == list(range(9, -1, -1))
    assert purity_probe(QUARTER, (1, 1), 4, Window.square(4, 2)).dims == [9, 4, 1, 0]
    whole = ModuleRep(PModule.whole(Cone([[1.0]])))
    probe = purity_probe(whole, 1, 4, Window.square(5, 1))
    assert not probe.pure and len(set(probe.dims)) == 1


# -- properties ---------------------------------------------------------------

idx2 = st.tuples(st.integers(0, 4), st.integers(0, 4))
cvals = st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=1, max_size=6)


def _vec(rep, vals, rng_keys):
    return rep.space.from_values({k: v for k, v in zip(rng_keys, vals)})


@settings(max_examples=50, deadline=None)
@given(idx2, idx2, cvals)
def test_semigroup_law(x, y, vals):
    f = _vec(QUARTER, vals, [(i, j) for i in range(3) for j in range(2)])
    lhs = QUARTER.shift(np.add(x, y))(f)
    rhs = QUARTER.shift(x)(QUARTER.shift(y)(f))
    assert lhs == rhs


@settings(max_examples=50, deadline=None)
@given(idx2, cvals)
def test_isometry_and_projections(x, vals):
    f = _vec(QUARTER, vals, [(i, j) for i in range(3) for j in range(2)])
    V = QUARTER.shift(x)
    assert abs(V(f).norm() - f.norm()) < 1e-12
    assert (V.adjoint_apply(V(f)) - f).norm() < 1e-12
    E, D = QUARTER.range_projection(x), QUARTER.defect_projection(x)
    assert (E(f) + D(f) - f).norm() < 1e-12
    assert V.adjoint_apply(D(f)).norm() < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), cvals)
def test_generated_cocycle_law(x, y, vals):
    g = _vec(HALF, vals, [(i,) for i in range(len(vals))])
    # only the part of the generator value in Ker V_1^* gives a cocycle in the defect spaces
    g = HALF.defect_projection(1)(g)
    xi = AdditiveCocycle.from_generators(HALF, [g])
    chk = additive_cocycle_check(HALF, xi, [(x, y)])
    assert chk.residual < 1e-12 and chk.kernel_residual < 1e-12
