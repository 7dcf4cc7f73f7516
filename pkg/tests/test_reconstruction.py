import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ccrflow import ccr, reconstruction as rc
from ccrflow.errors import BasePointMismatch, DegenerateRepresentation, KernelNotPSD
from ccrflow.isometric import ModuleRep

HALF = ModuleRep.half_line(1.0)
QUARTER = ModuleRep.quarter_plane(1.0)
S = HALF.space


def dec(x, vals, rep=HALF):
    return ccr.decomposable(rep, x, rep.space.from_values({i: v for i, v in enumerate(vals[:x])}))


def test_self_difference_has_zero_coordinates():
    space = rc.build_space(2, [dec(2, [1, 1j]), dec(2, [0.5])])
    assert np.all(space.coordinates(space.difference(1, 1)) == 0)
    assert space.norm(space.difference(0, 0)) == 0


def test_difference_norm_is_defect_distance():
    u, v = dec(2, [1, 1j]), dec(2, [0.5, -1])
    space = rc.build_space(2, [u, v])
    assert space.norm(space.difference(0, 1)) == pytest.approx((u.defect - v.defect).norm(), abs=1e-12)
    assert space.coordinate_residual() < 1e-12


def test_non_zero_sum_rejected():
    space = rc.build_space(1, [dec(1, [1]), dec(1, [2])])
    with pytest.raises(ValueError):
        space.norm(np.array([1.0, 0.0]))


def test_mixed_base_points_rejected():
    with pytest.raises(BasePointMismatch):
        rc.build_space(2, [dec(2, [1]), dec(3, [1])])


def test_psd_factor_rejects_indefinite():
    with pytest.raises(KernelNotPSD):
        rc.psd_factor(np.diag([1.0, -0.5]))
    C = rc.psd_factor(np.array([[2.0, 1.0], [1.0, 2.0]]))
    np.testing.assert_allclose(C @ C.conj().T, [[2, 1], [1, 2]], atol=1e-14)


def test_image_of_unit_multiplication():
    xi = S.from_values({0: 0.5, 1: -1j})
    f = ccr.unit_section(HALF, 1)
    iso = rc.recovered_isometry(HALF, f)
    assert iso.image(ccr.decomposable(HALF, 2, xi)).defect == HALF.shift(1)(xi)
    assert iso.image(ccr.unit_section(HALF, 2)).defect.is_zero()


def test_identity_at_origin():
    iso = rc.recovered_isometry(HALF, ccr.unit_section(HALF, 0))
    u = dec(2, [1, 2j])
    assert iso.image(u).defect == u.defect


def test_isometry_residual():
    space = rc.build_space(2, [dec(2, [0]), dec(2, [1, 1j]), dec(2, [0.3, -2])])
    iso = rc.recovered_isometry(HALF, dec(1, [0.7 + 0.2j]))
    assert iso.isometry_residual(space) < 1e-12


def test_f_independence():
    space = rc.build_space(2, [dec(2, [0]), dec(2, [1, 1j]), dec(2, [0.3, -2])])
    f1, f2 = dec(1, [1 + 2j]), dec(1, [-0.5])
    assert rc.f_independence(HALF, space, f1, f2) < 1e-10


def test_half_line_injectivity():
    d0, d1 = S.delta(0), S.delta(1)
    rep = rc.verify_injectivity(HALF, 2, [d0, d1, d0 + 1j * d1], [1, 2])
    assert rep.ok
    assert max(rep.inner_residual, rep.linearity_residual, rep.intertwining_residual) < 1e-9


def test_quarter_plane_injectivity():
    rng = np.random.default_rng(5)
    keys = rc.defect_keys(QUARTER, (2, 2))
    defs = [QUARTER.space.from_values(dict(zip(keys, rng.normal(size=len(keys)) + 1j * rng.normal(size=len(keys)))))
            for _ in range(6)]
    rep = rc.verify_injectivity(QUARTER, (2, 2), defs, [(1, 0), (0, 1)], rng)
    assert rep.ok, rep.as_dict()


def test_zero_module_is_degenerate():
    zero = ModuleRep.half_line(1.0, 0)
    with pytest.raises(DegenerateRepresentation):
        rc.verify_injectivity(zero, 1, [zero.space.zero()], [1])


def test_injectivity_with_canonical_unit_as_f():
    rep = rc.verify_injectivity(HALF, 2, [S.delta(0)], [1], f=ccr.unit_section(HALF, 1))
    assert rep.ok


def test_wrong_shift_is_detected():
    """Comparing f u against V_2 instead of V_1 gives a visible residual."""
    d0 = S.delta(0)
    moved = [ccr.operator_product(HALF, ccr.unit_section(HALF, 1), u) for u in (dec(2, [0]), ccr.decomposable(HALF, 2, d0))]
    direct = [ccr.decomposable(HALF, 3, HALF.defect_projection(3)(HALF.shift(2)(g))) for g in (S.zero(), d0)]
    J = rc.build_space(3, moved + direct, [])
    assert J.norm(np.array([-1, 1, 1, -1])) > 0.5


def test_kernel_match():
    assert rc.kernel_match(HALF, 2, [S.delta(0), S.delta(1, value=0.5j), S.zero()]) < 1e-12


# -- properties ---------------------------------------------------------------

cvals = st.lists(st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False), min_size=2, max_size=2)


@settings(max_examples=40, deadline=None)
@given(st.lists(cvals, min_size=1, max_size=4), st.integers(1, 2))
def test_injectivity_property(rows, a):
    defs = [S.from_values({0: r[0], 1: r[1]}) for r in rows]
    defs = [g for g in defs if g.norm() > 1e-6] or [S.delta(0)]
    rep = rc.verify_injectivity(HALF, 2, defs, [a], np.random.default_rng(0))
    assert max(rep.inner_residual, rep.linearity_residual, rep.intertwining_residual) < 1e-9 * max(
        1, max(g.norm() ** 2 for g in defs))


@settings(max_examples=40, deadline=None)
@given(st.lists(cvals, min_size=2, max_size=5))
def test_difference_gram_is_one_particle_gram(rows):
    samples = [dec(2, r) for r in rows]
    space = rc.build_space(2, samples)
    n = len(samples)
    want = np.array([[(samples[i].defect - samples[0].defect).inner(samples[j].defect - samples[0].defect)
                      for j in range(n)] for i in range(n)])
    assert np.abs(space.gram - want).max() < 1e-10 * max(1, np.abs(want).max())
