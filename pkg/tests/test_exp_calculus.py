import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ccrflow import fock, truncated
from ccrflow.errors import SpaceMismatch, SubspaceNotInvariant
from ccrflow.fock import ExpSpanState, adjoint, compose, exp_inner, identity_op, matrix_element, tuple_distance, weyl
from ccrflow.grid import GridSpace

S = GridSpace(1)
KEYS = [((i,), 0) for i in range(4)]

coef = st.complex_numbers(max_magnitude=0.6, allow_nan=False, allow_infinity=False)
vectors = st.lists(coef, min_size=4, max_size=4).map(lambda cs: S.from_values(dict(zip(KEYS, cs))))


def test_weyl_of_zero_is_identity():
    W = weyl(S.zero())
    assert W.c == 1 and W.w.is_zero() and W.zeta.is_zero()
    assert tuple_distance(W, identity_op(S), [S.delta(0)]) == 0


def test_vacuum_expectation():
    xi = S.from_values({0: 1.0, 3: 1.0})
    assert matrix_element(weyl(xi), S.zero(), S.zero()) == pytest.approx(math.exp(-1), abs=1e-15)


def test_weyl_inverse():
    xi = S.from_values({0: 0.3 + 0.2j, 1: -0.5})
    assert tuple_distance(compose(weyl(xi), weyl(-1 * xi)), identity_op(S)) < 1e-15


def test_compose_identity_left():
    O = weyl(S.delta(2, value=0.4j))
    assert tuple_distance(compose(identity_op(S), O), O) == 0


def test_adjoint_examples():
    assert tuple_distance(adjoint(identity_op(S)), identity_op(S)) == 0
    xi = S.from_values({0: 0.3, 2: 1j})
    assert tuple_distance(adjoint(weyl(xi)), weyl(-1 * xi)) < 1e-15


def test_exp_inner_examples():
    zero = ExpSpanState.exponential(S.zero())
    assert exp_inner(zero, zero) == 1
    e1 = ExpSpanState.exponential(S.delta(0))
    assert exp_inner(e1, e1) == pytest.approx(math.e)
    assert exp_inner(e1, ExpSpanState.exponential(S.delta(1))) == 1


def test_space_mismatch():
    other = GridSpace(2)
    with pytest.raises(SpaceMismatch):
        compose(weyl(S.delta(0)), weyl(other.delta((0, 0))))


def test_state_action_matches_apply():
    xi, eta = S.delta(0, value=0.5), S.delta(1, value=0.2j)
    state = weyl(xi).act(ExpSpanState([(2.0, eta)]))
    c, arg = weyl(xi).apply(eta)
    assert state.terms == [(2.0 * c, arg)]


# -- properties --------------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(vectors, vectors)
def test_kernel_identity(xi, eta):
    got = exp_inner(ExpSpanState.exponential(xi), ExpSpanState.exponential(eta))
    assert abs(got - cmath.exp(xi.inner(eta))) < 1e-12


@settings(max_examples=50, deadline=None)
@given(vectors)
def test_weyl_unitary(xi):
    W = weyl(xi)
    assert tuple_distance(compose(adjoint(W), W), identity_op(S)) < 1e-12
    assert tuple_distance(compose(W, adjoint(W)), identity_op(S)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(vectors, vectors)
def test_weyl_commutation(xi, eta):
    # with inner products linear in the first slot, W(x)W(y) = exp(i Im<x|y>) W(x+y)
    lhs = compose(weyl(xi), weyl(eta))
    rhs = weyl(xi + eta) * cmath.exp(1j * xi.inner(eta).imag)
    assert tuple_distance(lhs, rhs) < 1e-12


@settings(max_examples=40, deadline=None)
@given(vectors, vectors, vectors, vectors)
def test_adjoint_pairing(xi, zeta, eta, mu):
    O = compose(weyl(xi), fock.second_quantization(fock.IDENTITY, S)) * (0.5 - 0.25j)
    O = fock.WeylAffineOp(O.c, O.w, O.B, zeta)
    c, arg = adjoint(O).apply(mu)
    rhs = np.conj(c) * cmath.exp(eta.inner(arg))
    assert abs(matrix_element(O, eta, mu) - rhs) < 1e-12


@settings(max_examples=40, deadline=None)
@given(vectors, vectors, vectors, st.lists(vectors, min_size=5, max_size=5))
def test_associativity_on_probes(a, b, c, probes):
    A, B, C = weyl(a), weyl(b) * 1.5, weyl(c)
    left, right = compose(compose(A, B), C), compose(A, compose(B, C))
    for eta in probes:
        c1, x1 = left.apply(eta)
        c2, x2 = right.apply(eta)
        assert abs(c1 - c2) < 1e-12 * max(1, abs(c1))
        assert (x1 - x2).norm() < 1e-12


@settings(max_examples=40, deadline=None)
@given(vectors, vectors, vectors)
def test_composition_law_on_exponentials(a, b, eta):
    """(O1 O2) e(eta) equals O1 applied to O2 e(eta)."""
    O1, O2 = weyl(a), weyl(b)
    c2, x2 = O2.apply(eta)
    c1, x1 = O1.apply(x2)
    c, x = compose(O1, O2).apply(eta)
    assert abs(c - c1 * c2) < 1e-12 and (x - x1).norm() < 1e-12


# -- truncated oracle ----------------------------------------------------------


def basis(m):
    return [S.delta(i) for i in range(m)]


def test_truncated_identity():
    M = truncated.truncated_matrix(identity_op(S), basis(2), 6)
    np.testing.assert_allclose(M, np.eye(len(truncated.number_basis(2, 6))))


def test_truncated_vacuum_entry():
    xi = S.from_values({0: 0.6, 1: -0.3j})
    M = truncated.truncated_matrix(weyl(xi), basis(2), 10)
    assert M[0, 0] == pytest.approx(math.exp(-0.5 * xi.norm() ** 2), abs=1e-15)


def test_truncated_rejects_escaping_zeta():
    with pytest.raises(SubspaceNotInvariant):
        truncated.truncated_matrix(weyl(S.delta(3)), basis(2), 4)


def test_number_basis_size():
    # stars and bars: C(N + m, m)
    assert len(truncated.number_basis(3, 5)) == math.comb(8, 3)


def small_coords(draw_vals):
    v = np.asarray(draw_vals, complex)
    n = np.linalg.norm(v)
    return v / n if n > 1 else v


cvec2 = st.lists(st.complex_numbers(max_magnitude=0.7, allow_nan=False, allow_infinity=False), min_size=2, max_size=2)


@settings(max_examples=15, deadline=None)
@given(cvec2, cvec2, cvec2)
def test_truncated_oracle_agrees(x, e, u):
    """Truncated number-basis matrices reproduce the calculus at m=2, N=20, norms <= 1."""
    x, e, u = small_coords(x), small_coords(e), small_coords(u)
    N = 20
    O = weyl(S.from_values({i: x[i] for i in range(2)}))
    M = truncated.truncated_matrix(O, basis(2), N)
    ee, eu = truncated.truncated_exp_vector(e, N), truncated.truncated_exp_vector(u, N)
    got = np.vdot(eu, M @ ee)  # conj-linear in the first slot: <O e(eta)|e(mu)> in our convention
    want = matrix_element(O, S.from_values({i: e[i] for i in range(2)}), S.from_values({i: u[i] for i in range(2)}))
    assert abs(got - want) < 1e-8
    assert abs(np.vdot(eu, ee) - np.exp(np.vdot(u, e))) <= truncated.truncation_bound(1.0, N) + 1e-14


@settings(max_examples=15, deadline=None)
@given(cvec2, cvec2)
def test_truncated_homomorphism(x, y):
    """Products of truncated matrices match the truncated product on low-degree entries."""
    x, y = small_coords(x), small_coords(y)
    N = 14
    A = weyl(S.from_values({0: x[0], 1: x[1]}))
    B = weyl(S.from_values({0: y[0], 1: y[1]}))
    MA, MB = (truncated.truncated_matrix(O, basis(2), N) for O in (A, B))
    MAB = truncated.truncated_matrix(compose(A, B), basis(2), N)
    low = len(truncated.number_basis(2, 4))
    np.testing.assert_allclose((MA @ MB)[:low, :low], MAB[:low, :low], atol=1e-6)
