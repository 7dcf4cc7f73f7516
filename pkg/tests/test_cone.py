import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ccrflow.cone import (
    Cone,
    archimedean_bound,
    decreasing_subsequence,
    embed_polyhedral,
    lattice_generators,
    order_relation,
    ray_decomposition,
)
from ccrflow.errors import NotInCone, NotInterior, NotPointed, NotSpanning


def brute_force_dual_rays(gens, n=3600):
    """Extreme rays of the dual of a 2D cone by scanning unit directions."""
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
    ok = np.all(dirs @ np.asarray(gens, float).T >= -1e-12, axis=1)
    # extreme rays are where the feasible arc starts and ends
    idx = np.flatnonzero(ok & ~np.roll(ok, 1)).tolist() + np.flatnonzero(ok & ~np.roll(ok, -1)).tolist()
    return dirs[idx]


def normalize(rows):
    rows = np.asarray(rows, float)
    return sorted(map(tuple, np.round(rows / np.linalg.norm(rows, axis=1, keepdims=True), 2)))


def test_orthant_self_dual():
    assert Cone.orthant(2).dual() == Cone.orthant(2)


def test_dual_against_direction_scan():
    got = Cone([[1, 0], [1, 1]]).dual()
    assert got == Cone([[0, 1], [1, -1]])
    assert normalize(got.generators) == normalize(brute_force_dual_rays([[1, 0], [1, 1]]))


def test_biduality_example():
    P = Cone([[1, 0], [1, 1]])
    assert P.dual().dual() == P


def test_rejects_non_pointed_and_degenerate():
    with pytest.raises(NotPointed):
        Cone([[1, 0], [-1, 0], [0, 1]])
    with pytest.raises(NotSpanning):
        Cone([[1, 0], [2, 0]])


@pytest.mark.parametrize(
    "x,y,expected",
    [((1, 2), (2, 3), (True, True)), ((1, 2), (2, 1), (False, False)), ((1, 2), (1, 3), (True, False))],
)
def test_order_examples(x, y, expected):
    assert tuple(order_relation(Cone.orthant(2), x, y)) == expected


@pytest.mark.parametrize("x,n", [((3.5, 0.2), 4), ((1, 1), 2), ((0, 0), 1)])
def test_archimedean_examples(x, n):
    assert archimedean_bound(Cone.orthant(2), x, (1, 1)) == n


def test_archimedean_needs_interior():
    with pytest.raises(NotInterior):
        archimedean_bound(Cone.orthant(2), (1, 1), (1, 0))


def test_decreasing_already_sorted():
    seq = [(1 / n, 1 / n) for n in range(1, 6)]
    assert decreasing_subsequence(Cone.orthant(2), seq) == [0, 1, 2, 3, 4]


def longest_chain(P, seq):
    best = []
    for r in range(len(seq), 0, -1):
        for idx in itertools.combinations(range(len(seq)), r):
            if all(order_relation(P, seq[j], seq[i]).leq for i, j in zip(idx, idx[1:])):
                return list(idx)
    return best


def test_decreasing_mixed_sequence():
    P = Cone.orthant(2)
    seq = [(1, 0.5), (0.6, 0.7), (0.5, 0.4), (0.2, 0.3), (0.1, 0.1)]
    got = decreasing_subsequence(P, seq)
    assert got == [0, 2, 3, 4]
    # the greedy chain is as long as the longest one found by exhaustion
    assert len(got) == len(longest_chain(P, seq))


def test_decreasing_rejects_outside_points():
    with pytest.raises(NotInCone):
        decreasing_subsequence(Cone.orthant(2), [(1, 1), (-1, 2), (0.1, 0.1)])


@pytest.mark.parametrize("x,z,t", [((3, 1), (2, 0), 1.0), ((2, 2), (0, 0), 2.0)])
def test_ray_decomposition_examples(x, z, t):
    gz, gt = ray_decomposition(Cone.orthant(2), x, (1, 1))
    np.testing.assert_allclose(gz, z, atol=1e-15)
    assert gt == pytest.approx(t)


def test_ray_decomposition_boundary_input():
    with pytest.raises(NotInterior):
        ray_decomposition(Cone.orthant(2), (1, 0), (1, 1))


def test_embed_examples():
    P = Cone.orthant(2)
    emb = embed_polyhedral(P, (1, 1), 2, np.eye(2))
    assert emb.valid
    assert emb.cone == Cone([[1.5, 1], [1, 1.5], [0.5, 0.5]])
    assert emb.cone.is_interior((1, 1))
    bad = embed_polyhedral(P, (1, 1), 1, np.eye(2))
    assert not bad.valid and bad.offending == 2


def test_lattice_generators_orthant_and_wedge():
    np.testing.assert_array_equal(lattice_generators(Cone.orthant(2)), [[1, 0], [0, 1]])
    got = {tuple(r) for r in lattice_generators(Cone([[1, 0], [1, 2]])).astype(int)}
    assert got == {(1, 0), (1, 1), (1, 2)}


# -- properties ------------------------------------------------------------------

int_vec = st.lists(st.integers(0, 4), min_size=2, max_size=2)


@st.composite
def cones_2d(draw):
    gens = draw(st.lists(int_vec, min_size=2, max_size=4))
    gens = [g for g in gens if any(g)]
    try:
        return Cone(gens)
    except (NotPointed, NotSpanning, ValueError):
        return Cone.orthant(2)


@st.composite
def cones_3d(draw):
    gens = draw(st.lists(st.lists(st.integers(0, 3), min_size=3, max_size=3), min_size=3, max_size=5))
    gens = [np.add(g, (1, 1, 1)) if i % 2 else np.add(g, np.eye(3, dtype=int)[i % 3]) for i, g in enumerate(gens)]
    try:
        return Cone(gens)
    except (NotPointed, NotSpanning, ValueError):
        return Cone.orthant(3)


@settings(max_examples=40, deadline=None)
@given(cones_2d())
def test_biduality_2d(P):
    assert P.dual().dual() == P


@settings(max_examples=25, deadline=None)
@given(cones_3d())
def test_biduality_3d(P):
    assert P.dual().dual() == P


@settings(max_examples=40, deadline=None)
@given(cones_2d(), st.lists(st.floats(0.1, 3), min_size=2, max_size=2))
def test_dual_pairs_nonnegatively(P, w):
    x = np.asarray(w) @ P.generators[:2]
    assert np.all(P.dual().generators @ x >= -1e-9)


@settings(max_examples=40, deadline=None)
@given(cones_2d(), st.floats(0.1, 5), st.floats(0.0, 3))
def test_ray_decomposition_property(P, s, r):
    a = P.generators.sum(axis=0)
    x = s * a + r * P.generators[0]
    z, t = ray_decomposition(P, x, a)
    assert np.linalg.norm(x - z - t * a) < 1e-12
    assert P.is_boundary(z) and t > 0


@settings(max_examples=40, deadline=None)
@given(cones_2d(), st.lists(st.floats(0.0, 1.0), min_size=3, max_size=10))
def test_decreasing_chain_is_ordered(P, ws):
    a = P.generators.sum(axis=0)
    seq = [w / (k + 1) * a + 1e-3 * a for k, w in enumerate(ws)] + [1e-4 * a]
    idx = decreasing_subsequence(P, seq, small=10.0)
    assert idx[0] == 0 and idx == sorted(idx)
    assert all(order_relation(P, seq[j], seq[i]).leq for i, j in zip(idx, idx[1:]))


@settings(max_examples=40, deadline=None)
@given(cones_2d(), st.lists(st.floats(-3, 3), min_size=2, max_size=2))
def test_archimedean_is_minimal(P, x):
    a = P.generators.sum(axis=0)
    n = archimedean_bound(P, x, a)
    assert order_relation(P, x, n * a).lt
    assert n == 1 or not order_relation(P, x, (n - 1) * a).lt


@settings(max_examples=30, deadline=None)
@given(cones_2d())
def test_transitivity(P):
    g = P.generators
    x, y, z = g[0], g[0] + g[1], 2 * g[0] + 3 * g[1]
    assert order_relation(P, x, y).leq and order_relation(P, y, z).leq
    assert order_relation(P, x, z).leq
