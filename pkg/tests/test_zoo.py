from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from bottlocal.bundles import bundle_dual, character_multiset, trivial_bundle
from bottlocal.chow import ChowModel
from bottlocal.engine import euler_characteristic, integrate_number
from bottlocal.scalars import Character
from bottlocal.zoo import (
    Fan,
    FanError,
    RepeatedWeightError,
    grassmannian,
    hirzebruch,
    moment_weights,
    product_fan,
    product_space,
    projective_fan,
    projective_space,
    relabelled,
    toric_line_bundle,
    toric_space,
)

from oracles import lattice_points, nef_on_fan

P1_FAN = Fan([(1,), (-1,)], [(0,), (1,)])


def test_projective_line_with_weights_zero_and_w():
    X = projective_space([(0,), (5,)])
    assert [F.normal_characters() for F in X.components] == [[Character((5,))], [Character((-5,))]]
    assert integrate_number(X, "c1(O(1))").total == 1


def test_projective_conventions():
    X = projective_space(3)
    assert len(X.components) == 4 and X.dim == 3
    for i, F in enumerate(X.components):
        e = [Character.basis(4, j) - Character.basis(4, i) for j in range(4) if j != i]
        assert sorted(F.normal_characters(), key=lambda c: c.coords) == sorted(e, key=lambda c: c.coords)
        assert character_multiset(X.bundle("O(1)"), i) == Counter({-Character.basis(4, i): 1})
        assert character_multiset(X.bundle("O(-1)"), i) == Counter({Character.basis(4, i): 1})


def test_repeated_weights_rejected():
    with pytest.raises(RepeatedWeightError):
        projective_space([(1,), (2,), (1,)])
    with pytest.raises(RepeatedWeightError):
        grassmannian(2, [(0, 1), (1, 0), (0, 1), (2, 2)])
    with pytest.raises(ValueError):
        grassmannian(0, 3)
    with pytest.raises(ValueError):
        grassmannian(3, 3)


def test_grassmannian_structure():
    G = grassmannian(2, 4)
    assert len(G.components) == 6 and G.dim == 4
    assert [F.id for F in G.components] == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    for F in G.components:
        assert F.codim == 4
        S = {Character.basis(4, i) for i in F.id}
        assert set(character_multiset(G.bundle("S"), F.id)) == S
        Q = {Character.basis(4, j) for j in range(4) if j not in F.id}
        assert set(character_multiset(G.bundle("Q"), F.id)) == Q
        want = Counter(Character.basis(4, j) - Character.basis(4, i) for i in F.id for j in range(4) if j not in F.id)
        assert Counter(F.normal_characters()) == want


def test_moment_weights_give_the_same_answers():
    X = projective_space(moment_weights(5))
    assert X.rank == 2
    assert integrate_number(X, "c1(O(1))^4", mode="both").total == 1
    G = grassmannian(2, moment_weights(5))
    assert integrate_number(G, "c6(tangent)", mode="both").total == 10


def test_relabelled():
    X = projective_space(2)
    Y = relabelled(X, [2, 0, 1])
    assert Y.meta["weights"] == [X.meta["weights"][i] for i in (2, 0, 1)]
    with pytest.raises(ValueError):
        relabelled(toric_space(projective_fan(2)), [0, 1, 2])


# -- fans ----------------------------------------------------------------------------


def test_fan_validation():
    with pytest.raises(FanError, match="not smooth"):
        Fan([(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(FanError, match="not complete"):
        Fan([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2)])
    with pytest.raises(FanError):
        Fan([(1, 0), (0, 1), (0, 0)], [(0, 1)])
    with pytest.raises(FanError):
        Fan([(1, 0), (0, 1), (1, 0)], [(0, 1)])
    with pytest.raises(FanError, match="unknown ray"):
        Fan([(1, 0), (0, 1)], [(0, 5)])
    with pytest.raises(FanError):
        Fan([(1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 2)])


def test_fan_covering_twice_is_rejected():
    # two P^2 fans on interleaved rays: every wall has exactly two cones on
    # opposite sides, but each generic point lies in two cones
    rays = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
    hexagon = Fan(rays, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
    assert len(hexagon.cones) == 6
    with pytest.raises(FanError):
        Fan(rays, [(0, 2), (2, 4), (4, 0), (1, 3), (3, 5), (5, 1)])


@pytest.mark.parametrize(
    "fan,points",
    [(projective_fan(2), 3), (product_fan(P1_FAN, P1_FAN), 4), (hirzebruch(1), 4), (projective_fan(3), 4)],
)
def test_toric_fixed_point_counts(fan, points):
    X = toric_space(fan)
    assert len(X.components) == points
    assert integrate_number(X, f"c{X.dim}(tangent)", mode="both").total == points


def test_toric_projective_plane():
    X = toric_space(projective_fan(2))
    assert integrate_number(X, "c1(tangent)^2", mode="both").total == 9
    O = toric_line_bundle(X, [0, 0, 0])
    assert all(c.is_zero() for F in X.components for c in character_multiset(O, F.id))
    assert euler_characteristic(X, toric_line_bundle(X, [1, 0, 0])).total == 3


@pytest.mark.parametrize("a,b", [(0, 0), (1, 0), (2, 1), (3, 3)])
def test_toric_p1xp1_bidegree(a, b):
    X = toric_space(product_fan(P1_FAN, P1_FAN))
    assert euler_characteristic(X, toric_line_bundle(X, [a, 0, b, 0])).total == (a + 1) * (b + 1)


@pytest.mark.parametrize("a", [0, 1, 2, 3])
def test_hirzebruch_invariants(a):
    X = toric_space(hirzebruch(a))
    assert integrate_number(X, "c2(tangent)").total == 4
    assert integrate_number(X, "c1(tangent)^2").total == 8
    O = trivial_bundle(X.models, 1, Character.zero(2))
    assert euler_characteristic(X, O).total == 1


def test_toric_chi_matches_lattice_points_on_f1():
    fan = hirzebruch(1)
    X = toric_space(fan)
    for D in ([1, 0, 0, 0], [0, 1, 1, 0], [1, 1, 0, 0], [0, 0, 0, 2], [1, 0, 2, 1]):
        assert nef_on_fan(fan.rays, fan.cones, D)
        got = euler_characteristic(X, toric_line_bundle(X, D)).total
        assert got == lattice_points(fan.rays, D, box=8), D


def test_toric_subtorus_weights():
    fan = projective_fan(2)
    X = toric_space(fan, weights=[(1, 3)])
    assert X.rank == 1
    assert integrate_number(X, "c1(tangent)^2", mode="both").total == 9
    with pytest.raises(ValueError):
        toric_space(fan, weights=[(1, 1)])


def test_toric_and_projective_agree():
    for n in (1, 2, 3):
        a = integrate_number(toric_space(projective_fan(n)), f"c1(tangent)^{n}").total
        b = integrate_number(projective_space(n), f"c1(tangent)^{n}").total
        assert a == b == (n + 1) ** n


# -- products ------------------------------------------------------------------


def test_product_with_trivial_factor():
    Y = product_space(projective_space([(0,), (1,)]), ChowModel((2,)))
    assert Y.dim == 3 and Y.rank == 1
    F0, F1 = Y.components
    assert F0.dim == 2 and F0.normal_characters() == [Character((1,))]
    assert F1.normal_characters() == [Character((-1,))]
    assert integrate_number(Y, "c3(tangent)").total == 6
    assert integrate_number(Y, "c1(pr2_O(1))^2*c1(pr1_O(1))").total == 1


def test_product_of_acted_spaces_matches_product_fan():
    Y = product_space(projective_space(1), projective_space(2))
    assert Y.dim == 3 and Y.rank == 5 and len(Y.components) == 6
    T = toric_space(product_fan(P1_FAN, projective_fan(2)))
    for spec in ("c3(tangent)", "c1(tangent)^3", "c1(tangent)*c2(tangent)"):
        assert integrate_number(Y, spec).total == integrate_number(T, spec).total


# -- Grassmannian duality -----------------------------------------------------------


@pytest.mark.parametrize(
    "spec",
    ["c1(E)^6", "c2(E)^3", "c1(E)^2*c2(E)^2", "c1(E)^4*c2(E)"],
)
def test_grassmannian_duality(spec):
    G = grassmannian(2, 5)
    H = grassmannian(3, 5)
    a = integrate_number(G, spec, {"E": G.bundle("S")}).total
    b = integrate_number(H, spec, {"E": bundle_dual(H.bundle("Q"))}).total
    assert a == b


@settings(max_examples=10, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=4, max_size=4, unique=True))
def test_generic_weights_give_equal_totals(ws):
    G = grassmannian(2, [(w,) for w in ws])
    assert integrate_number(G, "c1(O(1))^4").total == 2
