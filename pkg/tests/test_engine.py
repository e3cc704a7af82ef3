import random
from fractions import Fraction

import pytest

from bottlocal.bundles import bundle_dual, bundle_sum, line_power, sym_power, trivial_bundle
from bottlocal.chernspec import evaluate_spec
from bottlocal.chow import ChowModel, LocalClass
from bottlocal.classes import euler_normal
from bottlocal.engine import (
    ModeDisagreement,
    NotInRTError,
    UnsupportedSpec,
    WeightedDegreeError,
    bott_residue,
    contribution,
    euler_characteristic,
    integrate_component,
    integrate_degree,
    integrate_number,
    lift_check,
    run_mode,
    weyl_check,
)
from bottlocal.scalars import Character, InadmissibleSpecialization, LocalizedScalar, Specialization, SymbolicDomain
from bottlocal.zoo import grassmannian, product_space, projective_space

from oracles import chi_projective_by_counting, schubert_degree_of_power, schubert_lines_count


def test_contribution_examples():
    X = projective_space(1)
    dom = SymbolicDomain(2)
    F = X.component(0)
    alpha = evaluate_spec("c1(O(1))", F, X.bundles, dom)
    c = contribution(X, F, alpha, dom)
    assert c.component == 0
    assert c.value == LocalizedScalar.form(Character((-1, 0))) / LocalizedScalar.form(Character((-1, 1)))
    assert contribution(X, F, euler_normal(F, dom), dom).value == 1
    zero = LocalClass.zero(F.id, F.chow, dom, 1)
    assert contribution(X, F, zero, dom).value.is_zero()


def test_integrate_component_examples():
    P2 = projective_space(2)
    assert integrate_degree(P2, "c1(O(1))", 1).is_zero()
    assert integrate_degree(projective_space(1), "c1(O(1))", 1) == 1
    dom = SymbolicDomain(3)
    zeros = {F.id: LocalClass.zero(F.id, F.chow, dom, 2) for F in P2.components}
    assert integrate_component(P2, zeros, 2, dom).is_zero()


def test_integrate_degree_above_dimension_is_a_polynomial():
    P2 = projective_space(2)
    got = integrate_degree(P2, "c1(O(1))^3", 3)
    assert got.is_polynomial() and got.degree == 1
    assert got == -(LocalizedScalar.form(Character((1, 1, 1))))


def test_integrate_number_examples():
    for n in range(1, 5):
        assert integrate_number(projective_space(n), f"c1(O(1))^{n}", mode="both").total == 1
        assert integrate_number(projective_space(n), f"c{n}(tangent)").total == n + 1
    P2 = projective_space(2)
    O3 = line_power(P2.bundle("O(1)"), 3)
    assert integrate_number(P2, "c1(L)^2", {"L": O3}).total == 9


def test_report_fields():
    X = projective_space(2)
    r = integrate_number(X, "c1(O(1))^2", mode="both", seed=7)
    assert r.total == 1 and r.mode == "both" and r.seed == 7
    assert len(r.specializations) == 2 and r.specializations[0].seed == 7
    assert [c.component for c in r.contributions] == [0, 1, 2]
    d = r.as_dict()
    assert d["total"] == {"num": 1, "den": 1}
    assert len(d["points"]) == 2
    r2 = integrate_number(X, "c1(O(1))^2", mode="spec", seed=3)
    assert r2.total == 1 and all(isinstance(c.value, Fraction) for c in r2.contributions)


def test_bott_residue_examples():
    G = grassmannian(2, 4)
    E = sym_power(bundle_dual(G.bundle("S")), 3)
    assert bott_residue(G, "c4(E)", E, mode="both").total == 27 == schubert_lines_count(3, 4)
    assert bott_residue(projective_space(1), "c1(O(1))").total == 1
    with pytest.raises(WeightedDegreeError):
        bott_residue(G, "c3(E)", E)
    with pytest.raises(WeightedDegreeError):
        bott_residue(G, "c2(S)*c2(Q)")
    with pytest.raises(WeightedDegreeError):
        bott_residue(G, "ch(S)")


def test_schubert_degrees():
    for n in (4, 5):
        G = grassmannian(2, n)
        d = 2 * (n - 2)
        got = integrate_number(G, f"c1(O(1))^{d}").total
        assert got == schubert_degree_of_power(n, d)


@pytest.mark.parametrize("n,d", [(1, -2), (1, 3), (2, -3), (2, 2), (3, -4), (3, 1)])
def test_euler_characteristic_projective(n, d):
    X = projective_space(n)
    L = line_power(X.bundle("O(1)"), d)
    assert euler_characteristic(X, L, mode="both").total == chi_projective_by_counting(n, d)


def test_euler_characteristic_of_structure_sheaf():
    for X in (projective_space(3), grassmannian(2, 4)):
        O = trivial_bundle(X.models, 1, Character.zero(X.rank))
        assert euler_characteristic(X, O).total == 1


def test_product_with_trivial_factor():
    Y = product_space(projective_space(1), ChowModel((2,)))
    assert Y.dim == 3 and len(Y.components) == 2
    assert integrate_number(Y, "c3(tangent)", mode="both").total == 6
    for F in Y.components:
        assert [p.rank for p in F.normal] == [1]


def test_mode_errors():
    X = projective_space(2)
    with pytest.raises(ValueError):
        run_mode(X, "c1(O(1))^2", mode="fast")
    with pytest.raises(InadmissibleSpecialization):
        run_mode(X, "c1(O(1))^2", mode="spec", points=[Specialization((1, 1, 1))])


def test_inconsistent_fixed_point_data_is_not_in_RT():
    # restrictions that do not come from a global class: a lone 1 at one point
    X = projective_space(2)
    dom = SymbolicDomain(3)
    alphas = {F.id: LocalClass.zero(F.id, F.chow, dom, 2) for F in X.components}
    alphas[0] = LocalClass.scalar(0, ChowModel(()), dom, 2, LocalizedScalar.form(Character((1, 0, 0))) ** 2, 2)
    with pytest.raises(NotInRTError):
        integrate_component(X, alphas, 2, dom)


def test_disagreement_is_reported(monkeypatch):
    import bottlocal.engine as engine

    real = engine._specialized

    def skewed(*args):
        value, contribs = real(*args)
        return value + 1, contribs

    monkeypatch.setattr(engine, "_specialized", skewed)
    with pytest.raises(ModeDisagreement):
        run_mode(projective_space(1), "c1(O(1))", mode="both")


def _random_monomial(rng, names_ranks, k):
    factors = []
    left = k
    while left:
        name, rank = rng.choice(names_ranks)
        i = rng.randint(1, min(rank, left))
        factors.append(f"c{i}({name})")
        left -= i
    return "*".join(factors)


def test_vanishing_below_dimension():
    rng = random.Random(11)
    cases = [(projective_space(n), [("O(1)", 1), ("tangent", n)]) for n in (2, 3, 4)]
    cases.append((grassmannian(2, 4), [("S", 2), ("Q", 2), ("tangent", 4)]))
    for X, names in cases:
        for _ in range(4):
            k = rng.randint(1, X.dim - 1)
            spec = _random_monomial(rng, names, k)
            assert integrate_degree(X, spec, k).is_zero(), spec


def test_weyl_check():
    G = grassmannian(2, 4)

    def lines(Y):
        return bott_residue(Y, "c4(E)", sym_power(bundle_dual(Y.bundle("S")), 3))

    assert weyl_check(G, lines, [0, 1, 2, 3])
    assert weyl_check(G, lines, [2, 0, 3, 1])
    P = projective_space(3)
    assert weyl_check(P, lambda Y: integrate_number(Y, "c1(O(1))^3"), [1, 0, 2, 3])
    with pytest.raises(ValueError):
        weyl_check(P, lambda Y: integrate_number(Y, "c1(O(1))^3"), [0, 0, 1, 2])


def test_weight_independence():
    a = integrate_number(projective_space([(3,), (-1,), (7,)]), "c1(O(1))^2").total
    b = integrate_number(projective_space(2), "c1(O(1))^2").total
    assert a == b == 1
    G1 = grassmannian(2, [(0, 1), (2, 0), (5, 3), (1, 7)])
    assert bott_residue(G1, "c4(E)", sym_power(bundle_dual(G1.bundle("S")), 3)).total == 27


def test_lift_check():
    X = projective_space(1)
    assert lift_check(X, "c1(O(1))", "O(1)", Character((4, -3)))
    assert lift_check(X, "c1(O(1))", "O(1)", Character((0, 0)))
    G = grassmannian(2, 4)
    G.add_bundle("E", sym_power(bundle_dual(G.bundle("S")), 3))
    assert lift_check(G, "c4(E)", "E", Character((2, -1, 0, 5)))
    with pytest.raises(UnsupportedSpec):
        lift_check(X, "c1(O(1))", "tangent", Character((1, 0)))


def test_parallel_workers_match_serial():
    X = projective_space(3)
    a = integrate_number(X, "c1(O(1))^3", mode="both")
    b = integrate_number(X, "c1(O(1))^3", mode="both", workers=2)
    assert a.total == b.total
    assert [(c.component, c.value) for c in a.contributions] == [(c.component, c.value) for c in b.contributions]
