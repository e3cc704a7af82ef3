"""Acceptance gate: one test per criterion, exact comparisons throughout.

Each test records a PASS/FAIL line in ``conftest.ACCEPTANCE``; the lines are
printed in the terminal summary (and by ``python tests/test_acceptance.py``).
"""

import random
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, factorial

import pytest

from bottlocal.bundles import EigenPart, bundle_dual, line_power, sym_power, tensor, trivial_bundle
from bottlocal.chow import ChowModel
from bottlocal.engine import (
    bott_residue,
    euler_characteristic,
    integrate_degree,
    integrate_number,
    weyl_check,
)
from bottlocal.planner import DiagonalRep, certify_degrees, free_locus, unstable_locus
from bottlocal.scalars import Character
from bottlocal.zoo import (
    Fan,
    grassmannian,
    hirzebruch,
    moment_weights,
    product_fan,
    product_space,
    projective_fan,
    projective_space,
    toric_line_bundle,
    toric_space,
)

from conftest import ACCEPTANCE
from helpers import check_eigen_chern_against_splitting
from oracles import (
    brute_force_locus,
    chi_projective_by_counting,
    lattice_points,
    monomial_count,
    nef_on_fan,
    schubert_lines_count,
    toric_surface_invariants,
)

# reports of every mode="both" run made for criteria 1-7, checked by criterion 10
BOTH_RUNS = {}


@contextmanager
def criterion(k, summary, shortfall=None):
    """Record PASS/FAIL for criterion ``k``.

    ``shortfall`` marks a criterion whose checks all pass but whose stated
    scope was not covered; it is recorded and reported as a failure.
    """
    try:
        yield
    except BaseException as e:
        ACCEPTANCE[k] = (False, f"{summary} -- {type(e).__name__}: {e}")
        print(f"criterion {k}: FAIL {summary}")
        raise
    if shortfall:
        ACCEPTANCE[k] = (False, f"{summary} -- {shortfall}")
        print(f"criterion {k}: FAIL {summary} -- {shortfall}")
        pytest.fail(f"criterion {k}: {shortfall}")
    ACCEPTANCE[k] = (True, summary)
    print(f"criterion {k}: PASS {summary}")


def both(k, X, spec, bundles=None):
    r = integrate_number(X, spec, bundles, mode="both", seed=k)
    BOTH_RUNS.setdefault(k, []).append(r)
    return r.total


def both_bott(k, X, spec, E):
    r = bott_residue(X, spec, E, mode="both", seed=k)
    BOTH_RUNS.setdefault(k, []).append(r)
    return r.total


def both_chi(k, X, E):
    r = euler_characteristic(X, E, mode="both", seed=k)
    BOTH_RUNS.setdefault(k, []).append(r)
    return r.total


def pn(n):
    # the full torus up to P^7; P^8 uses the rank-2 torus t -> (t^i, t^(i^2))
    return projective_space(n if n <= 7 else moment_weights(n + 1))


def gkn(k, n):
    return grassmannian(k, n if n <= 6 else moment_weights(n))


P1_FAN = Fan([(1,), (-1,)], [(0,), (1,)])
HEXAGON = Fan([(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
TORIC_CORPUS = {
    "P2": projective_fan(2),
    "P3": projective_fan(3),
    "P1xP1": product_fan(P1_FAN, P1_FAN),
    "P1xP2": product_fan(P1_FAN, projective_fan(2)),
    "P1xP1xP1": product_fan(product_fan(P1_FAN, P1_FAN), P1_FAN),
    "F0": hirzebruch(0),
    "F1": hirzebruch(1),
    "F2": hirzebruch(2),
    "F3": hirzebruch(3),
    "dP6": HEXAGON,
}


def test_criterion_01_degree_of_projective_space():
    with criterion(1, "int_{P^n} c1(O(1))^n = 1, n = 1..8, symbolic + 2 specializations"):
        for n in range(1, 9):
            assert both(1, pn(n), f"c1(O(1))^{n}") == 1, n


def test_criterion_02_fixed_point_count():
    with criterion(2, "int c_n(T) = #X^T on P^n (n <= 8), all G(k,n) (n <= 8), 10 toric fans"):
        for n in range(1, 9):
            assert both(2, pn(n), f"c{n}(tangent)") == n + 1
        for n in range(2, 9):
            for k in range(1, n):
                assert both(2, gkn(k, n), f"c{k * (n - k)}(tangent)") == comb(n, k), (k, n)
        for name, fan in TORIC_CORPUS.items():
            X = toric_space(fan)
            assert both(2, X, f"c{X.dim}(tangent)") == len(fan.cones), name


def test_criterion_03_lines_on_cubic_surface():
    with criterion(3, "G(2,4): int c4(Sym^3 S*) = 27 = Schubert oracle"):
        oracle = schubert_lines_count(3, 4)
        G = grassmannian(2, 4)
        got = both_bott(3, G, "c4(E)", sym_power(bundle_dual(G.bundle("S")), 3))
        assert got == oracle == 27


def test_criterion_04_lines_on_quintic_threefold():
    with criterion(4, "G(2,5): int c6(Sym^5 S*) = 2875 = Schubert oracle"):
        oracle = schubert_lines_count(5, 5)
        G = grassmannian(2, 5)
        got = both_bott(4, G, "c6(E)", sym_power(bundle_dual(G.bundle("S")), 5))
        assert got == oracle == 2875


def test_criterion_05_euler_characteristics():
    with criterion(5, "chi(P^n, O(d)), n <= 4, -3 <= d <= 6; chi(P^1 x P^2, O(a,b)), 0 <= a,b <= 3"):
        for n in range(1, 5):
            X = projective_space(n)
            for d in range(-3, 7):
                formula = Fraction(1, factorial(n))
                for j in range(1, n + 1):
                    formula *= d + j
                got = both_chi(5, X, line_power(X.bundle("O(1)"), d))
                assert got == formula == chi_projective_by_counting(n, d), (n, d)
        Y = product_space(projective_space(1), projective_space(2))
        for a in range(4):
            for b in range(4):
                L = tensor(line_power(Y.bundle("pr1_O(1)"), a), line_power(Y.bundle("pr2_O(1)"), b))
                want = (a + 1) * (b + 1) * (b + 2) // 2
                assert both_chi(5, Y, L) == want == monomial_count(2, a) * monomial_count(3, b), (a, b)


NEF = {
    "P2": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [2, 0, 0], [1, 1, 1], [3, 0, 0], [0, 2, 2], [4, 0, 1], [2, -1, 3]],
    "P1xP1": [
        [1, 0, 0, 0], [0, 0, 1, 0], [1, 0, 1, 0], [2, 0, 1, 0], [1, 1, 1, 1],
        [0, 3, 0, 1], [2, 0, 0, 2], [3, 0, 2, 0], [1, -1, 2, 0], [4, 0, 0, 3],
    ],
    "F1": [
        [0, 0, 0, 1], [0, 0, 1, 0], [1, 0, 0, 0], [1, 1, 0, 0], [0, 1, 1, 0],
        [1, 0, 0, 2], [0, 0, 2, 2], [1, 1, 1, 1], [1, 0, 2, 1], [0, 2, 2, 2],
    ],
}


def test_criterion_06_toric_suite():
    with criterion(6, "toric chi(O) = 1, chi(O(D)) = lattice points (10 nef D on P2, P1xP1, F1); F_a: c2 = 4, c1^2 = 8"):
        for name, divisors in NEF.items():
            fan = TORIC_CORPUS[name]
            X = toric_space(fan)
            assert both_chi(6, X, trivial_bundle(X.models, 1, Character.zero(X.rank))) == 1
            assert len(divisors) == 10
            for D in divisors:
                assert nef_on_fan(fan.rays, fan.cones, D), (name, D)
                assert both_chi(6, X, toric_line_bundle(X, D)) == lattice_points(fan.rays, D), (name, D)
        for a in range(4):
            fan = hirzebruch(a)
            X = toric_space(fan)
            c2, c1sq = toric_surface_invariants(fan.rays)
            assert both(6, X, "c2(tangent)") == c2 == 4
            assert both(6, X, "c1(tangent)^2") == c1sq == 8


def test_criterion_07_positive_dimensional_fixed_loci():
    with criterion(7, "rank-1 torus on P^1 x P^2 (trivial on P^2): c3(T) = 6, chi(O(a,b)) formula"):
        Y = product_space(projective_space([(0,), (1,)]), ChowModel((2,)))
        assert Y.rank == 1 and all(F.dim == 2 for F in Y.components)
        assert both(7, Y, "c3(tangent)") == 6
        for a in range(4):
            for b in range(4):
                L = tensor(line_power(Y.bundle("pr1_O(1)"), a), line_power(Y.bundle("pr2_O(1)"), b))
                assert both_chi(7, Y, L) == (a + 1) * (b + 1) * (b + 2) // 2, (a, b)


def _random_monomial(rng, names, k):
    factors, left = [], k
    while left:
        name, rank = rng.choice(names)
        i = rng.randint(1, min(rank, left))
        factors.append(f"c{i}({name})")
        left -= i
    return "*".join(factors)


def test_criterion_08_vanishing():
    with criterion(8, "50 random degree-k < n monomials on P^2..P^4, G(2,4): symbolic sum = 0"):
        rng = random.Random(2024)
        cases = [(projective_space(n), [("O(1)", 1), ("O(-1)", 1), ("tangent", n)]) for n in (2, 3, 4)]
        cases.append((grassmannian(2, 4), [("S", 2), ("Q", 2), ("O(1)", 1), ("tangent", 4)]))
        for i in range(50):
            X, names = cases[i % len(cases)]
            k = rng.randint(1, X.dim - 1)
            spec = _random_monomial(rng, names, k)
            assert integrate_degree(X, spec, k).is_zero(), spec


def test_criterion_09_eigen_chern_oracle():
    with criterion(9, "100 random eigen parts over P^1 x P^1 (rank <= 4, torus rank <= 3): eigen_chern = splitting principle"):
        rng = random.Random(99)
        model = ChowModel((1, 1))
        h1, h2 = model.hyperplane(0), model.hyperplane(1)
        for _ in range(100):
            rank = rng.randint(1, 3)
            r = rng.randint(1, 4)
            ch = Character([rng.randint(-4, 4) for _ in range(rank)])
            chern = [h1 * rng.randint(-4, 4) + h2 * rng.randint(-4, 4), (h1 * h2) * rng.randint(-4, 4)][: min(r, 2)]
            part = EigenPart(ch, r, chern, model)
            assert check_eigen_chern_against_splitting(rank, part), part


def test_criterion_10_modes_and_symmetry():
    with criterion(10, "criteria 1-7 agree across modes; weyl_check x10 on criteria 1 and 3; generic weight independence"):
        missing = [k for k in range(1, 8) if k not in BOTH_RUNS]
        assert not missing, f"criteria {missing} were not run in this session"
        for k, reports in BOTH_RUNS.items():
            for r in reports:
                assert r.mode == "both" and len(r.specializations) == 2
                assert r.symbolic_total is not None and r.symbolic_total.to_rational() == r.total
                for contribs in r.specialized_contributions:
                    assert sum(c.value for c in contribs) == r.total
        rng = random.Random(10)
        P = projective_space(4)
        G = grassmannian(2, 4)

        def degree(X):
            return integrate_number(X, "c1(O(1))^4", mode="both")

        def lines(X):
            return bott_residue(X, "c4(E)", sym_power(bundle_dual(X.bundle("S")), 3), mode="both")

        for _ in range(10):
            assert weyl_check(P, degree, rng.sample(range(5), 5))
            assert weyl_check(G, lines, rng.sample(range(4), 4))
        other = [(3, -1), (0, 5), (7, 2), (-4, 4), (1, 1)]
        assert degree(projective_space(other)).total == degree(P).total == 1
        G2 = grassmannian(2, [(2, 1), (-3, 0), (5, 5), (0, -7)])
        assert lines(G2).total == lines(G).total == 27


def _multisets(values, length):
    return combinations_with_replacement(values, length)


def test_criterion_11_planner():
    coverage = "r=1 all weight multisets l<=6, r=2 l<=2 and r=3 l=1 exhaustive, 300 sampled r in {2,3}, l<=6"
    # the criterion asks for every representation with r <= 3, l <= 6 and
    # weights in [-3, 3]; that is about 2.6e7 weight multisets for r = 2 alone,
    # far outside the runtime budget, so the full statement is not verified
    shortfall = "exhaustive enumeration for r <= 3, l <= 6 is out of budget; only the checked scope agrees"
    with criterion(11, f"planner vs 2^l oracle; worked examples; certify_degrees. Checked: {coverage}", shortfall):
        u = unstable_locus(DiagonalRep(1, [1, -1]))
        assert {s.zeroed for s in u.subspaces} == {frozenset({0}), frozenset({1})} and u.codim == 1
        u = unstable_locus(DiagonalRep(1, [1] * 4))
        assert {s.zeroed for s in u.subspaces} == {frozenset()} and u.codim == 0
        u = unstable_locus(DiagonalRep(1, [1, 1, -1, -1]))
        assert {s.zeroed for s in u.subspaces} == {frozenset({0, 1}), frozenset({2, 3})} and u.codim == 2

        def agree(rank, ws, n=None):
            rep = DiagonalRep(rank, ws)
            for closed, locus in ((False, free_locus(rep)), (True, unstable_locus(rep))):
                subs, codim = brute_force_locus([tuple(w) if rank > 1 else (w,) for w in ws], rank, closed, fast=True)
                assert {s.zeroed for s in locus.subspaces} == subs and locus.codim == codim, (rank, ws, closed)
                if n is not None:
                    got = certify_degrees(rep, n, "closed-free" if closed else "free")
                    assert set(got) == {i for i in range(-codim - 1, n + 1) if codim > n - i}

        vals1 = range(-3, 4)
        for l in range(1, 7):
            for ws in _multisets(vals1, l):
                agree(1, list(ws), n=l)
        vals2 = [(a, b) for a in vals1 for b in vals1]
        for l in (1, 2):
            for ws in _multisets(vals2, l):
                agree(2, list(ws))
        for w in [(a, b, c) for a in vals1 for b in vals1 for c in vals1]:
            agree(3, [w])
        rng = random.Random(11)
        for _ in range(300):
            r = rng.choice((2, 3))
            l = rng.randint(3, 6)
            agree(r, [tuple(rng.randint(-3, 3) for _ in range(r)) for _ in range(l)], n=rng.randint(0, 8))


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
