"""Conversions of package objects to sympy expressions for cross-checks."""

import sympy

from bottlocal.bundles import EigenPart
from bottlocal.classes import eigen_chern
from bottlocal.scalars import Character, LocalizedScalar, SymbolicDomain, TorusPolynomial
from bottlocal.space import FixedComponent

from oracles import splitting_eigen_chern


def torus_symbols(rank):
    return sympy.symbols(f"t1:{rank + 1}")


def scalar_to_sympy(p, syms):
    if isinstance(p, TorusPolynomial):
        return sum(
            (sympy.Rational(c) * sympy.Mul(*[s**e for s, e in zip(syms, m)]) for m, c in p.terms.items()),
            sympy.Integer(0),
        )
    if not isinstance(p, LocalizedScalar):
        return sympy.Rational(p)
    num = scalar_to_sympy(p.numerator, syms) * sympy.Rational(p.unit)
    den = sympy.Integer(1)
    for ch, m in p.denominator:
        den *= sum(c * s for c, s in zip(ch.coords, syms)) ** m
    return num / den


def chow_to_sympy(cls, hs):
    return sum(
        (sympy.Rational(c) * sympy.Mul(*[h**e for h, e in zip(hs, m)]) for m, c in cls.terms.items()),
        sympy.Integer(0),
    )


def local_to_sympy(cls, syms, hs):
    out = sympy.Integer(0)
    for (m, _d), v in cls.terms.items():
        out += scalar_to_sympy(v, syms) * sympy.Mul(*[h**e for h, e in zip(hs, m)])
    return sympy.expand(out)


def truncate_chow(expr, hs, dims):
    """Drop monomials ``h^m`` with some ``m_i > dims_i``."""
    expr = sympy.expand(expr)
    if expr == 0:
        return expr
    p = sympy.Poly(expr, *hs)
    return sum(
        (c * sympy.Mul(*[h**e for h, e in zip(hs, m)]) for m, c in p.terms() if all(e <= d for e, d in zip(m, dims))),
        sympy.Integer(0),
    )


def check_eigen_chern_against_splitting(rank, part):
    """``eigen_chern`` against the splitting-principle expansion, all ``i``,
    for a part over ``P^1 x P^1``."""
    dom = SymbolicDomain(rank)
    model = part.model
    F = FixedComponent("F", model, [EigenPart(Character.basis(rank, 0), 6, (), model)])
    ts = torus_symbols(rank)
    hs = sympy.symbols("h1 h2")
    lam_sym = sum(c * t for c, t in zip(part.character.coords, ts))
    chern_sym = [chow_to_sympy(c, hs) for c in part.chern]
    for i in range(part.rank + 3):
        ours = local_to_sympy(eigen_chern(part, i, F, dom), ts, hs)
        want = truncate_chow(splitting_eigen_chern(part.rank, lam_sym, chern_sym, i), hs, (1, 1)) if i <= part.rank else 0
        if sympy.expand(ours - want) != 0:
            return False
    return True
