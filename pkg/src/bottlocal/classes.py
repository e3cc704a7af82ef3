"""Equivariant characteristic classes restricted to a fixed component.

For an eigenbundle ``E_lambda`` of rank ``r`` over a component with trivial
action,

    c_i^T(E_lambda) = sum_{j <= i} binom(r - j, i - j) c_j(E_lambda) lambda^(i - j),

and everything else (total Chern class, normal Euler class, Chern character,
Todd class) is assembled from these with Whitney products and Newton's
identities.  The scalar arithmetic is delegated to a domain object
(:class:`~bottlocal.scalars.SymbolicDomain` or
:class:`~bottlocal.scalars.NumericDomain`).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .bundles import EquivariantBundle
from .chow import LocalClass
from .symmetric import power_sums, todd_log_coefficient


class NotInvertible(ArithmeticError):
    pass


def _parts(E, F):
    if isinstance(E, EquivariantBundle):
        return E.parts[F.id]
    return tuple(E)


def _rank(parts):
    return sum(p.rank for p in parts)


def eigen_chern(part, i: int, F, domain, bound=None) -> LocalClass:
    """``c_i^T`` of one eigen part, as a class of pure total degree ``i``."""
    bound = F.ambient_dim if bound is None else bound
    model = F.chow
    out = LocalClass.zero(F.id, model, domain, bound)
    if i < 0 or i > part.rank:
        return out
    lam = domain.form(part.character)
    for j in range(0, i + 1):
        b = comb(part.rank - j, i - j)
        if not b:
            continue
        cj = model.one() if j == 0 else part.chern[j - 1]
        if cj.is_zero():
            continue
        scalar = lam ** (i - j) if i > j else domain.one()
        term = LocalClass.from_chow(F.id, cj, domain, bound) * LocalClass.scalar(
            F.id, model, domain, bound, scalar, i - j
        )
        out = out + term * b
    return out


def total_equivariant_chern(E, F, domain, bound=None) -> LocalClass:
    """``c^T(E|_F) = prod_lambda (1 + c_1^T(E_lambda) + ...)`` truncated at ``bound``."""
    bound = F.ambient_dim if bound is None else bound
    if F.dim == 0:
        return _point_total_chern(_parts(E, F), F, domain, bound)
    total = LocalClass.one(F.id, F.chow, domain, bound)
    for part in _parts(E, F):
        factor = LocalClass.one(F.id, F.chow, domain, bound)
        for i in range(1, min(part.rank, bound) + 1):
            factor = factor + eigen_chern(part, i, F, domain, bound)
        total = total * factor
    return total


def _point_total_chern(parts, F, domain, bound):
    # over a point every root is a character: e_k of the multiset of forms
    e = [domain.one()] + [domain.zero()] * bound
    top = 0
    for part in parts:
        lam = domain.form(part.character)
        for _ in range(part.rank):
            top = min(top + 1, bound)
            for k in range(top, 0, -1):
                e[k] = e[k] + e[k - 1] * lam
    one = (0,) * len(F.chow.factors)
    return LocalClass(F.id, F.chow, domain, bound, {(one, k): e[k] for k in range(top + 1)})


def equivariant_chern_classes(E, F, domain, bound=None):
    """``[c_0^T, c_1^T, ..., c_rank^T]`` of ``E|_F``."""
    total = total_equivariant_chern(E, F, domain, bound)
    r = _rank(_parts(E, F))
    return [total.total_degree_part(i) for i in range(r + 1)]


def euler_normal(F, domain) -> LocalClass:
    """Top equivariant Chern class of the normal bundle of ``F``."""
    if F.dim == 0:
        # isolated point: the product of the normal weights
        value = domain.one()
        for p in F.normal:
            value = value * domain.form(p.character) ** p.rank
        return LocalClass.scalar(F.id, F.chow, domain, F.ambient_dim, value, F.codim)
    total = total_equivariant_chern(F.normal, F, domain, F.ambient_dim)
    return total.total_degree_part(F.codim)


def invert_class(u: LocalClass, candidates=()) -> LocalClass:
    """Inverse of ``u`` in ``A*(F) (x) Q``.

    The coefficient ``u0`` of the basis element 1 must be a single nonzero
    homogeneous scalar; then ``nu = u0^{-1} u - 1`` only involves monomials of
    positive degree in ``A*(F)`` and is nilpotent, so the geometric series
    stops after ``dim F`` terms.  ``candidates`` are linear forms that may
    divide ``u0`` (needed to invert symbolic scalars).
    """
    domain = u.domain
    basis_one = u.basis_one_part()
    if not basis_one:
        raise NotInvertible(f"{u!r} has zero scalar part")
    if len(basis_one) > 1:
        raise NotInvertible(f"{u!r} has an inhomogeneous scalar part")
    (d, u0), = basis_one.items()
    inv0 = domain.invert(u0, candidates)
    inv0_cls = LocalClass.scalar(u.component, u.model, domain, u.bound, inv0, -d)
    one = LocalClass.one(u.component, u.model, domain, u.bound)
    nu = u * inv0_cls - one
    result = one
    power = one
    for _ in range(u.model.dim):
        power = power * (-nu)
        if power.is_zero():
            break
        result = result + power
    return result * inv0_cls


def _power_sums(E, F, domain, N):
    total = total_equivariant_chern(E, F, domain, N)
    e = [total.total_degree_part(i) for i in range(N + 1)]
    return power_sums(e, N, LocalClass.zero(F.id, F.chow, domain, N))


def chern_character(E, F, domain, N=None) -> LocalClass:
    """``ch^T(E|_F)`` truncated at total degree ``N``."""
    N = F.ambient_dim if N is None else N
    r = _rank(_parts(E, F))
    ch = LocalClass.one(F.id, F.chow, domain, N) * r
    if N <= 0:
        return ch
    p = _power_sums(E, F, domain, N)
    for k in range(1, N + 1):
        ch = ch + p[k] * Fraction(1, factorial(k))
    return ch


def _exp(x: LocalClass, N: int) -> LocalClass:
    # x has no piece of total degree <= 0, so x^j vanishes past the bound
    one = LocalClass.one(x.component, x.model, x.domain, N)
    result, term = one, one
    for j in range(1, N + 1):
        term = term * x * Fraction(1, j)
        if term.is_zero():
            break
        result = result + term
    return result


def todd_class(E, F, domain, N=None) -> LocalClass:
    """``Td^T(E|_F) = prod x / (1 - e^{-x})`` over the equivariant roots."""
    N = F.ambient_dim if N is None else N
    if N <= 0:
        return LocalClass.one(F.id, F.chow, domain, N)
    p = _power_sums(E, F, domain, N)
    log_td = LocalClass.zero(F.id, F.chow, domain, N)
    for k in range(1, N + 1):
        a = todd_log_coefficient(k)
        if a:
            log_td = log_td + p[k] * a
    return _exp(log_td, N)
