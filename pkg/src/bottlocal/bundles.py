"""Equivariant vector bundles given by their restrictions to fixed components.

Over a component ``F`` with trivial torus action a bundle splits into
eigenbundles ``E_lambda``; an :class:`EigenPart` records the character, the
rank and the ordinary Chern classes ``c_1..c_rank`` of ``E_lambda`` in
``A*(F)``.  An :class:`EquivariantBundle` is the collection of these lists,
one per fixed component, in canonical form: parts sorted by character, at
most one part per character (equal characters are merged with the Whitney
formula).

Symmetric and exterior powers and tensor products go through the
representation-ring picture: a bundle over ``F`` is the formal sum
``sum_lambda e^lambda ch(E_lambda)``, products are convolutions, Adams
operations scale characters and graded pieces, and Newton's identities turn
Adams operations into ``Sym^k`` and ``Lambda^k``.  When every part has rank
one the roots are enumerated directly instead.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from math import factorial

from .chow import ChowClass, ChowModel
from .scalars import Character
from .symmetric import elementary, power_sums


class EigenPart:
    """Eigenbundle data ``(character, rank, (c_1, ..., c_rank))``."""

    __slots__ = ("character", "rank", "chern")

    def __init__(self, character: Character, rank: int, chern=(), model: ChowModel | None = None):
        if rank < 1:
            raise ValueError("eigen parts have positive rank")
        chern = tuple(chern)
        if model is None:
            if not chern:
                raise ValueError("a model is needed to pad missing Chern classes")
            model = chern[0].model
        if len(chern) > rank:
            extra = chern[rank:]
            if any(not c.is_zero() for c in extra):
                raise ValueError(f"Chern class c_j with j > rank={rank} must vanish")
            chern = chern[:rank]
        chern = chern + tuple(model.zero() for _ in range(rank - len(chern)))
        for j, c in enumerate(chern, start=1):
            if c.model != model:
                raise ValueError("Chern classes live in different Chow models")
            if any(sum(m) != j for m in c.terms):
                raise ValueError(f"c_{j} is not of pure degree {j}: {c}")
        self.character = character if isinstance(character, Character) else Character(character)
        self.rank = rank
        self.chern = chern

    @property
    def model(self) -> ChowModel:
        return self.chern[0].model

    def total_chern(self) -> ChowClass:
        total = self.model.one()
        for c in self.chern:
            total = total + c
        return total

    def __eq__(self, other):
        return (
            isinstance(other, EigenPart)
            and self.character == other.character
            and self.rank == other.rank
            and self.chern == other.chern
        )

    def __hash__(self):
        return hash((self.character, self.rank, self.chern))

    def __repr__(self):
        cs = ", ".join(repr(c) for c in self.chern if not c.is_zero())
        return f"EigenPart({self.character.coords}, rank={self.rank}" + (f", c=[{cs}])" if cs else ")")


def _from_total(character, rank, total: ChowClass, model):
    chern = [total.degree_part(j) for j in range(1, rank + 1)]
    return EigenPart(character, rank, chern, model)


def merge_parts(parts, model: ChowModel):
    """Canonical form: one part per character, sorted by character."""
    grouped: dict = {}
    for p in parts:
        if p.character in grouped:
            rank, total = grouped[p.character]
            grouped[p.character] = (rank + p.rank, total * p.total_chern())
        else:
            grouped[p.character] = (p.rank, p.total_chern())
    return tuple(
        _from_total(ch, rank, total, model) for ch, (rank, total) in sorted(grouped.items(), key=lambda kv: kv[0].coords)
    )


class EquivariantBundle:
    """Per-component eigen decompositions of an equivariant vector bundle."""

    __slots__ = ("rank", "parts", "models")

    def __init__(self, parts: dict, models: dict):
        self.models = dict(models)
        if set(parts) != set(self.models):
            raise ValueError("bundle must be given on every fixed component")
        canon = {}
        rank = None
        for cid, plist in parts.items():
            canon[cid] = merge_parts(plist, self.models[cid])
            r = sum(p.rank for p in canon[cid])
            if rank is None:
                rank = r
            elif r != rank:
                raise ValueError(f"rank {r} on component {cid!r} differs from rank {rank}")
        self.rank = rank or 0
        self.parts = canon

    def at(self, cid):
        return self.parts[cid]

    def characters(self, cid):
        return [p.character for p in self.parts[cid]]

    def roots(self, cid):
        """Characters with multiplicity (the equivariant roots over a point)."""
        out = []
        for p in self.parts[cid]:
            out.extend([p.character] * p.rank)
        return out

    def __eq__(self, other):
        return isinstance(other, EquivariantBundle) and self.parts == other.parts and self.models == other.models

    __hash__ = None

    def __repr__(self):
        return f"EquivariantBundle(rank={self.rank}, components={len(self.parts)})"

    # conveniences
    def dual(self):
        return bundle_dual(self)

    def __add__(self, other):
        return bundle_sum(self, other)

    def twist(self, mu):
        return bundle_twist(self, mu)

    def sym(self, k):
        return sym_power(self, k)

    def wedge(self, k):
        return wedge_power(self, k)

    def tensor(self, other):
        return tensor(self, other)


def _map_parts(E, f):
    return EquivariantBundle({cid: [f(p, E.models[cid]) for p in plist] for cid, plist in E.parts.items()}, E.models)


def bundle_dual(E: EquivariantBundle) -> EquivariantBundle:
    def dual(p, model):
        return EigenPart(-p.character, p.rank, [c * ((-1) ** j) for j, c in enumerate(p.chern, 1)], model)

    return _map_parts(E, dual)


def bundle_twist(E: EquivariantBundle, mu: Character) -> EquivariantBundle:
    """Tensor with the trivial line bundle on which the torus acts by ``mu``."""
    mu = mu if isinstance(mu, Character) else Character(mu)
    return _map_parts(E, lambda p, model: EigenPart(p.character + mu, p.rank, p.chern, model))


def bundle_sum(E: EquivariantBundle, F: EquivariantBundle) -> EquivariantBundle:
    if E.models != F.models:
        raise ValueError("bundles live on different fixed loci")
    return EquivariantBundle({cid: E.parts[cid] + F.parts[cid] for cid in E.parts}, E.models)


def trivial_bundle(models: dict, rank: int, character: Character) -> EquivariantBundle:
    return EquivariantBundle({cid: [EigenPart(character, rank, (), m)] for cid, m in models.items()}, models)


# -- representation-ring route ------------------------------------------------


def part_ch(p: EigenPart) -> ChowClass:
    """Ordinary Chern character of an eigen part, truncated at ``dim F``."""
    model = p.model
    n = model.dim
    e = [model.one()] + list(p.chern)
    ps = power_sums(e, n, model.zero())
    ch = model.one() * p.rank
    for k in range(1, n + 1):
        ch = ch + ps[k] * Fraction(1, factorial(k))
    return ch


def parts_to_ch(parts) -> dict:
    return {p.character: part_ch(p) for p in parts}


def ch_to_parts(chs: dict, model: ChowModel):
    out = []
    n = model.dim
    for char, ch in chs.items():
        r = ch.degree_part(0).terms.get((0,) * len(model.factors), 0)
        if r == 0:
            if not ch.is_zero():
                raise ValueError(f"virtual eigen part for character {char.coords}")
            continue
        if r < 0 or Fraction(r).denominator != 1:
            raise ValueError(f"non-integral or negative rank {r} for character {char.coords}")
        r = int(r)
        p = [model.zero()] + [ch.degree_part(k) * factorial(k) for k in range(1, n + 1)]
        e = elementary(p, min(r, n), model.one(), model.zero())
        out.append(EigenPart(char, r, e[1:], model))
    return merge_parts(out, model)


def _ch_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for c1, x in a.items():
        for c2, y in b.items():
            c = c1 + c2
            v = x * y
            out[c] = out[c] + v if c in out else v
    return {c: v for c, v in out.items() if not v.is_zero()}


def _ch_add(a: dict, b: dict, sign=1) -> dict:
    out = dict(a)
    for c, v in b.items():
        out[c] = out[c] + v * sign if c in out else v * sign
    return {c: v for c, v in out.items() if not v.is_zero()}


def _adams(a: dict, j: int) -> dict:
    out = {}
    for c, v in a.items():
        out[c * j] = ChowClass(v.model, {m: x * j ** sum(m) for m, x in v.terms.items()})
    return out


def _power_general(parts, k, model, rank, sign):
    """``Sym^k`` (``sign=+1``) or ``Lambda^k`` (``sign=-1``) via Adams operations."""
    E = parts_to_ch(parts)
    zero_char = Character.zero(rank)
    powers = [{zero_char: model.one()}]
    for m in range(1, k + 1):
        acc: dict = {}
        for j in range(1, m + 1):
            s = 1 if sign > 0 or j % 2 == 1 else -1
            acc = _ch_add(acc, _ch_mul(_adams(E, j), powers[m - j]), s)
        powers.append({c: v * Fraction(1, m) for c, v in acc.items()})
    return ch_to_parts(powers[k], model)


def _line_roots(parts):
    return [(p.character, p.chern[0]) for p in parts]


def _roots_to_parts(roots, model):
    grouped: dict = {}
    for char, y in roots:
        grouped.setdefault(char, []).append(y)
    out = []
    for char, ys in grouped.items():
        total = model.one()
        for y in ys:
            total = total * (model.one() + y)
        out.append(_from_total(char, len(ys), total, model))
    return merge_parts(out, model)


def _sym_enumerate(parts, k, model, rank):
    roots = _line_roots(parts)
    out = []
    for combo in combinations_with_replacement(range(len(roots)), k):
        char = Character.zero(rank)
        y = model.zero()
        for i in combo:
            char = char + roots[i][0]
            y = y + roots[i][1]
        out.append((char, y))
    return _roots_to_parts(out, model)


def _wedge_enumerate(parts, k, model, rank):
    roots = _line_roots(parts)
    out = []
    for combo in combinations(range(len(roots)), k):
        char = Character.zero(rank)
        y = model.zero()
        for i in combo:
            char = char + roots[i][0]
            y = y + roots[i][1]
        out.append((char, y))
    return _roots_to_parts(out, model)


def _torus_rank(E):
    for plist in E.parts.values():
        for p in plist:
            return p.character.rank
    raise ValueError("cannot infer the torus rank of a rank-zero bundle")


def sym_power(E: EquivariantBundle, k: int) -> EquivariantBundle:
    if k < 0:
        raise ValueError("negative symmetric power")
    r = _torus_rank(E)
    out = {}
    for cid, plist in E.parts.items():
        model = E.models[cid]
        if all(p.rank == 1 for p in plist):
            out[cid] = _sym_enumerate(plist, k, model, r)
        else:
            out[cid] = _power_general(plist, k, model, r, +1)
    return EquivariantBundle(out, E.models)


def wedge_power(E: EquivariantBundle, k: int) -> EquivariantBundle:
    if k < 0:
        raise ValueError("negative exterior power")
    r = _torus_rank(E)
    out = {}
    for cid, plist in E.parts.items():
        model = E.models[cid]
        if all(p.rank == 1 for p in plist):
            out[cid] = _wedge_enumerate(plist, k, model, r)
        else:
            out[cid] = _power_general(plist, k, model, r, -1)
    return EquivariantBundle(out, E.models)


def tensor(E: EquivariantBundle, F: EquivariantBundle) -> EquivariantBundle:
    if E.models != F.models:
        raise ValueError("bundles live on different fixed loci")
    out = {}
    for cid in E.parts:
        model = E.models[cid]
        a, b = E.parts[cid], F.parts[cid]
        if all(p.rank == 1 for p in a + b):
            roots = [(x.character + y.character, x.chern[0] + y.chern[0]) for x, y in product(a, b)]
            out[cid] = _roots_to_parts(roots, model)
        else:
            out[cid] = ch_to_parts(_ch_mul(parts_to_ch(a), parts_to_ch(b)), model)
    return EquivariantBundle(out, E.models)


def line_power(L: EquivariantBundle, d: int) -> EquivariantBundle:
    """``L^{(x) d}`` for a line bundle ``L`` and any integer ``d``."""
    if L.rank != 1:
        raise ValueError("line_power needs a line bundle")
    return _map_parts(L, lambda p, model: EigenPart(p.character * d, 1, [p.chern[0] * d], model))


def determinant(E: EquivariantBundle) -> EquivariantBundle:
    return wedge_power(E, E.rank)


def character_multiset(E: EquivariantBundle, cid) -> Counter:
    return Counter({p.character: p.rank for p in E.parts[cid]})
