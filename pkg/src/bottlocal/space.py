"""Smooth complete torus varieties presented through their fixed loci."""

from __future__ import annotations

from .bundles import EigenPart, EquivariantBundle, merge_parts
from .chow import ChowModel
from .scalars import Character


class FixedComponent:
    """A connected component ``F`` of the fixed locus.

    ``normal`` is the eigen decomposition of the normal bundle (all characters
    nonzero) and ``tangent_chern`` holds ``c_1..c_dimF`` of ``TF``.
    """

    __slots__ = ("id", "chow", "normal", "tangent_chern")

    def __init__(self, id, chow: ChowModel, normal, tangent_chern=()):
        normal = merge_parts(normal, chow)
        for p in normal:
            if p.character.is_zero():
                raise ValueError(f"component {id!r}: normal weights must be nonzero")
        tangent_chern = tuple(tangent_chern)
        if len(tangent_chern) > chow.dim:
            if any(not c.is_zero() for c in tangent_chern[chow.dim :]):
                raise ValueError(f"component {id!r}: c_j(TF) must vanish for j > dim F")
            tangent_chern = tangent_chern[: chow.dim]
        tangent_chern += tuple(chow.zero() for _ in range(chow.dim - len(tangent_chern)))
        self.id = id
        self.chow = chow
        self.normal = normal
        self.tangent_chern = tangent_chern

    @property
    def dim(self) -> int:
        return self.chow.dim

    @property
    def codim(self) -> int:
        return sum(p.rank for p in self.normal)

    @property
    def ambient_dim(self) -> int:
        return self.dim + self.codim

    def normal_characters(self):
        return [p.character for p in self.normal]

    def tangent_parts(self, rank: int):
        parts = list(self.normal)
        if self.dim:
            parts.append(EigenPart(Character.zero(rank), self.dim, self.tangent_chern, self.chow))
        return merge_parts(parts, self.chow)

    def euler_characteristic(self) -> int:
        """``chi(F)``, the degree of ``c_top(TF)``."""
        if self.dim == 0:
            return 1
        return int(self.tangent_chern[-1].degree())

    def __repr__(self):
        return f"FixedComponent({self.id!r}, {self.chow!r}, codim={self.codim})"


def projective_tangent_chern(model: ChowModel, i: int):
    """``c(T P^n) = (1 + h)^{n+1}`` pulled back from factor ``i``."""
    n = model.factors[i]
    h = model.hyperplane(i)
    total = (model.one() + h) ** (n + 1)
    return [total.degree_part(j) for j in range(1, n + 1)]


def product_tangent_chern(model: ChowModel):
    """Chern classes of the tangent bundle of ``model`` itself."""
    total = model.one()
    for i, n in enumerate(model.factors):
        h = model.hyperplane(i)
        total = total * (model.one() + h) ** (n + 1)
    return [total.degree_part(j) for j in range(1, model.dim + 1)]


class Space:
    """A smooth complete ``n``-dimensional variety with an action of a rank-``r``
    torus, known through its fixed components and named equivariant bundles.

    The ``"tangent"`` bundle is assembled from the components: its weight-zero
    part is ``TF`` and its other parts are the normal eigen parts.
    """

    def __init__(self, rank: int, dim: int, components, bundles=None, meta=None):
        components = list(components)
        if not components:
            raise ValueError("a complete torus variety has a nonempty fixed locus")
        ids = [F.id for F in components]
        if len(set(ids)) != len(ids):
            raise ValueError("fixed component ids must be distinct")
        for F in components:
            if F.ambient_dim != dim:
                raise ValueError(f"component {F.id!r}: dim F + codim = {F.ambient_dim} != {dim}")
            for p in F.normal:
                if p.character.rank != rank:
                    raise ValueError(f"component {F.id!r}: character rank mismatch")
        self.rank = rank
        self.dim = dim
        self.components = components
        self._by_id = {F.id: F for F in components}
        self.models = {F.id: F.chow for F in components}
        self.meta = dict(meta or {})
        tangent = EquivariantBundle({F.id: F.tangent_parts(rank) for F in components}, self.models)
        self.bundles = {"tangent": tangent}
        for name, E in (bundles or {}).items():
            self.add_bundle(name, E)

    def add_bundle(self, name: str, E: EquivariantBundle):
        if E.models != self.models:
            raise ValueError(f"bundle {name!r} is not defined over this fixed locus")
        if name == "tangent":
            if E != self.bundles["tangent"]:
                raise ValueError("tangent bundle data disagrees with the fixed components")
            return
        self.bundles[name] = E

    def component(self, cid) -> FixedComponent:
        return self._by_id[cid]

    def bundle(self, name: str) -> EquivariantBundle:
        try:
            return self.bundles[name]
        except KeyError:
            raise KeyError(f"unknown bundle {name!r}; known: {sorted(self.bundles)}") from None

    @property
    def tangent(self) -> EquivariantBundle:
        return self.bundles["tangent"]

    def all_normal_characters(self):
        seen = []
        for F in self.components:
            for c in F.normal_characters():
                if c not in seen:
                    seen.append(c)
        return seen

    def euler_number(self) -> int:
        return sum(F.euler_characteristic() for F in self.components)

    def __repr__(self):
        name = self.meta.get("name", "Space")
        return f"<{name}: dim {self.dim}, torus rank {self.rank}, {len(self.components)} fixed components>"
