"""Standard torus varieties: projective spaces, Grassmannians, smooth complete
toric varieties and products.

Sign conventions:

* on ``P^n`` with weights ``lambda_0..lambda_n`` the fixed point ``p_i`` has
  tangent characters ``lambda_j - lambda_i``, ``O(-1)`` has character
  ``lambda_i`` and ``O(1)`` has ``-lambda_i``;
* on a toric variety the tangent characters at ``x_sigma`` are the dual basis
  ``u_i`` of the cone generators, and the line bundle ``O(D)`` for
  ``D = sum a_rho D_rho`` has the character ``l_sigma`` with
  ``<l_sigma, v_rho> = a_rho`` on the rays of ``sigma``.  With the opposite
  sign one gets ``O(-D)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .bundles import EigenPart, EquivariantBundle
from .chow import ChowModel
from .scalars import Character
from .space import FixedComponent, Space

POINT = ChowModel(())


class RepeatedWeightError(ValueError):
    pass


class FanError(ValueError):
    pass


def _characters(weights):
    chars = [w if isinstance(w, Character) else Character([w] if isinstance(w, int) else w) for w in weights]
    if not chars:
        raise ValueError("at least one weight is required")
    rank = chars[0].rank
    if any(c.rank != rank for c in chars):
        raise ValueError("weights have different ranks")
    return chars


def _check_distinct(chars, what):
    seen = {}
    for i, c in enumerate(chars):
        if c in seen:
            raise RepeatedWeightError(f"{what}: weights {seen[c]} and {i} are both {list(c.coords)}")
        seen[c] = i


def standard_weights(m: int):
    """The coordinate characters ``e_0..e_{m-1}`` of the full diagonal torus."""
    return [Character.basis(m, i) for i in range(m)]


def moment_weights(m: int):
    """``(i, i^2)`` for ``i < m``: a rank-2 subtorus with the same isolated
    fixed points and much smaller symbolic expressions."""
    return [Character((i, i * i)) for i in range(m)]


def _point_bundle(chars_at):
    return EquivariantBundle(
        {cid: [EigenPart(c, 1, (), POINT) for c in chars] for cid, chars in chars_at.items()},
        {cid: POINT for cid in chars_at},
    )


def projective_space(weights) -> Space:
    """``P^n`` under the diagonal action with the given ``n + 1`` weights.

    An integer ``n`` is shorthand for the full torus of rank ``n + 1``.
    """
    if isinstance(weights, int):
        weights = standard_weights(weights + 1)
    lam = _characters(weights)
    n = len(lam) - 1
    if n < 1:
        raise ValueError("projective space needs at least two weights")
    _check_distinct(lam, f"P^{n}")
    comps = [
        FixedComponent(i, POINT, [EigenPart(lam[j] - lam[i], 1, (), POINT) for j in range(n + 1) if j != i])
        for i in range(n + 1)
    ]
    bundles = {
        "O(1)": _point_bundle({i: [-lam[i]] for i in range(n + 1)}),
        "O(-1)": _point_bundle({i: [lam[i]] for i in range(n + 1)}),
    }
    meta = {"constructor": "projective", "name": f"P^{n}", "weights": lam}
    return Space(lam[0].rank, n, comps, bundles, meta)


def grassmannian(k: int, weights) -> Space:
    """``G(k, n)`` of ``k``-planes in a representation with ``n`` distinct weights.

    Fixed points are the ``k``-subsets, in lexicographic order.  Bundles:
    ``S`` (tautological), ``Q`` (quotient), ``O(1) = det S^*``, ``O(-1)``.
    """
    if isinstance(weights, int):
        weights = standard_weights(weights)
    lam = _characters(weights)
    n = len(lam)
    if not 0 < k < n:
        raise ValueError(f"G({k},{n}): need 0 < k < n")
    _check_distinct(lam, f"G({k},{n})")
    subsets = list(combinations(range(n), k))
    comps = []
    for S in subsets:
        rest = [j for j in range(n) if j not in S]
        normal = [EigenPart(lam[j] - lam[i], 1, (), POINT) for i in S for j in rest]
        comps.append(FixedComponent(S, POINT, normal))
    zero = Character.zero(lam[0].rank)

    def total(S):
        out = zero
        for i in S:
            out = out + lam[i]
        return out

    bundles = {
        "S": _point_bundle({S: [lam[i] for i in S] for S in subsets}),
        "Q": _point_bundle({S: [lam[j] for j in range(n) if j not in S] for S in subsets}),
        "O(1)": _point_bundle({S: [-total(S)] for S in subsets}),
        "O(-1)": _point_bundle({S: [total(S)] for S in subsets}),
    }
    meta = {"constructor": "grassmannian", "name": f"G({k},{n})", "k": k, "weights": lam}
    return Space(lam[0].rank, k * (n - k), comps, bundles, meta)


def relabelled(X: Space, perm) -> Space:
    """Rebuild a projective space or Grassmannian with weights ``w[perm[i]]``."""
    kind = X.meta.get("constructor")
    w = X.meta.get("weights")
    if kind not in ("projective", "grassmannian"):
        raise ValueError(f"{X!r} cannot be rebuilt with permuted weights")
    if len(perm) != len(w):
        raise ValueError(f"permutation of length {len(perm)} for {len(w)} weights")
    new = [w[p] for p in perm]
    if kind == "projective":
        return projective_space(new)
    return grassmannian(X.meta["k"], new)


# -- toric varieties ----------------------------------------------------------


def _det(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def _inverse(cols):
    """Inverse of the matrix with the given columns (exact)."""
    n = len(cols)
    m = [[Fraction(cols[j][i]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c])
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return [row[n:] for row in m]


@dataclass(frozen=True)
class Fan:
    """A smooth complete fan, given by primitive rays and maximal cones.

    Smoothness (each cone is a lattice basis) and completeness are checked
    on construction: every wall of a maximal cone must be shared with exactly
    one other maximal cone lying on the opposite side, and a generic point
    must lie in exactly one cone.
    """

    dim: int
    rays: tuple
    cones: tuple

    def __init__(self, rays, cones, dim=None):
        rays = tuple(tuple(int(x) for x in v) for v in rays)
        cones = tuple(tuple(int(i) for i in c) for c in cones)
        if dim is None:
            if not rays:
                raise FanError("a fan needs rays")
            dim = len(rays[0])
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "cones", cones)
        self._validate()

    def _validate(self):
        n = self.dim
        for i, v in enumerate(self.rays):
            if len(v) != n:
                raise FanError(f"ray {i} has length {len(v)}, expected {n}")
            if not any(v):
                raise FanError(f"ray {i} is zero")
        if len(set(self.rays)) != len(self.rays):
            raise FanError("rays must be distinct")
        if not self.cones:
            raise FanError("a fan needs maximal cones")
        for c in self.cones:
            if len(c) != n or len(set(c)) != n:
                raise FanError(f"cone {list(c)} does not have {n} distinct rays")
            if any(i < 0 or i >= len(self.rays) for i in c):
                raise FanError(f"cone {list(c)} refers to an unknown ray")
            if abs(_det([self.rays[i] for i in c])) != 1:
                raise FanError(f"cone {list(c)} is not smooth (its rays are not a lattice basis)")
        if len({frozenset(c) for c in self.cones}) != len(self.cones):
            raise FanError("maximal cones must be distinct")
        self._check_walls()
        self._check_generic_point()

    def _check_walls(self):
        walls: dict = {}
        for c in self.cones:
            for i in c:
                wall = frozenset(c) - {i}
                walls.setdefault(wall, []).append((c, i))
        for wall, users in walls.items():
            if len(users) != 2:
                cone = list(users[0][0])
                raise FanError(f"fan is not complete: the wall {sorted(wall)} of cone {cone} is shared by {len(users)} cones")
            (c1, i1), (c2, i2) = users
            basis = [self.rays[j] for j in sorted(wall)]
            s1 = _det(basis + [self.rays[i1]])
            s2 = _det(basis + [self.rays[i2]])
            if s1 * s2 >= 0:
                raise FanError(f"cones {list(c1)} and {list(c2)} overlap across the wall {sorted(wall)}")

    def _check_generic_point(self):
        rng = random.Random(0)
        for _ in range(32):
            p = [rng.randint(-10**6, 10**6) for _ in range(self.dim)]
            hits = []
            degenerate = False
            for c in self.cones:
                coords = self.cone_coordinates(c, p)
                if any(x == 0 for x in coords):
                    degenerate = True
                    break
                if all(x > 0 for x in coords):
                    hits.append(c)
            if degenerate:
                continue
            if len(hits) != 1:
                raise FanError(f"a generic point lies in {len(hits)} maximal cones")
            return
        raise FanError("could not find a generic point")  # pragma: no cover

    def cone_coordinates(self, cone, p):
        inv = _inverse([self.rays[i] for i in cone])
        return [sum(r[j] * p[j] for j in range(self.dim)) for r in inv]

    def dual_basis(self, cone):
        """``u_1..u_n`` with ``<u_i, v_j> = delta_ij`` for the rays of ``cone``."""
        inv = _inverse([self.rays[i] for i in cone])
        return [tuple(int(x) for x in row) for row in inv]


def projective_fan(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return Fan(rays, cones)


def hirzebruch(a: int) -> Fan:
    """``F_a`` with rays ``e1, e2, -e1 + a e2, -e2``."""
    return Fan([(1, 0), (0, 1), (-1, a), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)])


def product_fan(f: Fan, g: Fan) -> Fan:
    rays = [v + (0,) * g.dim for v in f.rays] + [(0,) * f.dim + w for w in g.rays]
    off = len(f.rays)
    cones = [c + tuple(off + j for j in d) for c in f.cones for d in g.cones]
    return Fan(rays, cones)


def _apply(weights, m):
    if weights is None:
        return Character(m)
    return Character(sum(row[j] * m[j] for j in range(len(m))) for row in weights)


def toric_space(fan: Fan, weights=None) -> Space:
    """The toric variety of ``fan``.

    ``weights`` optionally restricts to a subtorus: an ``r x n`` integer
    matrix sending a character ``m`` of the big torus to ``weights @ m``.
    """
    if weights is not None:
        weights = [tuple(int(x) for x in row) for row in weights]
        if any(len(row) != fan.dim for row in weights):
            raise ValueError(f"weight matrix must have {fan.dim} columns")
    rank = fan.dim if weights is None else len(weights)
    comps = []
    for c in fan.cones:
        chars = [_apply(weights, u) for u in fan.dual_basis(c)]
        for i, ch in enumerate(chars):
            if ch.is_zero():
                raise ValueError(f"cone {list(c)}: tangent character {i} vanishes on the chosen subtorus")
        comps.append(FixedComponent(c, POINT, [EigenPart(ch, 1, (), POINT) for ch in chars]))
    meta = {"constructor": "toric", "name": f"toric({len(fan.rays)} rays)", "fan": fan, "weights": weights}
    return Space(rank, fan.dim, comps, None, meta)


def toric_line_bundle(X: Space, D) -> EquivariantBundle:
    """``O(D)`` for ``D = sum a_rho D_rho`` (one coefficient per ray)."""
    fan = X.meta.get("fan")
    if fan is None:
        raise ValueError(f"{X!r} is not a toric space")
    a = [int(x) for x in D]
    if len(a) != len(fan.rays):
        raise ValueError(f"divisor has {len(a)} coefficients, fan has {len(fan.rays)} rays")
    chars = {}
    for c in fan.cones:
        u = fan.dual_basis(c)
        # l = sum_i a_{c_i} u_i satisfies <l, v_{c_j}> = a_{c_j}
        m = [sum(a[c[i]] * u[i][k] for i in range(fan.dim)) for k in range(fan.dim)]
        chars[c] = [_apply(X.meta["weights"], m)]
    return _point_bundle(chars)


# -- products -----------------------------------------------------------------


def _pad(ch: Character, before: int, after: int) -> Character:
    return Character((0,) * before + ch.coords + (0,) * after)


def _pull_part(p: EigenPart, model: ChowModel, offset: int, before: int, after: int) -> EigenPart:
    return EigenPart(_pad(p.character, before, after), p.rank, [c.pullback(model, offset) for c in p.chern], model)


def _trivial_space(model: ChowModel) -> Space:
    from .space import product_tangent_chern

    comp = FixedComponent(0, model, [], product_tangent_chern(model))
    bundles = {}
    names = ["O(1)"] if len(model.factors) == 1 else [f"O{i + 1}(1)" for i in range(len(model.factors))]
    for i, name in enumerate(names):
        h = model.hyperplane(i)
        bundles[name] = EquivariantBundle({0: [EigenPart(Character(()), 1, [h], model)]}, {0: model})
        bundles[name.replace("(1)", "(-1)")] = EquivariantBundle({0: [EigenPart(Character(()), 1, [-h], model)]}, {0: model})
    return Space(0, model.dim, [comp], bundles, {"constructor": "trivial", "name": repr(model)})


def product_space(X: Space, Y) -> Space:
    """``X x Y`` with the product torus (torus coordinates concatenated).

    ``Y`` may be a :class:`ChowModel`, meaning a product of projective spaces
    with trivial action.  Named bundles are pulled back as ``pr1_<name>`` and
    ``pr2_<name>``; a trivial factor supplies its hyperplane bundles.
    """
    if isinstance(Y, ChowModel):
        Y = _trivial_space(Y)
    rx, ry = X.rank, Y.rank
    comps = []
    models = {}
    for F in X.components:
        for G in Y.components:
            model = F.chow.product(G.chow)
            off = len(F.chow.factors)
            normal = [_pull_part(p, model, 0, 0, ry) for p in F.normal]
            normal += [_pull_part(p, model, off, rx, 0) for p in G.normal]
            cF = model.one()
            for c in F.tangent_chern:
                cF = cF + c.pullback(model, 0)
            cG = model.one()
            for c in G.tangent_chern:
                cG = cG + c.pullback(model, off)
            total = cF * cG
            tangent = [total.degree_part(j) for j in range(1, model.dim + 1)]
            cid = (F.id, G.id)
            comps.append(FixedComponent(cid, model, normal, tangent))
            models[cid] = model
    bundles = {}
    for prefix, S, first in (("pr1_", X, True), ("pr2_", Y, False)):
        for name, E in S.bundles.items():
            if name == "tangent":
                continue
            parts = {}
            for F in X.components:
                for G in Y.components:
                    cid = (F.id, G.id)
                    model = models[cid]
                    if first:
                        parts[cid] = [_pull_part(p, model, 0, 0, ry) for p in E.parts[F.id]]
                    else:
                        parts[cid] = [_pull_part(p, model, len(F.chow.factors), rx, 0) for p in E.parts[G.id]]
            bundles[prefix + name] = EquivariantBundle(parts, models)
    meta = {
        "constructor": "product",
        "name": f"{X.meta.get('name', 'X')} x {Y.meta.get('name', 'Y')}",
        "factors": (X, Y),
    }
    return Space(rx + ry, X.dim + Y.dim, comps, bundles, meta)


__all__ = [
    "Fan",
    "FanError",
    "RepeatedWeightError",
    "grassmannian",
    "hirzebruch",
    "moment_weights",
    "product_fan",
    "product_space",
    "projective_fan",
    "projective_space",
    "relabelled",
    "standard_weights",
    "toric_line_bundle",
    "toric_space",
]
