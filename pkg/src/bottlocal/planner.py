"""Free and closed-orbit loci of diagonal torus representations.

A rank-``r`` torus acts on ``V = k^l`` through characters ``lambda_1..lambda_l``.
A point with support ``S`` (its set of nonzero coordinates) has stabilizer
``cap_{i in S} ker lambda_i``, which is classified by the Smith normal form of
the matrix of support weights, and has a closed orbit iff ``0`` lies in the
relative interior of ``conv{lambda_i : i in S}``, i.e. iff some strictly
positive combination of the support weights vanishes.

The loci are reported through their complements as unions of coordinate
subspaces ``{x_i = 0 : i not in S}`` over the maximal bad supports ``S``.
Indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import prod

from .scalars import Character

TRIVIAL = "trivial"
FINITE = "finite"
POSITIVE_DIMENSIONAL = "positive-dimensional"


@dataclass(frozen=True)
class DiagonalRep:
    rank: int
    weights: tuple

    def __init__(self, rank: int, weights):
        ws = tuple(w if isinstance(w, Character) else Character([w] if isinstance(w, int) else w) for w in weights)
        if rank < 1:
            raise ValueError("torus rank must be positive")
        if not ws:
            raise ValueError("a representation needs at least one coordinate")
        for w in ws:
            if w.rank != rank:
                raise ValueError(f"weight {list(w.coords)} does not have rank {rank}")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "weights", ws)

    @property
    def length(self) -> int:
        return len(self.weights)

    def __add__(self, other: "DiagonalRep") -> "DiagonalRep":
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        return DiagonalRep(self.rank, self.weights + other.weights)


@dataclass(frozen=True)
class CoordinateSubspace:
    """``{x_i = 0 : i in zeroed}`` inside ``k^length``."""

    zeroed: frozenset
    length: int

    @property
    def support(self) -> frozenset:
        return frozenset(range(self.length)) - self.zeroed

    @property
    def codim(self) -> int:
        return len(self.zeroed)

    def __str__(self):
        if not self.zeroed:
            return "V"
        return "{" + ", ".join(f"x{i + 1}=0" for i in sorted(self.zeroed)) + "}"


@dataclass(frozen=True)
class Stabilizer:
    kind: str
    order: int | None = None  # group order when finite

    @property
    def trivial(self) -> bool:
        return self.kind == TRIVIAL

    def __str__(self):
        if self.kind == FINITE:
            return f"finite of order {self.order}"
        return self.kind


@dataclass(frozen=True)
class Locus:
    """Complement of a good locus: maximal bad coordinate subspaces and the
    codimension of their union (``length + 1`` stands for the empty set)."""

    subspaces: tuple
    codim: int

    def as_dict(self):
        return {"codim": self.codim, "subspaces": [sorted(s.zeroed) for s in self.subspaces]}


# -- Smith normal form --------------------------------------------------------


def smith_diagonal(matrix):
    """Nonzero elementary divisors ``d_1 | d_2 | ...`` of an integer matrix."""
    a = [list(map(int, row)) for row in matrix]
    if not a or not a[0]:
        return []
    m, n = len(a), len(a[0])
    divisors = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            changed = False
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    a[t], a[i] = a[i], a[t]
                    changed = True
                    break
            if changed:
                continue
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    for row in a:
                        row[t], row[j] = row[j], row[t]
                    changed = True
                    break
            if changed:
                continue
            # pivot row and column are clear; enforce divisibility
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        divisors.append(abs(a[t][t]))
        t += 1
    return divisors


def stabilizer_of_support(rep: DiagonalRep, support) -> Stabilizer:
    """Stabilizer of a point whose nonzero coordinates are exactly ``support``."""
    rows = [rep.weights[i].coords for i in sorted(support)]
    divisors = smith_diagonal(rows) if rows else []
    if len(divisors) < rep.rank:
        return Stabilizer(POSITIVE_DIMENSIONAL)
    order = prod(divisors)
    return Stabilizer(TRIVIAL, 1) if order == 1 else Stabilizer(FINITE, order)


# -- exact feasibility ----------------------------------------------------------


def _feasible(A, b) -> bool:
    """Is ``{x >= 0 : A x = b}`` nonempty?  Phase one of the simplex method
    with Bland's rule, in exact arithmetic."""
    m = len(A)
    if m == 0:
        return True
    n = len(A[0])
    rows = []
    for i in range(m):
        r = [Fraction(x) for x in A[i]] + [Fraction(int(i == k)) for k in range(m)] + [Fraction(b[i])]
        if r[-1] < 0:
            r = [-x for x in r[:n]] + r[n : n + m] + [-r[-1]]
        rows.append(r)
    basis = [n + i for i in range(m)]
    width = n + m
    # minimize the sum of the artificials; artificial columns never re-enter
    while True:
        cost = [Fraction(0)] * width
        for i, r in enumerate(rows):
            if basis[i] >= n:
                for j in range(width):
                    cost[j] += r[j]
        # reduced costs for nonbasic columns (positive -> can decrease the sum)
        entering = next((j for j in range(width) if j not in basis and j < n and cost[j] > 0), None)
        if entering is None:
            break
        ratios = [(rows[i][-1] / rows[i][entering], basis[i], i) for i in range(m) if rows[i][entering] > 0]
        _, _, leave = min(ratios)
        piv = rows[leave][entering]
        rows[leave] = [x / piv for x in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][entering]:
                f = rows[i][entering]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[leave])]
        basis[leave] = entering
    residual = sum(rows[i][-1] for i in range(m) if basis[i] >= n)
    return residual == 0


def orbit_closed(rep: DiagonalRep, support) -> bool:
    """Does a point with exactly this support have a closed orbit?"""
    S = sorted(support)
    if not S:
        return True
    ws = [rep.weights[i].coords for i in S]
    if rep.rank == 1:
        vals = [w[0] for w in ws]
        if not any(vals):
            return True
        return not (all(v >= 0 for v in vals) or all(v <= 0 for v in vals))
    # strictly positive relation: c_i = 1 + d_i, d >= 0, sum d_i w_i = -sum w_i
    A = [[w[k] for w in ws] for k in range(rep.rank)]
    b = [-sum(w[k] for w in ws) for k in range(rep.rank)]
    return _feasible(A, b)


def support_is_good(rep: DiagonalRep, support, closed: bool) -> bool:
    if not stabilizer_of_support(rep, support).trivial:
        return False
    return orbit_closed(rep, support) if closed else True


def _bad_locus(rep: DiagonalRep, closed: bool) -> Locus:
    l = rep.length
    maximal = []
    for size in range(l, -1, -1):
        for S in combinations(range(l), size):
            S = frozenset(S)
            if any(S <= M for M in maximal):
                continue
            if not support_is_good(rep, S, closed):
                maximal.append(S)
    subspaces = sorted((CoordinateSubspace(frozenset(range(l)) - M, l) for M in maximal), key=lambda s: (s.codim, sorted(s.zeroed)))
    subspaces = tuple(subspaces)
    codim = min((s.codim for s in subspaces), default=l + 1)
    return Locus(subspaces, codim)


def unstable_locus(rep: DiagonalRep) -> Locus:
    """``V - V^f``: points whose orbit is not closed or whose stabilizer is
    nontrivial."""
    return _bad_locus(rep, closed=True)


def free_locus(rep: DiagonalRep) -> Locus:
    """``V - V_free``: points with nontrivial stabilizer."""
    return _bad_locus(rep, closed=False)


def certify_degrees(rep: DiagonalRep, n: int, mode: str = "free") -> range:
    """Degrees ``i <= n`` with ``codim(complement) > n - i``."""
    if mode == "free":
        c = free_locus(rep).codim
    elif mode in ("closed-free", "closed"):
        c = unstable_locus(rep).codim
    else:
        raise ValueError(f"mode must be 'free' or 'closed-free', got {mode!r}")
    return range(n - c + 1, n + 1)
