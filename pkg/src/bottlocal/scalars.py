"""Exact scalars for torus-equivariant computations.

Three layers live here:

* :class:`Character` -- a vector in the character lattice ``Z^r``;
* :class:`TorusPolynomial` -- an element of ``Sym(Z^r) = Q[t_1, ..., t_r]``,
  stored sparsely as ``{exponent tuple: coefficient}``;
* :class:`LocalizedScalar` -- an element of the localization of that ring at
  homogeneous elements of positive degree, restricted to fractions whose
  denominator is a product of linear forms.  Denominators are kept factored,
  so reduction never needs a multivariate gcd: it is repeated exact division
  by linear forms.

Coefficients are ``int`` whenever they are integral and ``Fraction``
otherwise; no floating point is used anywhere.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

_PRIME = (1 << 61) - 1

__all__ = [
    "Character",
    "TorusPolynomial",
    "LocalizedScalar",
    "Specialization",
    "InadmissibleSpecialization",
    "char_to_form",
    "poly_add",
    "poly_mul",
    "poly_scale",
    "truncate_degree",
    "divide_by_form",
    "frac_add",
    "frac_mul",
    "frac_neg",
    "frac_inv",
    "specialize",
    "draw_specialization",
    "SymbolicDomain",
    "NumericDomain",
]


def _norm(c):
    """Collapse integral fractions to ``int`` so the fast int paths are hit."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _div(a, b):
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        if r == 0:
            return q
    return _norm(Fraction(a) / b)


class InadmissibleSpecialization(ZeroDivisionError):
    """A denominator character vanishes at the chosen point."""

    def __init__(self, character, point=None):
        self.character = character
        self.point = point
        msg = f"character {tuple(character.coords)} vanishes"
        if point is not None:
            msg += f" at {tuple(point)}"
        super().__init__(msg)


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class Character:
    """A character of a rank-``r`` split torus, i.e. a vector in ``Z^r``."""

    coords: tuple

    def __init__(self, coords: Iterable[int]):
        object.__setattr__(self, "coords", tuple(int(c) for c in coords))

    @classmethod
    def zero(cls, rank: int) -> "Character":
        return cls((0,) * rank)

    @classmethod
    def basis(cls, rank: int, i: int) -> "Character":
        return cls(tuple(int(j == i) for j in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "Character") -> "Character":
        _check_rank(self, other)
        return Character(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Character") -> "Character":
        _check_rank(self, other)
        return Character(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "Character":
        return Character(-a for a in self.coords)

    def __mul__(self, k: int) -> "Character":
        return Character(k * a for a in self.coords)

    __rmul__ = __mul__

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __lt__(self, other: "Character") -> bool:
        return self.coords < other.coords

    def dot(self, point: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.coords, point))

    def canonical(self) -> tuple[int, "Character"]:
        """Split ``self = scale * primitive`` with the first nonzero entry of
        ``primitive`` positive.  Used to key denominator factors."""
        g = math.gcd(*self.coords)
        if g == 0:
            raise ValueError("the zero character has no canonical form")
        lead = next(c for c in self.coords if c)
        if lead < 0:
            g = -g
        return g, Character(c // g for c in self.coords)

    def __repr__(self) -> str:
        return f"Character({self.coords})"


def _check_rank(a, b):
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} != {b.rank}")


# ---------------------------------------------------------------------------
# polynomials


class TorusPolynomial:
    """Sparse polynomial in ``rank`` variables with exact rational coefficients.

    Instances are immutable; ``terms`` maps exponent tuples to nonzero
    coefficients and must not be mutated.
    """

    __slots__ = ("rank", "terms", "_hash")

    def __init__(self, rank: int, terms=None):
        self.rank = rank
        clean = {}
        if terms:
            for e, c in terms.items():
                c = _norm(c if isinstance(c, (int, Fraction)) else Fraction(c))
                if c:
                    e = tuple(e)
                    if len(e) != rank:
                        raise ValueError(f"exponent {e} has wrong length for rank {rank}")
                    clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, rank, terms):
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.rank = rank
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, rank: int) -> "TorusPolynomial":
        return cls._raw(rank, {})

    @classmethod
    def constant(cls, rank: int, c) -> "TorusPolynomial":
        c = _norm(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
        return cls._raw(rank, {(0,) * rank: c} if c else {})

    @classmethod
    def one(cls, rank: int) -> "TorusPolynomial":
        return cls.constant(rank, 1)

    @classmethod
    def variable(cls, rank: int, i: int) -> "TorusPolynomial":
        e = [0] * rank
        e[i] = 1
        return cls._raw(rank, {tuple(e): 1})

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self):
        return self.terms.get((0,) * self.rank, 0)

    def degrees(self) -> set:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self):
        """Homogeneous degree, ``None`` for zero or inhomogeneous elements."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def leading(self):
        """Largest exponent in lexicographic order and its coefficient."""
        e = max(self.terms)
        return e, self.terms[e]

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TorusPolynomial):
            if other.rank != self.rank:
                raise ValueError(f"rank mismatch: {self.rank} != {other.rank}")
            return other
        if isinstance(other, (int, Fraction)):
            return TorusPolynomial.constant(self.rank, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return TorusPolynomial._raw(self.rank, out)

    __radd__ = __add__

    def __neg__(self):
        return TorusPolynomial._raw(self.rank, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return TorusPolynomial.zero(self.rank)
        out = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple([x + y for x, y in zip(e1, e2)])
                out[e] = get(e, 0) + c1 * c2
        return TorusPolynomial._raw(self.rank, {e: _norm(c) for e, c in out.items() if c})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = TorusPolynomial.one(self.rank)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "TorusPolynomial":
        c = _norm(c)
        if not c:
            return TorusPolynomial.zero(self.rank)
        return TorusPolynomial._raw(self.rank, {e: _norm(v * c) for e, v in self.terms.items()})

    def truncate_degree(self, n: int) -> "TorusPolynomial":
        """Drop every term of total degree greater than ``n``."""
        return TorusPolynomial._raw(self.rank, {e: c for e, c in self.terms.items() if sum(e) <= n})

    def homogeneous_part(self, d: int) -> "TorusPolynomial":
        return TorusPolynomial._raw(self.rank, {e: c for e, c in self.terms.items() if sum(e) == d})

    def evaluate(self, point: Sequence[int]):
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x**k
            total += v
        return Fraction(total)

    def mul_form(self, form: Character) -> "TorusPolynomial":
        """Multiply by the linear form of ``form`` (cheaper than a full product)."""
        out = {}
        get = out.get
        lin = [(i, c) for i, c in enumerate(form.coords) if c]
        for e, v in self.terms.items():
            for i, c in lin:
                f = list(e)
                f[i] += 1
                f = tuple(f)
                out[f] = get(f, 0) + v * c
        return TorusPolynomial._raw(self.rank, {e: _norm(c) for e, c in out.items() if c})

    def _vanishes_mod_p(self, k, a, rest) -> bool:
        """Evaluate mod a prime at a point of the hyperplane ``l = 0``.

        A nonzero value proves ``l`` does not divide the polynomial; zero is
        inconclusive (the caller then divides exactly).
        """
        P = _PRIME
        rng = random.Random(len(self.terms))
        z = [rng.randrange(1, P) for _ in range(self.rank)]
        x = [a * zi % P for zi in z]
        x[k] = -sum(c * z[i] for i, c in rest) % P
        top = max(e for m in self.terms for e in m)
        powers = [[1] * (top + 1) for _ in range(self.rank)]
        for i in range(self.rank):
            row = powers[i]
            for e in range(1, top + 1):
                row[e] = row[e - 1] * x[i] % P
        total = 0
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                if e:
                    v = v * powers[i][e] % P
            total += v
        return total % P == 0

    def divide_by_form(self, form: Character):
        """Exact quotient by the linear form of ``form`` or ``None``.

        Synthetic division in a pivot variable of the form: write
        ``l = a*t_k + m`` and ``p = sum_e p_e t_k^e``; then the quotient
        coefficients satisfy ``q_{e-1} = (p_e - m q_e) / a`` from the top down,
        and ``p`` is divisible iff the final remainder ``p_0 - m q_0`` is zero.
        """
        if form.rank != self.rank:
            raise ValueError("rank mismatch")
        if form.is_zero():
            raise ZeroDivisionError("division by the zero form")
        if not self.terms:
            return self
        scale, prim = form.canonical()
        if scale != 1:
            q = self.divide_by_form(prim)
            return None if q is None else q.scale(Fraction(1, scale))
        coords = form.coords
        k = min((i for i, c in enumerate(coords) if c), key=lambda i: abs(coords[i]))
        a = coords[k]
        rest = [(i, c) for i, c in enumerate(coords) if c and i != k]
        integral = all(type(c) is int for c in self.terms.values())
        if integral and len(self.terms) > 32 and not self._vanishes_mod_p(k, a, rest):
            return None

        # group by the exponent of t_k; inner keys have the k-th entry zeroed
        groups: dict[int, dict] = {}
        for e, c in self.terms.items():
            ek = e[k]
            inner = e[:k] + (0,) + e[k + 1 :]
            groups.setdefault(ek, {})[inner] = c
        top = max(groups)
        if top == 0:
            return None
        quotient = {}
        q_prev: dict = {}
        for ek in range(top, -1, -1):
            current = dict(groups.get(ek, {}))
            # subtract m * q_{ek}
            for inner, c in q_prev.items():
                for i, ci in rest:
                    f = list(inner)
                    f[i] += 1
                    f = tuple(f)
                    v = current.get(f, 0) - ci * c
                    if v:
                        current[f] = v
                    else:
                        current.pop(f, None)
            if ek == 0:
                if current:
                    return None
                break
            q_now = {}
            for inner, c in current.items():
                if integral:
                    # Gauss: a primitive form divides an integral polynomial
                    # only with an integral quotient
                    qv, r = divmod(c, a)
                    if r:
                        return None
                else:
                    qv = _div(c, a)
                q_now[inner] = qv
                e = inner[:k] + (ek - 1,) + inner[k + 1 :]
                quotient[e] = _norm(qv)
            q_prev = q_now
        return TorusPolynomial._raw(self.rank, quotient)

    # -- comparison / display -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TorusPolynomial.constant(self.rank, other)
        if not isinstance(other, TorusPolynomial):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"TorusPolynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"t{i + 1}" if k == 1 else f"t{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{c}*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")


def char_to_form(char: Character) -> TorusPolynomial:
    """The degree-one polynomial ``sum_i char_i t_i``."""
    r = char.rank
    terms = {}
    for i, c in enumerate(char.coords):
        if c:
            e = [0] * r
            e[i] = 1
            terms[tuple(e)] = c
    return TorusPolynomial._raw(r, terms)


def poly_add(p: TorusPolynomial, q: TorusPolynomial) -> TorusPolynomial:
    return p + q


def poly_mul(p: TorusPolynomial, q: TorusPolynomial) -> TorusPolynomial:
    return p * q


def poly_scale(p: TorusPolynomial, c) -> TorusPolynomial:
    return p.scale(c)


def truncate_degree(p: TorusPolynomial, n: int) -> TorusPolynomial:
    return p.truncate_degree(n)


def divide_by_form(p: TorusPolynomial, char: Character):
    """Return ``q`` with ``q * form(char) == p`` or ``None`` if not divisible."""
    return p.divide_by_form(char)


# ---------------------------------------------------------------------------
# localized scalars


def _content(terms):
    """Return ``(scalar, primitive integer terms)`` with ``scalar * prim == terms``
    and the lexicographically largest coefficient of ``prim`` positive."""
    vals = terms.values()
    if any(type(c) is Fraction for c in vals):
        den = reduce(math.lcm, (c.denominator for c in vals if type(c) is Fraction), 1)
        ints = {e: int(c * den) for e, c in terms.items()}
    else:
        den = 1
        ints = terms
    g = math.gcd(*ints.values())
    if ints[max(ints)] < 0:
        g = -g
    if g == 1:
        prim = ints if den == 1 else dict(ints)
    else:
        prim = {e: c // g for e, c in ints.items()}
    return Fraction(g, den), prim


class LocalizedScalar:
    """A fraction ``unit * numerator / prod(form(c)^m)``.

    The denominator is a tuple of ``(primitive Character, multiplicity)``
    pairs sorted by character; signs and contents of the linear forms are
    folded into ``unit``.  The representation is reduced (no denominator form
    divides the numerator) and normalized (the numerator is a primitive
    integer polynomial with positive leading coefficient), so two scalars are
    equal iff their representations are equal.
    """

    __slots__ = ("rank", "unit", "numerator", "denominator")

    def __init__(self, numerator, denominator=(), unit=1):
        if isinstance(numerator, TorusPolynomial):
            rank = numerator.rank
        else:
            raise TypeError("numerator must be a TorusPolynomial")
        den: dict = {}
        unit = Fraction(unit)
        items = denominator.items() if isinstance(denominator, dict) else denominator
        for char, mult in items:
            if not isinstance(char, Character):
                char = Character(char)
            if char.rank != rank:
                raise ValueError("denominator character has wrong rank")
            if mult < 0:
                raise ValueError("denominator multiplicities must be positive")
            if mult == 0:
                continue
            scale, prim = char.canonical()
            unit /= Fraction(scale) ** mult
            den[prim] = den.get(prim, 0) + mult
        self._set(*_reduce(rank, unit, numerator.terms, den))

    def _set(self, rank, unit, num, den):
        self.rank = rank
        self.unit = unit
        self.numerator = num if isinstance(num, TorusPolynomial) else TorusPolynomial._raw(rank, num)
        self.denominator = den

    @classmethod
    def _make(cls, rank, unit, terms, den):
        s = cls.__new__(cls)
        s._set(*_reduce(rank, unit, terms, den))
        return s

    @classmethod
    def constant(cls, rank: int, c) -> "LocalizedScalar":
        return cls._make(rank, Fraction(c), {(0,) * rank: 1}, {})

    @classmethod
    def zero(cls, rank: int) -> "LocalizedScalar":
        return cls._make(rank, Fraction(0), {}, {})

    @classmethod
    def from_polynomial(cls, p: TorusPolynomial) -> "LocalizedScalar":
        return cls._make(p.rank, Fraction(1), p.terms, {})

    @classmethod
    def form(cls, char: Character) -> "LocalizedScalar":
        return cls.from_polynomial(char_to_form(char))

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return self.unit == 0

    def __bool__(self):
        return self.unit != 0

    def is_polynomial(self) -> bool:
        return not self.denominator

    def denominator_degree(self) -> int:
        return sum(m for _, m in self.denominator)

    @property
    def degree(self):
        """Homogeneous degree, ``None`` for zero or inhomogeneous values."""
        d = self.numerator.degree
        return None if d is None else d - self.denominator_degree()

    def is_homogeneous(self) -> bool:
        return self.is_zero() or self.numerator.is_homogeneous()

    def to_polynomial(self) -> TorusPolynomial:
        if self.denominator:
            raise ValueError(f"{self} is not a polynomial")
        return self.numerator.scale(self.unit)

    def to_rational(self) -> Fraction:
        """The value of a constant element."""
        p = self.to_polynomial()
        if not p.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(p.constant_term())

    def characters(self):
        return [c for c, _ in self.denominator]

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LocalizedScalar):
            if other.rank != self.rank:
                raise ValueError("rank mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return LocalizedScalar.constant(self.rank, other)
        if isinstance(other, TorusPolynomial):
            return LocalizedScalar.from_polynomial(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.unit:
            return self
        if not self.unit:
            return other
        r = self.rank
        da, db = dict(self.denominator), dict(other.denominator)
        lcm = dict(da)
        for c, m in db.items():
            if m > lcm.get(c, 0):
                lcm[c] = m
        na = self.numerator
        nb = other.numerator
        for c, m in lcm.items():
            for _ in range(m - da.get(c, 0)):
                na = na.mul_form(c)
            for _ in range(m - db.get(c, 0)):
                nb = nb.mul_form(c)
        ua, ub = self.unit, other.unit
        # integer combination over the common unit denominator
        den = ua.denominator * ub.denominator // math.gcd(ua.denominator, ub.denominator)
        sa = ua.numerator * (den // ua.denominator)
        sb = ub.numerator * (den // ub.denominator)
        total = na.scale(sa) + nb.scale(sb)
        return LocalizedScalar._make(r, Fraction(1, den), total.terms, lcm)

    __radd__ = __add__

    def __neg__(self):
        s = LocalizedScalar.__new__(LocalizedScalar)
        s._set(self.rank, -self.unit, self.numerator, self.denominator)
        return s

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return LocalizedScalar.zero(self.rank)
            s = LocalizedScalar.__new__(LocalizedScalar)
            s._set(self.rank, self.unit * other, self.numerator, self.denominator)
            return s
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        r = self.rank
        if not self.unit or not other.unit:
            return LocalizedScalar.zero(r)
        num = self.numerator * other.numerator
        den = dict(self.denominator)
        for c, m in other.denominator:
            den[c] = den.get(c, 0) + m
        return LocalizedScalar._make(r, self.unit * other.unit, num.terms, den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return frac_inv(self) ** (-k)
        result = LocalizedScalar.constant(self.rank, 1)
        for _ in range(k):
            result = result * self
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * frac_inv(other)

    # -- comparison / display -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, TorusPolynomial)):
            other = self._coerce(other)
        if not isinstance(other, LocalizedScalar):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.unit == other.unit
            and self.numerator.terms == other.numerator.terms
            and self.denominator == other.denominator
        )

    def __hash__(self):
        return hash((self.rank, self.unit, self.numerator, self.denominator))

    def __repr__(self):
        return f"LocalizedScalar({self})"

    def __str__(self):
        num = str(self.numerator.scale(self.unit))
        if not self.denominator:
            return num
        facs = []
        for c, m in self.denominator:
            f = str(char_to_form(c))
            f = f if len(c.coords) - c.coords.count(0) == 1 else f"({f})"
            facs.append(f if m == 1 else f"{f}^{m}")
        if " " in num:
            num = f"({num})"
        den = "*".join(facs)
        return f"{num}/{den}" if len(facs) == 1 else f"{num}/({den})"


def _reduce(rank, unit, terms, den):
    """Cancel denominator forms against the numerator and normalize."""
    if not unit or not terms:
        return rank, Fraction(0), {}, ()
    scale, prim = _content(terms)
    unit = unit * scale
    if den:
        p = TorusPolynomial._raw(rank, prim)
        left = {}
        divided = False
        for char, mult in den.items():
            while mult:
                q = p.divide_by_form(char)
                if q is None:
                    break
                p = q
                mult -= 1
                divided = True
            if mult:
                left[char] = mult
        if divided:
            s2, prim = _content(p.terms)
            unit = unit * s2
        den = tuple(sorted(left.items()))
    else:
        den = ()
    return rank, unit, prim, den


def frac_add(a: LocalizedScalar, b: LocalizedScalar) -> LocalizedScalar:
    return a + b


def frac_mul(a: LocalizedScalar, b: LocalizedScalar) -> LocalizedScalar:
    return a * b


def frac_neg(a: LocalizedScalar) -> LocalizedScalar:
    return -a


def frac_inv(a: LocalizedScalar, candidates: Iterable[Character] = ()) -> LocalizedScalar:
    """Invert ``a`` when its numerator is a constant times a product of linear
    forms.

    The linear factors are searched among the denominator-style
    ``candidates`` (for a rank-one torus every homogeneous numerator is a
    monomial, so no candidates are needed).  Anything else is outside the
    contract of this ring and raises ``ValueError``.
    """
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero")
    r = a.rank
    p = a.numerator
    found: dict = {}
    if r == 1:
        if len(p.terms) == 1:
            (e, c), = p.terms.items()
            if e[0]:
                found[Character((1,))] = e[0]
            p = TorusPolynomial.constant(1, c)
    else:
        for char in candidates:
            if char.is_zero():
                continue
            _, prim = char.canonical()
            while not p.is_constant():
                q = p.divide_by_form(prim)
                if q is None:
                    break
                p = q
                found[prim] = found.get(prim, 0) + 1
    if r > 1 and p.degree == 1 and all(type(c) is int for c in p.terms.values()):
        # a linear numerator is itself a form
        coords = [0] * r
        for e, c in p.terms.items():
            coords[e.index(1)] = c
        scale, prim = Character(coords).canonical()
        found[prim] = found.get(prim, 0) + 1
        p = TorusPolynomial.constant(r, scale)
    if not p.is_constant():
        raise ValueError(f"cannot invert {a}: numerator is not a product of known linear forms")
    c = p.constant_term()
    # 1 / (unit * c * prod(found)) * prod(denominator)
    num = TorusPolynomial.one(r)
    for char, m in a.denominator:
        for _ in range(m):
            num = num.mul_form(char)
    return LocalizedScalar._make(r, 1 / (a.unit * c), num.terms, found)


# ---------------------------------------------------------------------------
# specialization


@dataclass(frozen=True)
class Specialization:
    """An integer point at which the torus variables are evaluated."""

    point: tuple
    seed: int | None = None

    def __init__(self, point, seed=None):
        object.__setattr__(self, "point", tuple(int(x) for x in point))
        object.__setattr__(self, "seed", seed)

    def admits(self, chars: Iterable[Character]) -> bool:
        return all(c.dot(self.point) != 0 for c in chars)


DEFAULT_BOX = 10**6


def draw_specialization(
    rank: int,
    avoid: Iterable[Character] = (),
    seed: int | None = None,
    box: int = DEFAULT_BOX,
    retries: int = 64,
) -> Specialization:
    """Draw a point uniformly from ``[-box, box]^rank`` on which none of the
    characters in ``avoid`` vanish."""
    avoid = list(avoid)
    rng = random.Random(seed)
    for _ in range(retries):
        point = tuple(rng.randint(-box, box) for _ in range(rank))
        for c in avoid:
            if c.dot(point) == 0:
                break
        else:
            return Specialization(point, seed)
    bad = next(c for c in avoid if c.dot(point) == 0)
    raise InadmissibleSpecialization(bad, point)


def specialize(x, s: Specialization) -> Fraction:
    """Exact value of a polynomial or localized scalar at ``s``."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, TorusPolynomial):
        return x.evaluate(s.point)
    if isinstance(x, LocalizedScalar):
        den = 1
        for c, m in x.denominator:
            v = c.dot(s.point)
            if v == 0:
                raise InadmissibleSpecialization(c, s.point)
            den *= v**m
        num = x.numerator.evaluate(s.point)
        return x.unit * num / den
    raise TypeError(f"cannot specialize {type(x).__name__}")


# ---------------------------------------------------------------------------
# scalar domains used by the class arithmetic


class SymbolicDomain:
    """Scalars are :class:`LocalizedScalar` values in ``rank`` variables."""

    symbolic = True

    def __init__(self, rank: int):
        self.rank = rank
        self._zero = LocalizedScalar.zero(rank)
        self._one = LocalizedScalar.constant(rank, 1)

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def const(self, q):
        return LocalizedScalar.constant(self.rank, q)

    def form(self, char: Character):
        return LocalizedScalar.form(char)

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def invert(self, x, candidates=()):
        return frac_inv(x, candidates)

    def __repr__(self):
        return f"SymbolicDomain(rank={self.rank})"


class NumericDomain:
    """Scalars are exact rationals: every character is evaluated at a fixed
    :class:`Specialization`.  Grading is tracked by the class containers."""

    symbolic = False

    def __init__(self, spec: Specialization):
        self.spec = spec
        self.rank = len(spec.point)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def const(self, q):
        return Fraction(q)

    def form(self, char: Character):
        return Fraction(char.dot(self.spec.point))

    def is_zero(self, x) -> bool:
        return x == 0

    def invert(self, x, candidates=()):
        if x == 0:
            raise ZeroDivisionError("inverse of zero at the specialization point")
        return 1 / Fraction(x)

    def __repr__(self):
        return f"NumericDomain({self.spec.point})"
