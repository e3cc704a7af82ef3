"""Chow rings of fixed components and equivariant classes living on them.

A fixed component is modelled as a product of projective spaces
``P^{n_1} x ... x P^{n_m}``; its Chow ring has the monomial basis
``h_1^{a_1} ... h_m^{a_m}`` with ``0 <= a_i <= n_i`` and the degree map reads
off the coefficient of the top monomial.

:class:`LocalClass` is an element of ``A*(F) (x) Q`` stored by graded pieces:
the key ``(monomial, d)`` holds a scalar of degree ``d`` (a homogeneous
:class:`~bottlocal.scalars.LocalizedScalar` in symbolic mode, a rational
number in specialization mode), so the total degree ``|monomial| + d`` is
known even after characters have been replaced by numbers.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _iproduct


class ChowModel:
    """Chow ring of ``P^{n_1} x ... x P^{n_m}``; the empty product is a point."""

    __slots__ = ("factors",)

    def __init__(self, factors=()):
        factors = tuple(int(n) for n in factors)
        if any(n < 0 for n in factors):
            raise ValueError(f"negative projective dimension in {factors}")
        self.factors = factors

    @property
    def dim(self) -> int:
        return sum(self.factors)

    @property
    def top(self) -> tuple:
        return self.factors

    def is_point(self) -> bool:
        return self.dim == 0

    def monomials(self, degree=None):
        for a in _iproduct(*(range(n + 1) for n in self.factors)):
            if degree is None or sum(a) == degree:
                yield a

    def contains(self, mono) -> bool:
        return all(a <= n for a, n in zip(mono, self.factors))

    def zero(self) -> "ChowClass":
        return ChowClass(self, {})

    def one(self) -> "ChowClass":
        return ChowClass(self, {(0,) * len(self.factors): 1})

    def hyperplane(self, i: int) -> "ChowClass":
        e = [0] * len(self.factors)
        e[i] = 1
        return ChowClass(self, {tuple(e): 1})

    def product(self, other: "ChowModel") -> "ChowModel":
        return ChowModel(self.factors + other.factors)

    def __eq__(self, other):
        return isinstance(other, ChowModel) and self.factors == other.factors

    def __hash__(self):
        return hash(("ChowModel", self.factors))

    def __repr__(self):
        if not self.factors:
            return "ChowModel(pt)"
        return "ChowModel(" + " x ".join(f"P^{n}" for n in self.factors) + ")"


def _mono_mul(model, m1, m2):
    m = tuple([a + b for a, b in zip(m1, m2)])
    for a, n in zip(m, model.factors):
        if a > n:
            return None
    return m


class ChowClass:
    """A rational class in ``A*(F)`` for a :class:`ChowModel` ``F``."""

    __slots__ = ("model", "terms")

    def __init__(self, model: ChowModel, terms=None):
        self.model = model
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != len(model.factors):
                raise ValueError(f"monomial {m} does not fit {model}")
            if c and model.contains(m):
                clean[m] = Fraction(c) if not isinstance(c, int) else c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.model.one() * other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return ChowClass(self.model, out)

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.model, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ChowClass(self.model, {m: c * other for m, c in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(self.model, m1, m2)
                if m is not None:
                    out[m] = out.get(m, 0) + c1 * c2
        return ChowClass(self.model, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = self.model.one()
        for _ in range(k):
            result = result * self
        return result

    def degree_part(self, d: int) -> "ChowClass":
        return ChowClass(self.model, {m: c for m, c in self.terms.items() if sum(m) == d})

    def degree(self) -> Fraction:
        """Coefficient of the top monomial."""
        return Fraction(self.terms.get(self.model.top, 0))

    def pullback(self, model: ChowModel, offset: int) -> "ChowClass":
        """Embed into a product model whose factors start at ``offset``."""
        m_len = len(model.factors)
        out = {}
        for m, c in self.terms.items():
            e = [0] * m_len
            e[offset : offset + len(m)] = m
            out[tuple(e)] = c
        return ChowClass(model, out)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.model.one() * other
        return isinstance(other, ChowClass) and self.model == other.model and self.terms == other.terms

    def __hash__(self):
        return hash((self.model, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        pieces = []
        for m in sorted(self.terms):
            mono = "*".join(f"h{i + 1}" if a == 1 else f"h{i + 1}^{a}" for i, a in enumerate(m) if a)
            c = self.terms[m]
            pieces.append(str(c) if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(pieces)


class ComponentMismatch(ValueError):
    pass


class LocalClass:
    """Graded element of ``A*(F) (x) Q`` truncated at total degree ``bound``."""

    __slots__ = ("component", "model", "domain", "bound", "terms")

    def __init__(self, component, model: ChowModel, domain, bound: int, terms=None):
        self.component = component
        self.model = model
        self.domain = domain
        self.bound = bound
        clean = {}
        is_zero = domain.is_zero
        for (m, d), v in (terms or {}).items():
            if sum(m) + d <= bound and model.contains(m) and not is_zero(v):
                clean[(m, d)] = v
        self.terms = clean

    @classmethod
    def _raw(cls, like: "LocalClass", terms) -> "LocalClass":
        c = cls.__new__(cls)
        c.component = like.component
        c.model = like.model
        c.domain = like.domain
        c.bound = like.bound
        c.terms = terms
        return c

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, component, model, domain, bound) -> "LocalClass":
        return cls(component, model, domain, bound)

    @classmethod
    def one(cls, component, model, domain, bound) -> "LocalClass":
        return cls(component, model, domain, bound, {((0,) * len(model.factors), 0): domain.one()})

    @classmethod
    def scalar(cls, component, model, domain, bound, value, degree: int) -> "LocalClass":
        return cls(component, model, domain, bound, {((0,) * len(model.factors), degree): value})

    @classmethod
    def from_chow(cls, component, chow: ChowClass, domain, bound) -> "LocalClass":
        const = domain.const
        return cls(component, chow.model, domain, bound, {(m, 0): const(c) for m, c in chow.terms.items()})

    def like(self, terms) -> "LocalClass":
        return LocalClass(self.component, self.model, self.domain, self.bound, terms)

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degrees(self) -> set:
        return {sum(m) + d for (m, d) in self.terms}

    def coefficient(self, mono, degree: int):
        return self.terms.get((tuple(mono), degree), self.domain.zero())

    def total_degree_part(self, k: int) -> "LocalClass":
        return LocalClass._raw(self, {key: v for key, v in self.terms.items() if sum(key[0]) + key[1] == k})

    def truncate(self, bound: int) -> "LocalClass":
        return LocalClass(self.component, self.model, self.domain, bound, self.terms)

    def basis_one_part(self) -> dict:
        """Scalar coefficients of the basis element ``1`` keyed by degree."""
        one = (0,) * len(self.model.factors)
        return {d: v for (m, d), v in self.terms.items() if m == one}

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: "LocalClass"):
        if other.component != self.component or other.model != self.model:
            raise ComponentMismatch(f"classes live on different components: {self.component!r} vs {other.component!r}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LocalClass.one(self.component, self.model, self.domain, self.bound) * other
        self._check(other)
        out = dict(self.terms)
        is_zero = self.domain.is_zero
        for key, v in other.terms.items():
            if key in out:
                s = out[key] + v
                if is_zero(s):
                    del out[key]
                else:
                    out[key] = s
            elif sum(key[0]) + key[1] <= self.bound:
                out[key] = v
        return LocalClass._raw(self, out)

    __radd__ = __add__

    def __neg__(self):
        return LocalClass._raw(self, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return LocalClass._raw(self, {})
            return LocalClass._raw(self, {k: v * other for k, v in self.terms.items()})
        self._check(other)
        bound = min(self.bound, other.bound)
        model = self.model
        out: dict = {}
        for (m1, d1), v1 in self.terms.items():
            t1 = sum(m1) + d1
            for (m2, d2), v2 in other.terms.items():
                if t1 + sum(m2) + d2 > bound:
                    continue
                m = _mono_mul(model, m1, m2)
                if m is None:
                    continue
                key = (m, d1 + d2)
                prod = v1 * v2
                if key in out:
                    out[key] = out[key] + prod
                else:
                    out[key] = prod
        is_zero = self.domain.is_zero
        res = LocalClass._raw(self, {k: v for k, v in out.items() if not is_zero(v)})
        res.bound = bound
        return res

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = LocalClass.one(self.component, self.model, self.domain, self.bound)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def map_scalars(self, f, domain) -> "LocalClass":
        """Apply ``f`` to every scalar, landing in ``domain`` (e.g. specialization)."""
        return LocalClass(self.component, self.model, domain, self.bound, {k: f(v) for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LocalClass.one(self.component, self.model, self.domain, self.bound) * other
        if not isinstance(other, LocalClass):
            return NotImplemented
        return self.component == other.component and self.model == other.model and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return f"LocalClass[{self.component!r}](0)"
        pieces = []
        for (m, d) in sorted(self.terms):
            mono = "*".join(f"h{i + 1}" if a == 1 else f"h{i + 1}^{a}" for i, a in enumerate(m) if a)
            v = self.terms[(m, d)]
            pieces.append(f"({v})" + (f"*{mono}" if mono else ""))
        return f"LocalClass[{self.component!r}](" + " + ".join(pieces) + ")"


def class_add(a: LocalClass, b: LocalClass) -> LocalClass:
    return a + b


def class_mul(a: LocalClass, b: LocalClass) -> LocalClass:
    return a * b


def degree_F(a: LocalClass):
    """Push forward to a point: the coefficient of the top monomial of ``F``."""
    top = a.model.top
    total = a.domain.zero()
    for (m, _), v in a.terms.items():
        if m == top:
            total = total + v
    return total
