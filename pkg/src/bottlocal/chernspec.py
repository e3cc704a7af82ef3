"""Polynomials in Chern classes of named bundles.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := unary ('^' INT)?
    unary   := '-' unary | atom
    atom    := INT | cI(name) | ch(name) | td(name) | '(' expr ')'
    name    := IDENT ['(' ['-'] INT ')']

so ``c1(O(1))^3``, ``c4(E)``, ``ch(L)*td(tangent)`` and ``2*c2(S) - c1(S)^2``
are all valid.  ``cI`` has weighted degree ``I``; ``ch`` and ``td`` are
inhomogeneous.
"""

from __future__ import annotations

import re

from .chow import LocalClass
from .classes import chern_character, todd_class, total_equivariant_chern

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))"
)


class ChernSpecError(ValueError):
    """Malformed expression; ``pos`` is the 0-based character offset."""

    def __init__(self, message, text="", pos=None):
        self.pos = pos
        self.text = text
        if pos is not None:
            message = f"{message} at position {pos + 1}: {text!r}"
        super().__init__(message)


class UnknownBundle(KeyError):
    def __str__(self):
        return self.args[0]


class ChernIndexError(IndexError):
    pass


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ChernSpecError("unexpected character", text, pos)
        start = m.start(m.lastgroup)
        out.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            raise ChernSpecError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ChernSpecError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            node = ("mul", node, self.factor())
        return node

    def factor(self):
        node = self.unary()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            exp = int(self.take("int")[1])
            node = ("pow", node, exp)
        return node

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return ("neg", self.unary())
        return self.atom()

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return ("int", int(val))
        if kind == "op" and val == "(":
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        if kind == "ident":
            self.take()
            m = re.fullmatch(r"c(\d+)", val)
            if m:
                return ("c", int(m.group(1)), self._bundle_arg())
            if val in ("ch", "td"):
                return (val, self._bundle_arg())
            raise ChernSpecError(f"unknown function {val!r}", self.text, pos)
        raise ChernSpecError(f"unexpected {val or 'end of input'!r}", self.text, pos)

    def _bundle_arg(self):
        self.take("op", "(")
        name = self.take("ident")[1]
        if self.peek()[0] == "op" and self.peek()[1] == "(":
            self.take()
            sign = ""
            if self.peek()[1] == "-":
                self.take()
                sign = "-"
            num = self.take("int")[1]
            self.take("op", ")")
            name = f"{name}({sign}{int(num)})"
        self.take("op", ")")
        return name


class ChernSpec:
    """A parsed polynomial in ``c_i(B)``, ``ch(B)`` and ``td(B)``."""

    def __init__(self, text: str):
        self.text = text.strip()
        if not self.text:
            raise ChernSpecError("empty expression")
        self.tree = _Parser(self.text).parse()

    @classmethod
    def of(cls, spec) -> "ChernSpec":
        return spec if isinstance(spec, ChernSpec) else cls(spec)

    def bundles(self) -> set:
        out = set()

        def walk(n):
            if n[0] == "c":
                out.add(n[2])
            elif n[0] in ("ch", "td"):
                out.add(n[1])
            elif n[0] in ("add", "sub", "mul"):
                walk(n[1])
                walk(n[2])
            elif n[0] in ("pow", "neg"):
                walk(n[1])

        walk(self.tree)
        return out

    def weighted_degrees(self):
        """Set of weighted degrees of the monomials, ``None`` if ``ch``/``td``
        occur (inhomogeneous)."""

        def deg(n):
            kind = n[0]
            if kind == "int":
                return {0} if n[1] else set()
            if kind == "c":
                return {n[1]}
            if kind in ("ch", "td"):
                return None
            if kind in ("add", "sub"):
                a, b = deg(n[1]), deg(n[2])
                return None if a is None or b is None else a | b
            if kind == "mul":
                a, b = deg(n[1]), deg(n[2])
                return None if a is None or b is None else {x + y for x in a for y in b}
            if kind == "pow":
                a = deg(n[1])
                if a is None:
                    return None
                out = {0}
                for _ in range(n[2]):
                    out = {x + y for x in out for y in a}
                return out
            if kind == "neg":
                return deg(n[1])
            raise AssertionError(kind)

        return deg(self.tree)

    def is_weighted_homogeneous(self, n: int) -> bool:
        degs = self.weighted_degrees()
        return degs is not None and degs <= {n}

    def __eq__(self, other):
        return isinstance(other, ChernSpec) and self.tree == other.tree

    def __hash__(self):
        return hash(self.tree)

    def __repr__(self):
        return f"ChernSpec({self.text!r})"

    def __str__(self):
        return self.text


def evaluate_spec(spec, F, bundles, domain, bound=None) -> LocalClass:
    """Substitute the restricted equivariant classes at ``F`` into ``spec``."""
    spec = ChernSpec.of(spec)
    bound = F.ambient_dim if bound is None else bound
    cache: dict = {}

    def bundle(name):
        try:
            return bundles[name]
        except KeyError:
            raise UnknownBundle(f"unknown bundle {name!r} in {spec.text!r}") from None

    def total(name):
        key = ("c", name)
        if key not in cache:
            cache[key] = total_equivariant_chern(bundle(name), F, domain, bound)
        return cache[key]

    def ev(n):
        kind = n[0]
        if kind == "int":
            return LocalClass.one(F.id, F.chow, domain, bound) * n[1]
        if kind == "c":
            i, name = n[1], n[2]
            E = bundle(name)
            if i > E.rank:
                raise ChernIndexError(f"c{i}({name}) exceeds rank {E.rank} in {spec.text!r}")
            return total(name).total_degree_part(i)
        if kind == "ch":
            key = ("ch", n[1])
            if key not in cache:
                cache[key] = chern_character(bundle(n[1]), F, domain, bound)
            return cache[key]
        if kind == "td":
            key = ("td", n[1])
            if key not in cache:
                cache[key] = todd_class(bundle(n[1]), F, domain, bound)
            return cache[key]
        if kind == "add":
            return ev(n[1]) + ev(n[2])
        if kind == "sub":
            return ev(n[1]) - ev(n[2])
        if kind == "mul":
            return ev(n[1]) * ev(n[2])
        if kind == "pow":
            return ev(n[1]) ** n[2]
        if kind == "neg":
            return -ev(n[1])
        raise AssertionError(kind)

    return ev(spec.tree)
