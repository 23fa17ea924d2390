"""Exact multivariate polynomials over Q with a local monomial order.

Monomials are plain tuples of non-negative ints. Coefficients are
``fractions.Fraction``. The local order puts lower total degree first and
breaks ties lexicographically with x0 > x1 > ... so that 1 is the largest
monomial.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

MultiIndex = tuple[int, ...]

ALIASES = ("x", "y", "z")


def degree(m: MultiIndex) -> int:
    return sum(m)


def local_key(m: MultiIndex) -> tuple:
    """Sort key: a larger key means a larger monomial in the local order."""
    return (-sum(m), m)


def divides(a: MultiIndex, b: MultiIndex) -> bool:
    return all(i <= j for i, j in zip(a, b))


def mono_mul(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(i + j for i, j in zip(a, b))


def mono_div(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(i - j for i, j in zip(a, b))


def mono_lcm(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(max(i, j) for i, j in zip(a, b))


def variable_names(nvars: int) -> list[str]:
    if nvars <= len(ALIASES):
        return list(ALIASES[:nvars])
    return [f"x{i}" for i in range(nvars)]


class Polynomial:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[MultiIndex, object] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = nvars
        clean: dict[MultiIndex, Fraction] = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != nvars or any(e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m} for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, Fraction(0)) + c
                if not clean[m]:
                    del clean[m]
        self._terms = clean
        self._hash = None

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, m: Iterable[int], c=1) -> "Polynomial":
        m = tuple(m)
        return cls(len(m), {m: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range")
        return cls.monomial(tuple(int(j == i) for j in range(nvars)))

    @property
    def terms(self) -> dict[MultiIndex, Fraction]:
        return dict(self._terms)

    @property
    def support(self) -> frozenset[MultiIndex]:
        return frozenset(self._terms)

    def coefficient(self, m: MultiIndex) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def sorted_terms(self) -> list[tuple[MultiIndex, Fraction]]:
        """Terms in decreasing local order (the leading term first)."""
        return sorted(self._terms.items(), key=lambda t: local_key(t[0]), reverse=True)

    def leading_monomial(self) -> MultiIndex:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms, key=local_key)

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term (the order of the germ)."""
        return min((sum(m) for m in self._terms), default=-1)

    def _check(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.nvars, {m: c * other for m, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[MultiIndex, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def permute(self, perm: list[int]) -> "Polynomial":
        """Rename variable i to variable perm[i]."""
        out = {}
        for m, c in self._terms.items():
            new = [0] * self.nvars
            for i, e in enumerate(m):
                new[perm[i]] = e
            out[tuple(new)] = c
        return Polynomial(self.nvars, out)

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


def partial(f: Polynomial, i: int) -> Polynomial:
    if not 0 <= i < f.nvars:
        raise IndexError(f"variable index {i} out of range for {f.nvars} variables")
    out = {}
    for m, c in f._terms.items():
        if m[i]:
            d = list(m)
            d[i] -= 1
            out[tuple(d)] = c * m[i]
    return Polynomial(f.nvars, out)


def jacobian_generators(f: Polynomial) -> list[Polynomial]:
    return [partial(f, i) for i in range(f.nvars)]


def weighted_order(f: Polynomial, w) -> tuple[Fraction, Polynomial]:
    """Minimal weighted degree of f and the principal part attaining it."""
    if f.is_zero():
        raise ValueError("weighted order of the zero polynomial is undefined")
    w = [Fraction(x) for x in w]
    if len(w) != f.nvars or any(x <= 0 for x in w):
        raise ValueError("weights must be positive and one per variable")
    wd = {m: sum(a * e for a, e in zip(w, m)) for m in f.support}
    d = min(wd.values())
    return d, Polynomial(f.nvars, {m: c for m, c in f._terms.items() if wd[m] == d})


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(f: Polynomial, names: list[str] | None = None) -> str:
    """Canonical text: terms in decreasing local order, `*` between factors."""
    if f.is_zero():
        return "0"
    names = names or variable_names(f.nvars)
    parts = []
    for m, c in f.sorted_terms():
        factors = []
        for name, e in zip(names, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not factors:
            body = _format_coeff(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coeff(a)] + factors)
        parts.append((sign, body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += sign + body
    return text


class ParseError(ValueError):
    """Raised for malformed polynomial text; carries the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None or mt.end() == pos:
            break
        if mt.group(1):
            tokens.append(("num", mt.group(1), mt.start(1)))
        elif mt.group(2):
            tokens.append(("name", mt.group(2), mt.start(2)))
        elif mt.group(3):
            tokens.append(("op", mt.group(3), mt.start(3)))
        pos = mt.end()
    tokens.append(("end", "", len(text)))
    return tokens


_VAR = re.compile(r"x(\d+)$")


def _split_name(name: str) -> list[str]:
    """Split glued variable names like ``xy`` or ``x3y`` into single tokens."""
    if re.fullmatch(r"[xyz]+", name):
        return list(name)
    return [name]


class _Parser:
    def __init__(self, text: str, nvars: int, env: Mapping[str, object]):
        self.nvars = nvars
        self.env = {k: Fraction(v) for k, v in env.items()}
        self.tokens = []
        for kind, val, pos in _tokenize(text):
            if kind == "name":
                for offset, piece in enumerate(_split_name(val)):
                    self.tokens.append((kind, piece, pos + offset))
            else:
                self.tokens.append((kind, val, pos))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Polynomial:
        result = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return result

    def expr(self) -> Polynomial:
        sign = 1
        kind, val, pos = self.peek()
        if val in "+-" and kind == "op":
            self.take()
            sign = -1 if val == "-" else 1
        result = self.term() * sign
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in ("+", "-"):
                self.take()
                t = self.term()
                result = result + t if val == "+" else result - t
            else:
                return result

    def term(self) -> Polynomial:
        result = self.power()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.power()
            elif kind == "op" and val == "/":
                self.take()
                d = self.power()
                c = self._as_constant(d, pos)
                if c == 0:
                    raise ParseError("division by zero", pos)
                result = result * (1 / c)
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                result = result * self.power()
            else:
                return result

    def power(self) -> Polynomial:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, epos = self.peek()
            if kind == "num":
                self.take()
                e = Fraction(int(val))
            elif kind == "op" and val == "(":
                e = self._as_constant(self.atom(), epos)
            elif kind == "name" and val in self.env:
                self.take()
                e = self.env[val]
            else:
                raise ParseError("expected an exponent", epos)
            if e.denominator != 1 or e < 0:
                raise ParseError(f"exponent {e} is not a non-negative integer", epos)
            return base ** int(e)
        return base

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "num":
            return Polynomial.constant(self.nvars, int(val))
        if kind == "name":
            return self._name(val, pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)

    def _name(self, name: str, pos: int) -> Polynomial:
        if name in self.env:
            return Polynomial.constant(self.nvars, self.env[name])
        index = None
        if name in ALIASES:
            index = ALIASES.index(name)
            if self.nvars > len(ALIASES):
                raise ParseError(f"alias {name!r} needs at most 3 variables", pos)
        else:
            mt = _VAR.match(name)
            if mt:
                index = int(mt.group(1))
        if index is None:
            raise ParseError(f"unknown symbol {name!r}", pos)
        if index >= self.nvars:
            raise ParseError(f"variable {name!r} outside {self.nvars} variables", pos)
        return Polynomial.variable(self.nvars, index)

    @staticmethod
    def _as_constant(p: Polynomial, pos: int) -> Fraction:
        if any(any(m) for m in p.support):
            raise ParseError("expected a constant", pos)
        return p.coefficient((0,) * p.nvars)


def infer_nvars(text: str) -> int:
    """Smallest variable count that covers every variable named in text."""
    n = 1
    for _, name, _ in _tokenize(text):
        for piece in _split_name(name):
            if piece in ALIASES:
                n = max(n, ALIASES.index(piece) + 1)
            else:
                mt = _VAR.match(piece)
                if mt:
                    n = max(n, int(mt.group(1)) + 1)
    return n


def parse(text: str, nvars: int | None = None, env: Mapping[str, object] | None = None) -> Polynomial:
    """Parse polynomial text such as ``x^6+x^3*y^2+y^5`` or ``x0^2 - 1/2*x1``.

    ``env`` binds extra symbols (family parameters, moduli) to constants.
    """
    if nvars is None:
        nvars = infer_nvars(text)
    return _Parser(text, nvars, env or {}).parse()
