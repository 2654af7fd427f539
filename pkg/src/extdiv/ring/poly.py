"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, Tuple, Union

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]

ORDERS = ("grevlex", "lex")


def _grevlex_key(exps: Monomial):
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _lex_key(exps: Monomial):
    return exps


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def monomial_quotient(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_product(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class RingCtx:
    """A polynomial ring QQ[variables] together with a monomial order."""

    variables: Tuple[str, ...]
    order: str = "grevlex"

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("variable names must be distinct")
        for v in self.variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise ValueError(f"invalid variable name {v!r}")
        if self.order not in ORDERS:
            raise ValueError(f"unknown monomial order {self.order!r}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def key(self) -> Callable[[Monomial], tuple]:
        return _grevlex_key if self.order == "grevlex" else _lex_key

    def zero(self) -> "Poly":
        return Poly(self)

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c: Scalar) -> "Poly":
        return Poly(self, {(0,) * self.nvars: Fraction(c)})

    def var(self, name: str) -> "Poly":
        i = self.variables.index(name)
        exps = [0] * self.nvars
        exps[i] = 1
        return Poly(self, {tuple(exps): Fraction(1)})

    def gens(self) -> Tuple["Poly", ...]:
        return tuple(self.var(v) for v in self.variables)

    def monomial(self, exps: Monomial, coeff: Scalar = 1) -> "Poly":
        return Poly(self, {tuple(exps): Fraction(coeff)})

    def parse(self, text: str) -> "Poly":
        return parse_poly(text, self)

    def to_json(self) -> dict:
        return {"variables": list(self.variables), "order": self.order}


class Poly:
    """Immutable polynomial stored as a map from exponent tuples to nonzero Fractions."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingCtx, terms: Dict[Monomial, Scalar] | None = None):
        self.ring = ring
        clean = {}
        if terms:
            n = ring.nvars
            for m, c in terms.items():
                if c:
                    if len(m) != n:
                        raise ValueError("monomial length does not match ring")
                    clean[m] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: RingCtx, terms: Dict[Monomial, Fraction]) -> "Poly":
        # caller guarantees: no zero coefficients, Fraction values
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # -- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=self.ring.key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]), reverse=True)

    def variables_used(self) -> set:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return used

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError("polynomials belong to different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Poly._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw(self.ring, {})
            return Poly._raw(self.ring, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return Poly._raw(self.ring, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_term(self, mono: Monomial, coeff: Fraction) -> "Poly":
        return Poly._raw(
            self.ring,
            {tuple(a + b for a, b in zip(m, mono)): c * coeff for m, c in self.terms.items()},
        )

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self * (1 / self.leading_coefficient())

    def diff(self, var: Union[int, str]) -> "Poly":
        i = self.ring.variables.index(var) if isinstance(var, str) else var
        terms = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                terms[tuple(mm)] = c * m[i]
        return Poly._raw(self.ring, terms)

    # -- comparison ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- printing ------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


def _format_monomial(exps: Monomial, names: Iterable[str]) -> str:
    parts = []
    for e, v in zip(exps, names):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def _format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    """Render in the canonical text grammar, terms in decreasing monomial order."""
    if not p.terms:
        return "0"
    out = []
    for i, (m, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = _format_monomial(m, p.ring.variables)
        if not mono:
            body = _format_fraction(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_fraction(a)}*{mono}"
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


class PolyParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:
            break
        num, name, op = mt.groups()
        start = mt.start(1) if num else mt.start(2) if name else mt.start(3)
        if num is not None:
            tokens.append(("num", int(num), start))
        elif name is not None:
            tokens.append(("var", name, start))
        else:
            if op not in "+-*/^()":
                raise PolyParseError(f"unexpected character {op!r} at position {start}")
            tokens.append((op, op, start))
        pos = mt.end()
    return tokens


class _Parser:
    # expr   := ['+'|'-'] term (('+'|'-') term)*
    # term   := factor (['*'] factor)*
    # factor := atom ['^' int]
    # atom   := int ['/' int] | var | '(' expr ')'

    def __init__(self, text: str, ring: RingCtx):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, kind=None):
        tok = self.peek()
        if tok is None:
            raise PolyParseError(f"unexpected end of input in {self.text!r}")
        if kind is not None and tok[0] != kind:
            raise PolyParseError(f"expected {kind!r} at position {tok[2]} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if not self.tokens:
            raise PolyParseError("empty polynomial")
        p = self.expr()
        if self.peek() is not None:
            raise PolyParseError(f"unexpected token at position {self.peek()[2]} in {self.text!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        tok = self.peek()
        if tok is not None and tok[0] in "+-":
            self.take()
            sign = -1 if tok[0] == "-" else 1
        acc = self.term() * sign
        while (tok := self.peek()) is not None and tok[0] in "+-":
            self.take()
            t = self.term()
            acc = acc + t if tok[0] == "+" else acc - t
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while (tok := self.peek()) is not None:
            if tok[0] == "*":
                self.take()
                acc = acc * self.factor()
            elif tok[0] in ("num", "var", "("):
                acc = acc * self.factor()
            else:
                break
        return acc

    def factor(self) -> Poly:
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok[0] == "^":
            self.take()
            exp = self.take("num")[1]
            base = base ** exp
        return base

    def atom(self) -> Poly:
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            nxt = self.peek()
            if nxt is not None and nxt[0] == "/":
                self.take()
                den = self.take("num")[1]
                if den == 0:
                    raise PolyParseError(f"zero denominator at position {pos}")
                return self.ring.const(Fraction(val, den))
            return self.ring.const(val)
        if kind == "var":
            if val not in self.ring.variables:
                raise PolyParseError(f"unknown variable {val!r} at position {pos}")
            return self.ring.var(val)
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise PolyParseError(f"unexpected {val!r} at position {pos} in {self.text!r}")


def parse_poly(text: str, ring: RingCtx) -> Poly:
    """Parse text such as ``3/2*x^2*y - z + 1`` into a polynomial of ``ring``."""
    return _Parser(text, ring).parse()
