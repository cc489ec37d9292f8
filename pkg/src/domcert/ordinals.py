"""Ordinals below epsilon_0 in Cantor normal form.

An ordinal is a sum  w^e1 * c1 + ... + w^ek * ck  with ordinal exponents
e1 > e2 > ... > ek and integer coefficients ci >= 1; the empty sum is 0.
The representation is unique, so structural equality is ordinal equality.

Fundamental sequences for limit ordinals follow the Wainer assignment:

    w[n] = n
    (g + w^(b+1))[n] = g + w^b * n
    (g + w^l)[n] = g + w^(l[n])       for l a limit

which is strictly increasing in n with supremum the ordinal itself.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterator, Optional


class OrdinalError(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self) -> None:
        prev: Optional[Ordinal] = None
        for exp, coeff in self.terms:
            if coeff < 1:
                raise OrdinalError("coefficients must be >= 1")
            if prev is not None and not exp < prev:
                raise OrdinalError("exponents must be strictly decreasing")
            prev = exp

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = from_int(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __lt__(self, other: "Ordinal | int") -> bool:
        if isinstance(other, int):
            other = from_int(other)
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            if e1 != e2:
                return e1 < e2
            if c1 != c2:
                return c1 < c2
        return len(self.terms) < len(other.terms)

    def __add__(self, other: "Ordinal | int") -> "Ordinal":
        if isinstance(other, int):
            other = from_int(other)
        if not other.terms:
            return self
        head_exp = other.terms[0][0]
        kept = [t for t in self.terms if t[0] > head_exp]
        merged = list(other.terms)
        if len(kept) < len(self.terms) and self.terms[len(kept)][0] == head_exp:
            merged[0] = (head_exp, self.terms[len(kept)][1] + other.terms[0][1])
        return Ordinal(tuple(kept) + tuple(merged))

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal[{format_ordinal(self)}]"

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero)

    def as_int(self) -> int:
        if not self.terms:
            return 0
        if not self.is_finite:
            raise OrdinalError(f"{self} is infinite")
        return self.terms[0][1]

    def classify(self) -> str:
        """One of 'zero', 'successor', 'limit'."""
        if not self.terms:
            return "zero"
        if self.terms[-1][0].is_zero:
            return "successor"
        return "limit"

    def pred(self) -> "Ordinal":
        if self.classify() != "successor":
            raise OrdinalError(f"{self} is not a successor")
        exp, coeff = self.terms[-1]
        if coeff == 1:
            return Ordinal(self.terms[:-1])
        return Ordinal(self.terms[:-1] + ((exp, coeff - 1),))


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise OrdinalError("ordinals are nonnegative")
    if n == 0:
        return ZERO
    return Ordinal(((ZERO, n),))


def omega_power(exp: Ordinal, coeff: int = 1) -> Ordinal:
    return Ordinal(((exp, coeff),))


OMEGA = omega_power(ONE)


def compare(a: Ordinal, b: Ordinal) -> str:
    """'less', 'equal' or 'greater'."""
    if a == b:
        return "equal"
    return "less" if a < b else "greater"


def fundamental_sequence(xi: Ordinal, n: int) -> Ordinal:
    """The n-th member (n >= 1) of the canonical sequence converging to limit xi."""
    if n < 1:
        raise OrdinalError("fundamental sequence index starts at 1")
    if xi.classify() != "limit":
        raise OrdinalError(f"{xi} is not a limit ordinal")
    exp, coeff = xi.terms[-1]
    prefix = xi.terms[:-1] if coeff == 1 else xi.terms[:-1] + ((exp, coeff - 1),)
    gamma = Ordinal(prefix)
    if exp.classify() == "successor":
        return gamma + omega_power(exp.pred(), n)
    return gamma + omega_power(fundamental_sequence(exp, n))


_TOKEN = re.compile(r"\s*(w|\d+|\^|\*|\+|\(|\))")


def _tokenize(text: str) -> Iterator[str]:
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise OrdinalError(f"bad character at {text[pos:]!r}")
        yield m.group(1)
        pos = m.end()


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.i = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise OrdinalError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.take()
        if got != tok:
            raise OrdinalError(f"expected {tok!r}, got {got!r}")

    def nat(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise OrdinalError(f"expected a number, got {tok!r}")
        if tok != "0" and tok.startswith("0"):
            raise OrdinalError("leading zeros are not canonical")
        return int(tok)

    def atom(self) -> Ordinal:
        tok = self.peek()
        if tok == "(":
            self.take()
            value = self.ordinal()
            self.expect(")")
            return value
        if tok == "w":
            self.take()
            if self.peek() == "^":
                self.take()
                return omega_power(self.atom())
            return OMEGA
        n = self.nat()
        if n == 0:
            raise OrdinalError("0 is not a canonical exponent or term here")
        return from_int(n)

    def term(self) -> tuple[Ordinal, int]:
        tok = self.peek()
        if tok == "w":
            self.take()
            exp = ONE
            if self.peek() == "^":
                self.take()
                exp = self.atom()
                if exp.is_zero:
                    raise OrdinalError("w^0 is not canonical")
            coeff = 1
            if self.peek() == "*":
                self.take()
                coeff = self.nat()
                if coeff < 2:
                    raise OrdinalError("explicit coefficient must be >= 2")
            return exp, coeff
        n = self.nat()
        if n == 0:
            raise OrdinalError("0 cannot appear inside a sum")
        if self.peek() == "*":
            raise OrdinalError("coefficients attach to w-powers only")
        return ZERO, n

    def ordinal(self) -> Ordinal:
        if self.peek() == "0":
            self.take()
            if self.peek() not in (None, ")"):
                raise OrdinalError("0 cannot appear inside a sum")
            return ZERO
        terms = [self.term()]
        while self.peek() == "+":
            self.take()
            terms.append(self.term())
        try:
            return Ordinal(tuple(terms))
        except OrdinalError as exc:
            raise OrdinalError(f"non-canonical term order: {exc}") from exc


def parse_ordinal(text: str) -> Ordinal:
    """Parse the grammar `0 | term(+term)*` with terms `w[^atom][*nat] | nat`.

    Composite exponents require parentheses, e.g. `w^(w+1)`.  Input must be
    canonical: strictly decreasing exponents, coefficients >= 1 (written only
    when >= 2), no stray zeros.
    """
    parser = _Parser(text)
    value = parser.ordinal()
    if parser.peek() is not None:
        raise OrdinalError(f"trailing input: {parser.tokens[parser.i:]}")
    return value


def _format_exponent(exp: Ordinal) -> str:
    simple = len(exp.terms) == 1 and exp.terms[0][1] == 1
    if exp.is_finite or simple:
        return format_ordinal(exp)
    return f"({format_ordinal(exp)})"


def format_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if exp.is_zero:
            parts.append(str(coeff))
            continue
        if exp == ONE:
            base = "w"
        else:
            base = f"w^{_format_exponent(exp)}"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return "+".join(parts)
