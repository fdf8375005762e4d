"""Exact multivariate polynomials over named arc-weight symbols.

A :class:`Polynomial` maps monomials to rational coefficients.  A monomial is
a tuple of symbol names sorted in plain string order, with a symbol repeated
once per power (``x*x*y`` is ``("x", "x", "y")``).  Coefficients are ``int``
when integral and :class:`fractions.Fraction` otherwise, so nothing here ever
touches floating point.

Matrix weights use the symbol names produced by :func:`weight_symbol`:
``v_i_j`` for a single-term entry and ``u_i_j_l`` for the ``l``-th term of a
split entry.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import InputError, MissingSymbolError

Monomial = tuple[str, ...]
Rational = Union[int, Fraction]

_SYMBOL_RE = re.compile(r"^(?:v_(\d+)_(\d+)|u_(\d+)_(\d+)_(\d+))$")


@dataclass(frozen=True, order=True)
class WeightSymbol:
    """Index triple naming one arc weight.

    ``term`` is None for the single-term form ``v_i_j``; otherwise it is the
    1-based term index of ``u_i_j_term``.
    """

    i: int
    j: int
    term: int | None = None

    def __post_init__(self):
        if self.i < 0 or self.j < 0:
            raise InputError(f"weight indices must be non-negative, got ({self.i}, {self.j})")
        if self.term is not None and self.term < 1:
            raise InputError(f"term index must be >= 1, got {self.term}")

    @property
    def name(self) -> str:
        if self.term is None:
            return f"v_{self.i}_{self.j}"
        return f"u_{self.i}_{self.j}_{self.term}"

    @classmethod
    def parse(cls, name: str) -> "WeightSymbol":
        m = _SYMBOL_RE.match(name)
        if m is None:
            raise InputError(f"not a weight symbol name: {name!r}")
        if m.group(1) is not None:
            return cls(int(m.group(1)), int(m.group(2)))
        return cls(int(m.group(3)), int(m.group(4)), int(m.group(5)))

    def __str__(self) -> str:
        return self.name


def weight_symbol(i: int, j: int, term: int | None = None) -> "Polynomial":
    """The polynomial consisting of the single weight symbol for entry (i, j)."""
    return Polynomial.symbol(WeightSymbol(i, j, term).name)


def _clean(c: Rational) -> Rational:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _name_key(name: str):
    # natural order, so v_2_1 sorts before v_10_1
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in re.split(r"(\d+)", name) if p)


def _monomial_key(mono: Monomial):
    return tuple(_name_key(s) for s in sorted(mono, key=_name_key))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def _coerce_coeff(value) -> Rational:
    if isinstance(value, bool):
        raise TypeError("booleans are not polynomial coefficients")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return _clean(value)
    raise TypeError(f"unsupported coefficient type {type(value).__name__}")


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None):
        clean: dict[Monomial, Rational] = {}
        if terms:
            for mono, c in terms.items():
                c = _coerce_coeff(c)
                if c:
                    key = tuple(sorted(mono))
                    total = clean.get(key, 0) + c
                    if total:
                        clean[key] = _clean(total)
                    else:
                        clean.pop(key, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Rational]) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, value: Rational) -> "Polynomial":
        value = _coerce_coeff(value)
        return cls._raw({(): value} if value else {})

    @classmethod
    def symbol(cls, name: str) -> "Polynomial":
        if not name:
            raise InputError("empty symbol name")
        return cls._raw({(name,): 1})

    @classmethod
    def coerce(cls, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            return value
        if isinstance(value, str):
            return parse_polynomial(value)
        return cls.const(value)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Rational]:
        return dict(self._terms)

    def items(self):
        """(monomial, coefficient) pairs in canonical print order."""
        return sorted(self._terms.items(), key=lambda kv: _monomial_key(kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> Rational:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._terms.get((), 0)

    def symbols(self) -> set[str]:
        return {s for mono in self._terms for s in mono}

    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            total = out.get(mono, 0) + c
            if total:
                out[mono] = _clean(total)
            else:
                del out[mono]
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Polynomial.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        if len(b) == 1 and () in b:
            k = b[()]
            if k == 1:
                return self
            return Polynomial._raw({m: _clean(c * k) for m, c in a.items()})
        if len(a) == 1 and () in a:
            return other * self
        out: dict[Monomial, Rational] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                mono = _mono_mul(ma, mb)
                total = out.get(mono, 0) + ca * cb
                if total:
                    out[mono] = total
                else:
                    del out[mono]
        return Polynomial._raw({m: _clean(c) for m, c in out.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        """Division by a non-zero rational constant."""
        other = Polynomial.coerce(other)
        if not other.is_constant() or other.is_zero():
            raise ZeroDivisionError("can only divide by a non-zero constant; use exact_div")
        k = Fraction(other.constant_value())
        return Polynomial._raw({m: _clean(Fraction(c) / k) for m, c in self._terms.items()})

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        """Quotient of an exact polynomial division.

        Uses multivariate long division under graded lexicographic order and
        raises ValueError when the remainder is non-zero.
        """
        divisor = Polynomial.coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if divisor.is_constant():
            return self / divisor
        lead_d, lead_c = _leading(divisor._terms)
        rem = dict(self._terms)
        quot: dict[Monomial, Rational] = {}
        while rem:
            lead_r, c_r = _leading(rem)
            factor = _mono_quotient(lead_r, lead_d)
            if factor is None:
                raise ValueError(f"{divisor} does not divide {self}")
            coeff = _clean(Fraction(c_r) / lead_c)
            quot[factor] = coeff
            for mono, c in divisor._terms.items():
                m = _mono_mul(mono, factor)
                total = rem.get(m, 0) - c * coeff
                if total:
                    rem[m] = _clean(total)
                else:
                    rem.pop(m, None)
        return Polynomial._raw(quot)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == Polynomial.const(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- evaluation and text ----------------------------------------------

    def evaluate(self, assignment: Mapping[str, Rational]) -> Rational:
        total: Rational = 0
        for mono, c in self._terms.items():
            value = c
            for s in mono:
                try:
                    value = value * assignment[s]
                except KeyError:
                    raise MissingSymbolError(s) from None
            total += value
        return _clean(Fraction(total)) if isinstance(total, Fraction) else total

    def subs(self, assignment: Mapping[str, "Polynomial | Rational"]) -> "Polynomial":
        """Substitute some symbols by polynomials; the others are kept."""
        out = ZERO
        for mono, c in self._terms.items():
            term = Polynomial.const(c)
            for s in mono:
                term = term * (Polynomial.coerce(assignment[s]) if s in assignment else Polynomial.symbol(s))
            out = out + term
        return out

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for idx, (mono, c) in enumerate(self.items()):
            neg = c < 0
            mag = -c if neg else c
            body = _format_monomial(mono)
            if not body:
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            if idx == 0:
                parts.append(f"-{text}" if neg else text)
            else:
                parts.append(f" - {text}" if neg else f" + {text}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


def _format_monomial(mono: Monomial) -> str:
    ordered = sorted(mono, key=_name_key)
    out = []
    i = 0
    while i < len(ordered):
        j = i
        while j < len(ordered) and ordered[j] == ordered[i]:
            j += 1
        power = j - i
        out.append(ordered[i] if power == 1 else f"{ordered[i]}^{power}")
        i = j
    return "*".join(out)


def _grlex_key(mono: Monomial):
    return (len(mono), tuple(mono))


def _leading(terms: Mapping[Monomial, Rational]):
    mono = max(terms, key=_grlex_key)
    return mono, terms[mono]


def _mono_quotient(num: Monomial, den: Monomial) -> Monomial | None:
    rest = list(num)
    for s in den:
        try:
            rest.remove(s)
        except ValueError:
            return None
    return tuple(rest)


ZERO = Polynomial._raw({})
ONE = Polynomial._raw({(): 1})


def poly_normalize(terms: Iterable[tuple[Rational, Iterable[str]]]) -> Polynomial:
    """Canonical polynomial from ``(coefficient, symbols)`` pairs.

    Like monomials are combined and zero terms dropped.
    """
    acc: dict[Monomial, Rational] = {}
    for coeff, syms in terms:
        mono = tuple(sorted(syms))
        acc[mono] = acc.get(mono, 0) + _coerce_coeff(coeff)
    return Polynomial(acc)


def poly_equal(a: Polynomial, b: Polynomial) -> bool:
    return a._terms == b._terms


def poly_eval(p: Polynomial, assignment: Mapping[str, Rational]) -> Rational:
    return p.evaluate(assignment)


# -- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise InputError(f"unexpected character {text[pos:].strip()[:1]!r} at offset {pos} in {text!r}")
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num), m.start(1)))
        elif ident is not None:
            tokens.append(("id", ident, m.start(2)))
        else:
            tokens.append(("op", "^" if op == "**" else op, m.start(3)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise InputError(f"unexpected end of expression in {self.text!r}")
        self.i += 1
        return tok

    def fail(self, tok, what):
        raise InputError(f"{what} at offset {tok[2]} in {self.text!r}")

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise InputError("empty polynomial text")
        p = self.expr()
        if self.peek() is not None:
            self.fail(self.peek(), f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while (tok := self.peek()) is not None and tok[0] == "op" and tok[1] in "+-":
            self.take()
            rhs = self.term()
            p = p + rhs if tok[1] == "+" else p - rhs
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while (tok := self.peek()) is not None and tok[0] == "op" and tok[1] in "*/":
            self.take()
            rhs = self.unary()
            if tok[1] == "*":
                p = p * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    self.fail(tok, "division by a non-constant or zero")
                p = p / rhs
        return p

    def unary(self) -> Polynomial:
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] in "+-":
            self.take()
            p = self.unary()
            return -p if tok[1] == "-" else p
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] == "^":
            self.take()
            exp = self.take()
            if exp[0] != "num":
                self.fail(exp, "exponent must be a non-negative integer")
            return base ** exp[1]
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        if tok[0] == "num":
            return Polynomial.const(tok[1])
        if tok[0] == "id":
            return Polynomial.symbol(tok[1])
        if tok[1] == "(":
            p = self.expr()
            close = self.take()
            if close[1] != ")":
                self.fail(close, "expected ')'")
            return p
        self.fail(tok, f"unexpected token {tok[1]!r}")


def parse_polynomial(text: str) -> Polynomial:
    """Parse polynomial text such as ``"2*v_1_1*v_2_2 - 1/3*v_3_3"``.

    Accepts parentheses, ``^``/``**`` integer powers and division by
    constants, so factored expressions parse back to their expansion.
    """
    return _Parser(text).parse()
