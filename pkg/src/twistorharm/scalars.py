"""Exact coefficient ring: rationals and polynomials over named parameters.

Every tensor entry in the package is either a :class:`fractions.Fraction`
or a :class:`Polynomial`.  The two mix freely under ``+ - *``; a polynomial
whose parameters have all been substituted collapses to a constant
polynomial, which compares equal to the matching ``Fraction``.

Sign parameters (``kind="sign"``) satisfy ``eps**2 == 1``; their exponents
are reduced mod 2 on every multiplication.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import ConfigError

__all__ = [
    "Rational",
    "Parameter",
    "ParameterSet",
    "Polynomial",
    "Scalar",
    "as_scalar",
    "is_zero",
    "evaluate",
    "substitute",
    "substitute_sign",
    "parse_scalar",
    "format_scalar",
]

Rational = Fraction

REAL = "real"
SIGN = "sign"
_KIND_ALIASES = {"real": REAL, "free-real": REAL, "sign": SIGN}


@dataclass(frozen=True)
class Parameter:
    name: str
    kind: str = REAL

    def __post_init__(self):
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", self.name):
            raise ConfigError(f"invalid parameter name {self.name!r}")
        kind = _KIND_ALIASES.get(self.kind)
        if kind is None:
            raise ConfigError(f"parameter {self.name}: unknown kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)

    @property
    def is_sign(self) -> bool:
        return self.kind == SIGN


class ParameterSet:
    """Ordered collection of uniquely named parameters."""

    __slots__ = ("params", "_index")

    def __init__(self, params: Iterable[Parameter] = ()):
        params = tuple(params)
        index = {}
        for i, p in enumerate(params):
            if p.name in index:
                raise ConfigError(f"duplicate parameter name {p.name!r}")
            index[p.name] = i
        self.params = params
        self._index = index

    @classmethod
    def of(cls, reals: Iterable[str] = (), signs: Iterable[str] = ()) -> "ParameterSet":
        return cls([Parameter(n, REAL) for n in reals] + [Parameter(n, SIGN) for n in signs])

    def __len__(self):
        return len(self.params)

    def __iter__(self):
        return iter(self.params)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, ParameterSet) and self.params == other.params

    def __hash__(self):
        return hash(self.params)

    def __repr__(self):
        return f"ParameterSet({[p.name for p in self.params]})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ConfigError(f"undeclared parameter {name!r}") from None

    def __getitem__(self, name: str) -> Parameter:
        return self.params[self.index(name)]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def var(self, name: str) -> "Polynomial":
        i = self.index(name)
        exps = tuple(1 if k == i else 0 for k in range(len(self.params)))
        return Polynomial(self, {exps: Fraction(1)})

    def const(self, value) -> "Polynomial":
        return Polynomial.constant(self, value)

    @property
    def sign_mask(self) -> tuple[bool, ...]:
        return tuple(p.is_sign for p in self.params)


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class Polynomial:
    """Immutable multivariate polynomial with ``Fraction`` coefficients.

    ``terms`` maps exponent tuples (aligned with ``params``) to nonzero
    coefficients.  The zero polynomial has no terms.
    """

    __slots__ = ("params", "terms", "_hash")

    def __init__(self, params: ParameterSet, terms: Mapping[tuple[int, ...], Fraction] = None):
        self.params = params
        clean = {}
        if terms:
            mask = params.sign_mask
            for exps, c in terms.items():
                if c == 0:
                    continue
                if any(mask):
                    exps = tuple(e % 2 if s else e for e, s in zip(exps, mask))
                c = _to_fraction(c)
                total = clean.get(exps, 0) + c
                if total:
                    clean[exps] = total
                else:
                    clean.pop(exps, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def constant(cls, params: ParameterSet, value) -> "Polynomial":
        value = _to_fraction(value)
        zero = (0,) * len(params)
        return cls(params, {zero: value} if value else {})

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.params == self.params:
                return other
            if other.is_constant():
                return Polynomial.constant(self.params, other.constant_value())
            if self.is_constant():
                return None
            raise ConfigError(f"mismatched parameter sets: {self.params!r} vs {other.params!r}")
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.params, other)
        return NotImplemented

    def _binary(self, other, op):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            # self is a constant over a foreign set: promote self instead
            return op(Polynomial.constant(other.params, self.constant_value()), other)
        return op(self, o)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _add(p, q):
        terms = dict(p.terms)
        for e, c in q.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(p.params, terms)

    @staticmethod
    def _mul(p, q):
        if not p.terms or not q.terms:
            return Polynomial(p.params)
        terms: dict = {}
        for e1, c1 in p.terms.items():
            for e2, c2 in q.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(p.params, terms)

    def __add__(self, other):
        return self._binary(other, Polynomial._add)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.params, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self._binary(other, lambda p, q: Polynomial._add(p, -q))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.params, {e: c * other for e, c in self.terms.items()})
        return self._binary(other, Polynomial._mul)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant():
                raise ZeroDivisionError("division by a non-constant polynomial is not supported")
            other = other.constant_value()
        other = _to_fraction(other)
        if other == 0:
            raise ZeroDivisionError("division by zero")
        return Polynomial(self.params, {e: c / other for e, c in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.constant(self.params, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            if other.params != self.params:
                if self.is_constant() and other.is_constant():
                    return self.constant_value() == other.constant_value()
                return False
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.params, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection -------------------------------------------------------
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.params), Fraction(0))

    def variables(self) -> tuple[str, ...]:
        used = [False] * len(self.params)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(p.name for p, u in zip(self.params, used) if u)

    def degree(self, name: str = None) -> int:
        if not self.terms:
            return -1
        if name is None:
            return max(sum(e) for e in self.terms)
        i = self.params.index(name)
        return max(e[i] for e in self.terms)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in canonical order: lexicographic on parameter names, then degree."""
        names = self.params.names

        def key(item):
            exps = item[0]
            letters = sorted((names[i], k) for i, k in enumerate(exps) if k)
            return (letters, sum(exps))

        return sorted(self.terms.items(), key=key)

    def __repr__(self):
        return f"Polynomial({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, Polynomial]


def as_scalar(value) -> Scalar:
    if isinstance(value, (Fraction, Polynomial)):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"not an exact scalar: {value!r}")


def is_zero(x) -> bool:
    return x == 0


def _check_sign_value(param: Parameter, value):
    if param.is_sign and value not in (1, -1):
        raise ConfigError(f"sign parameter {param.name} must be +1 or -1, got {value}")


def evaluate(p: Scalar, assignment: Mapping[str, object]) -> Fraction:
    """Evaluate at a full assignment; missing parameters raise ConfigError."""
    if not isinstance(p, Polynomial):
        return as_scalar(p)
    values = []
    used = set(p.variables())
    for param in p.params:
        if param.name in assignment:
            v = _to_fraction(assignment[param.name])
            _check_sign_value(param, v)
            values.append(v)
        elif param.name in used:
            raise ConfigError(f"no value assigned to parameter {param.name!r}")
        else:
            values.append(None)
    total = Fraction(0)
    for exps, c in p.terms.items():
        term = c
        for v, k in zip(values, exps):
            if k:
                term *= v**k
        total += term
    return total


def substitute(p: Scalar, assignment: Mapping[str, object]) -> Scalar:
    """Substitute rational values for some parameters; the rest stay symbolic.

    Values may also be polynomials over the same parameter set.
    """
    if not isinstance(p, Polynomial) or not assignment:
        return p
    params = p.params
    idx = {}
    for name, v in assignment.items():
        i = params.index(name)
        if not isinstance(v, Polynomial):
            v = _to_fraction(v)
            _check_sign_value(params.params[i], v)
        idx[i] = v
    if all(not isinstance(v, Polynomial) for v in idx.values()):
        terms: dict = {}
        for exps, c in p.terms.items():
            e = list(exps)
            for i, v in idx.items():
                if e[i]:
                    c = c * v ** e[i]
                    e[i] = 0
            e = tuple(e)
            terms[e] = terms.get(e, 0) + c
        return Polynomial(params, terms)
    result = Polynomial(params)
    for exps, c in p.terms.items():
        term = Polynomial.constant(params, c)
        rest = list(exps)
        for i, v in idx.items():
            if rest[i]:
                term = term * v ** rest[i]
                rest[i] = 0
        mono = Polynomial(params, {tuple(rest): Fraction(1)})
        result = result + term * mono
    return result


def substitute_sign(p: Scalar, name: str, value: int) -> Scalar:
    if isinstance(p, Polynomial):
        param = p.params[name]
        if not param.is_sign:
            raise ConfigError(f"parameter {name!r} is not a sign parameter")
    return substitute(p, {name: value})


# -- printing ---------------------------------------------------------------

def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_scalar(x: Scalar) -> str:
    """Canonical text form, e.g. ``-3/2 - 1/2*a1^2``."""
    if not isinstance(x, Polynomial):
        return _fmt_frac(as_scalar(x))
    if not x.terms:
        return "0"
    names = x.params.names
    pieces = []
    for exps, c in x.sorted_terms():
        mono = "*".join(
            names[i] if k == 1 else f"{names[i]}^{k}"
            for i, k in sorted(((i, k) for i, k in enumerate(exps) if k), key=lambda t: names[t[0]])
        )
        mag = abs(c)
        if not mono:
            body = _fmt_frac(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_frac(mag)}*{mono}"
        pieces.append((c < 0, body))
    first_neg, first = pieces[0]
    out = ("-" if first_neg else "") + first
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text: str, params: ParameterSet):
        self.text = text
        self.params = params
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise ConfigError(f"unexpected character {text[pos]!r} at column {pos + 1} in {text!r}")
            kind = "num" if m.group(1) else "name" if m.group(2) else "op"
            val = m.group(1) or m.group(2) or m.group(3)
            if val == "**":
                val = "^"
            self.tokens.append((kind, val, m.start(m.lastindex) + 1))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text) + 1)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, msg):
        col = self.peek()[2]
        raise ConfigError(f"{msg} at column {col} in {self.text!r}")

    def parse(self):
        if not self.tokens:
            self.error("empty expression")
        value = self.expr()
        if self.peek()[0] is not None:
            self.error(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if isinstance(rhs, Polynomial):
                    if not rhs.is_constant():
                        self.error("division by a non-constant expression")
                    rhs = rhs.constant_value()
                if rhs == 0:
                    self.error("division by zero")
                value = value / rhs
        return value

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, _ = self.peek()
            if kind == "num":
                self.take()
                exp = int(val)
            elif val == "(":
                e = self.atom()
                if isinstance(e, Polynomial):
                    e = e.constant_value() if e.is_constant() else None
                if e is None or Fraction(e).denominator != 1 or e < 0:
                    self.error("exponent must be a non-negative integer")
                exp = int(e)
            else:
                self.error("exponent must be a non-negative integer")
            base = base**exp
        return base

    def atom(self):
        kind, val, _ = self.peek()
        if kind == "num":
            self.take()
            return Polynomial.constant(self.params, int(val))
        if kind == "name":
            self.take()
            if val not in self.params:
                self.error(f"undeclared parameter {val!r}")
            return self.params.var(val)
        if val == "(":
            self.take()
            value = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return value
        self.error("expected a number, parameter or '('")


def parse_scalar(text, params: ParameterSet = None) -> Scalar:
    """Parse the canonical scalar syntax.  Constant results come back as Fraction."""
    params = params or ParameterSet()
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ConfigError(f"expected a scalar expression string, got {text!r}")
    value = _Parser(text, params).parse()
    if value.is_constant():
        return value.constant_value()
    return value
