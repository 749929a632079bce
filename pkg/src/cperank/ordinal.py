"""Ordinals below epsilon_0 in Cantor normal form.

An :class:`Ordinal` is an immutable tuple of ``(exponent, coefficient)``
terms with strictly decreasing exponents and positive integer coefficients.
Canonical form is enforced on construction, so equality is structural.

Text format (round-trips exactly through :func:`parse` / :func:`format_ordinal`)::

    0            zero
    5            a natural number
    w^1*3 + 5    omega*3 + 5
    w^{w^1*1}*1  omega^omega
"""
from __future__ import annotations

import contextlib
import enum
import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterator, Sequence, Union

MAX_DEPTH = 8


class OrdinalError(ArithmeticError):
    pass


class OrdinalDepthError(OrdinalError):
    """Raised when a result would nest exponents deeper than MAX_DEPTH."""

    def __init__(self, depth: int, limit: int):
        super().__init__(f"ordinal nesting depth {depth} exceeds limit {limit}")
        self.depth = depth
        self.limit = limit


class OrderViolation(OrdinalError):
    """Raised by :func:`subtract` when the subtrahend exceeds the minuend."""


class OrdinalParseError(ValueError):
    pass


@contextlib.contextmanager
def depth_limit(limit: int) -> Iterator[None]:
    global MAX_DEPTH
    old = MAX_DEPTH
    MAX_DEPTH = limit
    try:
        yield
    finally:
        MAX_DEPTH = old


@total_ordering
class Ordinal:
    __slots__ = ("terms", "depth", "_hash")

    def __init__(self, terms: Sequence[tuple["Ordinal", int]] = ()):
        terms = tuple((e, int(c)) for e, c in terms)
        for i, (e, c) in enumerate(terms):
            if not isinstance(e, Ordinal):
                raise TypeError("exponents must be Ordinal instances")
            if c < 1:
                raise ValueError("coefficients must be positive")
            if i and not _cmp(terms[i - 1][0], e) > 0:
                raise ValueError("exponents must be strictly decreasing")
        self._set(terms)

    def _set(self, terms) -> None:
        depth = 1 + max(e.depth for e, _ in terms) if terms else 0
        if depth > MAX_DEPTH:
            raise OrdinalDepthError(depth, MAX_DEPTH)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "_hash", hash(terms))

    @classmethod
    def _make(cls, terms) -> "Ordinal":
        # trusted path: terms already canonical
        o = cls.__new__(cls)
        o._set(tuple(terms))
        return o

    def __setattr__(self, name, value):
        raise AttributeError("Ordinal is immutable")

    @classmethod
    def nat(cls, n: int) -> "Ordinal":
        if n < 0:
            raise OrderViolation("negative natural number")
        return cls._make(((ZERO, n),)) if n else ZERO

    # queries -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def to_int(self) -> int:
        if not self.is_finite():
            raise ValueError(f"{self} is not finite")
        return self.terms[0][1] if self.terms else 0

    @property
    def leading_exponent(self) -> "Ordinal":
        return self.terms[0][0] if self.terms else ZERO

    @property
    def finite_part(self) -> int:
        if self.terms and self.terms[-1][0].is_zero():
            return self.terms[-1][1]
        return 0

    # python protocol -----------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _cmp(self, other) < 0

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        other = _coerce(other)
        return NotImplemented if other is NotImplemented else cnf_add(self, other)

    def __radd__(self, other):
        other = _coerce(other)
        return NotImplemented if other is NotImplemented else cnf_add(other, self)

    def __mul__(self, other):
        other = _coerce(other)
        return NotImplemented if other is NotImplemented else cnf_mul(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        return NotImplemented if other is NotImplemented else cnf_mul(other, self)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"

    def __str__(self):
        return format_ordinal(self)

    def __reduce__(self):
        return (parse, (format_ordinal(self),))


ZERO = Ordinal._make(())
ONE = Ordinal._make(((ZERO, 1),))
OMEGA = Ordinal._make(((ONE, 1),))

OrdinalLike = Union[Ordinal, int]


def _coerce(x):
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Ordinal.nat(x)
    return NotImplemented


def as_ordinal(x: OrdinalLike) -> Ordinal:
    o = _coerce(x)
    if o is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as an ordinal")
    return o


def _cmp(a: Ordinal, b: Ordinal) -> int:
    if a is b:
        return 0
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = _cmp(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    return (len(a.terms) > len(b.terms)) - (len(a.terms) < len(b.terms))


def cmp(a: OrdinalLike, b: OrdinalLike) -> int:
    """-1, 0 or 1 as a is less than, equal to or greater than b."""
    return _cmp(as_ordinal(a), as_ordinal(b))


def cnf_add(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = as_ordinal(a), as_ordinal(b)
    if not b.terms:
        return a
    e, c = b.terms[0]
    head = []
    for ea, ca in a.terms:
        s = _cmp(ea, e)
        if s > 0:
            head.append((ea, ca))
        else:
            if s == 0:
                c += ca
            break
    return Ordinal._make(head + [(e, c)] + list(b.terms[1:]))


def cnf_mul(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = as_ordinal(a), as_ordinal(b)
    if not a.terms or not b.terms:
        return ZERO
    lead, lead_c = a.terms[0]
    out = []
    for f, d in b.terms:
        if f.terms:
            out.append((cnf_add(lead, f), d))
        else:
            out.append((lead, lead_c * d))
            out.extend(a.terms[1:])
    return Ordinal._make(out)


def subtract(b: OrdinalLike, a: OrdinalLike) -> Ordinal:
    """The unique g with a + g == b; requires a <= b."""
    a, b = as_ordinal(a), as_ordinal(b)
    for i, ((ea, ca), (eb, cb)) in enumerate(zip(a.terms, b.terms)):
        s = _cmp(ea, eb)
        if s > 0 or (s == 0 and ca > cb):
            break
        if s < 0:
            return Ordinal._make(b.terms[i:])
        if ca < cb:
            return Ordinal._make(((eb, cb - ca),) + b.terms[i + 1:])
    else:
        if len(a.terms) <= len(b.terms):
            return Ordinal._make(b.terms[len(a.terms):])
    raise OrderViolation(f"cannot subtract {a} from smaller {b}")


def omega_pow(e: OrdinalLike) -> Ordinal:
    return Ordinal._make(((as_ordinal(e), 1),))


class Kind(enum.Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


def classify(o: OrdinalLike) -> Kind:
    o = as_ordinal(o)
    if not o.terms:
        return Kind.ZERO
    return Kind.SUCCESSOR if o.terms[-1][0].is_zero() else Kind.LIMIT


@dataclass(frozen=True)
class ParityDecomposition:
    limit_part: Ordinal
    n: int
    b: int

    def recompose(self) -> Ordinal:
        return cnf_add(self.limit_part, 2 * self.n + self.b)


def decompose(o: OrdinalLike) -> ParityDecomposition:
    """Write o uniquely as limit_part + 2n + b."""
    o = as_ordinal(o)
    f = o.finite_part
    lam = Ordinal._make(o.terms[:-1]) if f else o
    return ParityDecomposition(lam, f // 2, f % 2)


def predecessor(o: OrdinalLike) -> Ordinal:
    o = as_ordinal(o)
    if classify(o) is not Kind.SUCCESSOR:
        raise OrdinalError(f"{o} has no predecessor")
    c = o.terms[-1][1]
    return Ordinal._make(o.terms[:-1] + (((ZERO, c - 1),) if c > 1 else ()))


def fundamental(o: OrdinalLike, i: int) -> Ordinal:
    """i-th element of the standard fundamental sequence of a limit ordinal.

    The sequence is strictly increasing in i and has supremum ``o``.
    """
    o = as_ordinal(o)
    if classify(o) is not Kind.LIMIT:
        raise OrdinalError(f"{o} is not a limit ordinal")
    e, c = o.terms[-1]
    base = Ordinal._make(o.terms[:-1] + (((e, c - 1),) if c > 1 else ()))
    if classify(e) is Kind.SUCCESSOR:
        tail = cnf_mul(omega_pow(predecessor(e)), i)
    else:
        tail = omega_pow(fundamental(e, i))
    return cnf_add(base, tail)


# text and JSON ------------------------------------------------------------

def format_ordinal(o: Ordinal) -> str:
    if not o.terms:
        return "0"
    parts = []
    for e, c in o.terms:
        if e.is_zero():
            parts.append(str(c))
        elif e.is_finite():
            parts.append(f"w^{e.to_int()}*{c}")
        else:
            parts.append(f"w^{{{format_ordinal(e)}}}*{c}")
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.replace("ω", "w")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        tok = m.group(1) or m.group(2)
        if tok is not None and not tok.isspace():
            out.append(tok)
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise OrdinalParseError(f"expected {expected or 'token'} at position {self.i} in {self.text!r}")
        self.i += 1
        return tok

    def nat(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise OrdinalParseError(f"expected a natural number, got {tok!r} in {self.text!r}")
        return int(tok)

    def sum(self) -> Ordinal:
        acc = self.term()
        while self.peek() == "+":
            self.take("+")
            acc = cnf_add(acc, self.term())
        return acc

    def term(self) -> Ordinal:
        tok = self.peek()
        if tok == "w":
            self.take()
            e = ONE
            if self.peek() == "^":
                self.take()
                e = self.exponent()
            val = omega_pow(e)
        elif tok is not None and tok.isdigit():
            val = Ordinal.nat(self.nat())
        elif tok == "(":
            self.take()
            val = self.sum()
            self.take(")")
        else:
            raise OrdinalParseError(f"unexpected {tok!r} in {self.text!r}")
        while self.peek() == "*":
            self.take()
            val = cnf_mul(val, self.nat())
        return val

    def exponent(self) -> Ordinal:
        tok = self.peek()
        if tok == "{":
            self.take()
            e = self.sum()
            self.take("}")
            return e
        if tok == "(":
            self.take()
            e = self.sum()
            self.take(")")
            return e
        if tok == "w":
            self.take()
            return OMEGA
        return Ordinal.nat(self.nat())


def parse(text: str) -> Ordinal:
    """Parse the text format; non-canonical sums such as ``1 + w`` are normalized."""
    p = _Parser(text)
    if not p.toks:
        raise OrdinalParseError("empty ordinal text")
    o = p.sum()
    if p.peek() is not None:
        raise OrdinalParseError(f"trailing input {p.peek()!r} in {text!r}")
    return o


def to_json(o: Ordinal) -> list:
    return [[to_json(e), c] for e, c in o.terms]


def from_json(data) -> Ordinal:
    if not isinstance(data, list):
        raise OrdinalParseError(f"ordinal JSON must be a list, got {type(data).__name__}")
    terms = []
    for item in data:
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[1], int)):
            raise OrdinalParseError(f"malformed ordinal term {item!r}")
        terms.append((from_json(item[0]), item[1]))
    try:
        return Ordinal(terms)
    except ValueError as exc:
        raise OrdinalParseError(str(exc)) from exc
