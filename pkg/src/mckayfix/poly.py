"""Sparse polynomials in x, y, t over a cyclotomic field, and 2x2 matrices.

A matrix g = [[a, b], [c, d]] acts on polynomials by substituting the row
vector (x, y) * g, that is x -> a*x + c*y and y -> b*x + d*y.  With this
choice (g*f)(v) = f(v*g) and act(g*h, f) = act(g, act(h, f)).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .cyclo import CycField, CycNum, Scalar

Monomial = tuple[int, int, int]  # exponents of x, y, t


def _mono_key(m: Monomial) -> tuple[int, int, int, int]:
    # graded lex with x > y > t, largest first when sorted ascending on this key
    return (-(m[0] + m[1] + m[2]), -m[0], -m[1], -m[2])


class Poly:
    """Immutable sparse polynomial; zero coefficients are never stored."""

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field: CycField, terms: Mapping[Monomial, Scalar] | None = None) -> None:
        self.field = field
        clean: dict[Monomial, CycNum] = {}
        if terms:
            for m, c in terms.items():
                cn = field.coerce(c)
                if not cn.is_zero():
                    clean[m] = cn
        self.terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, field: CycField, terms: dict[Monomial, CycNum]) -> Poly:
        p = cls.__new__(cls)
        p.field = field
        p.terms = terms
        p._hash = None
        return p

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, field: CycField, c: Scalar) -> Poly:
        return cls(field, {(0, 0, 0): c})

    @classmethod
    def monomial(cls, field: CycField, ex: int, ey: int, et: int = 0, c: Scalar = 1) -> Poly:
        return cls(field, {(ex, ey, et): c})

    @classmethod
    def x(cls, field: CycField) -> Poly:
        return cls.monomial(field, 1, 0)

    @classmethod
    def y(cls, field: CycField) -> Poly:
        return cls.monomial(field, 0, 1)

    @classmethod
    def t(cls, field: CycField) -> Poly:
        return cls.monomial(field, 0, 0, 1)

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degrees(self) -> set[int]:
        """Set of x,y-degrees occurring."""
        return {m[0] + m[1] for m in self.terms}

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def has_t(self) -> bool:
        return any(m[2] for m in self.terms)

    def sorted_terms(self) -> list[tuple[Monomial, CycNum]]:
        return sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0]))

    def coeff(self, m: Monomial) -> CycNum:
        return self.terms.get(m, self.field.zero)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.field == other.field and self.terms == other.terms
        if isinstance(other, (int, Fraction, CycNum)):
            return self == Poly.const(self.field, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # arithmetic ---------------------------------------------------------
    def _lift(self, other: object) -> Poly:
        if isinstance(other, Poly):
            if other.field != self.field:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, (int, Fraction, CycNum)):
            return Poly.const(self.field, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other: object) -> Poly:
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return Poly._raw(self.field, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw(self.field, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: object) -> Poly:
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> Poly:
        return (-self) + other

    def scale(self, c: Scalar) -> Poly:
        cn = self.field.coerce(c)
        if cn.is_zero():
            return Poly._raw(self.field, {})
        return Poly._raw(self.field, {m: v * cn for m, v in self.terms.items()})

    def __mul__(self, other: object) -> Poly:
        if isinstance(other, (int, Fraction, CycNum)):
            return self.scale(other)
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        out: dict[Monomial, CycNum] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                v = c1 * c2
                s = out.get(m)
                out[m] = v if s is None else s + v
        return Poly._raw(self.field, {m: c for m, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> Poly:
        return self.scale(self.field.coerce(other).inv())

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative powers of polynomials")
        result = Poly.const(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # structure ----------------------------------------------------------
    def homogeneous_part(self, d: int) -> Poly:
        """Terms whose x,y-degree equals d."""
        return Poly._raw(self.field, {m: c for m, c in self.terms.items() if m[0] + m[1] == d})

    def evaluate(self, x0: Scalar, y0: Scalar, t0: Scalar = 1) -> CycNum:
        f = self.field
        xs, ys, ts = f.coerce(x0), f.coerce(y0), f.coerce(t0)
        acc = f.zero
        cache: dict[tuple[int, int], CycNum] = {}

        def pw(which: int, base: CycNum, k: int) -> CycNum:
            key = (which, k)
            if key not in cache:
                cache[key] = base ** k
            return cache[key]

        for (a, b, e), c in self.terms.items():
            acc = acc + c * pw(0, xs, a) * pw(1, ys, b) * pw(2, ts, e)
        return acc

    def substitute(self, u: Poly, v: Poly) -> Poly:
        """Evaluate a polynomial in (x, y) at the polynomials (u, v); used for q(f1, f2)."""
        acc = Poly._raw(self.field, {})
        for (a, b, e), c in self.terms.items():
            if e:
                raise ValueError("substitute expects a bivariate polynomial")
            acc = acc + (u ** a) * (v ** b) * c
        return acc

    def __iter__(self) -> Iterator[tuple[Monomial, CycNum]]:
        return iter(self.sorted_terms())

    # rendering ----------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip("xyt", m) if k
            )
            if c.is_rational():
                q = c.to_fraction()
                sign = "-" if q < 0 else "+"
                mag = abs(q)
                if not mono:
                    body = str(mag)
                elif mag == 1:
                    body = mono
                else:
                    body = f"{mag}*{mono}"
            else:
                sign = "+"
                body = f"({c})" + (f"*{mono}" if mono else "")
            pieces.append((sign, body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly[{self.field.conductor}]({self})"


class Mat2:
    """2x2 matrix over a cyclotomic field."""

    __slots__ = ("a", "b", "c", "d", "_key")

    def __init__(self, a: CycNum, b: CycNum, c: CycNum, d: CycNum) -> None:
        self.a, self.b, self.c, self.d = a, b, c, d
        self._key = (a, b, c, d)

    @classmethod
    def of(cls, field: CycField, rows: Iterable[Iterable[Scalar]]) -> Mat2:
        (a, b), (c, d) = rows
        return cls(field(a), field(b), field(c), field(d))

    @classmethod
    def identity(cls, field: CycField) -> Mat2:
        return cls(field.one, field.zero, field.zero, field.one)

    @property
    def field(self) -> CycField:
        return self.a.field

    @property
    def key(self) -> tuple[CycNum, CycNum, CycNum, CycNum]:
        return self._key

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Mat2) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __mul__(self, o: Mat2) -> Mat2:
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def scale(self, s: Scalar) -> Mat2:
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)

    def det(self) -> CycNum:
        return self.a * self.d - self.b * self.c

    def trace(self) -> CycNum:
        return self.a + self.d

    def inv(self) -> Mat2:
        di = self.det().inv()
        return Mat2(self.d * di, -self.b * di, -self.c * di, self.a * di)

    def is_identity(self) -> bool:
        return self.a == 1 and self.d == 1 and self.b.is_zero() and self.c.is_zero()

    def minus_identity_rank(self) -> int:
        """Rank of g - I."""
        m = Mat2(self.a - 1, self.b, self.c, self.d - 1)
        if all(v.is_zero() for v in m.key):
            return 0
        return 1 if m.det().is_zero() else 2

    def row_apply(self, u: Scalar, v: Scalar) -> tuple[CycNum, CycNum]:
        """The row vector (u, v) * g."""
        f = self.field
        u, v = f.coerce(u), f.coerce(v)
        return (u * self.a + v * self.c, u * self.b + v * self.d)

    def rows(self) -> list[list[CycNum]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"

    __repr__ = __str__


def _dense_mul(p: list[CycNum], q: list[CycNum], zero: CycNum) -> list[CycNum]:
    out = [zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            if not b.is_zero():
                out[i + j] = out[i + j] + a * b
    return out


class _PowerCache:
    """Powers of a linear form l = u*x + v*y as dense lists (x^(n-j) y^j)."""

    def __init__(self, u: CycNum, v: CycNum) -> None:
        self.pows = [[u.field.one], [u, v]]
        self.zero = u.field.zero

    def get(self, n: int) -> list[CycNum]:
        while len(self.pows) <= n:
            self.pows.append(_dense_mul(self.pows[-1], self.pows[1], self.zero))
        return self.pows[n]


def act(g: Mat2, f: Poly) -> Poly:
    """Substitute x -> a*x + c*y, y -> b*x + d*y; t is left alone."""
    fld = f.field
    if g.field != fld:
        raise ValueError("matrix and polynomial live over different fields")
    a, b, c, d = g.key
    out: dict[Monomial, CycNum] = {}

    def add(m: Monomial, v: CycNum) -> None:
        s = out.get(m)
        out[m] = v if s is None else s + v

    if b.is_zero() and c.is_zero():
        for (i, j, e), coef in f.terms.items():
            add((i, j, e), coef * (a ** i) * (d ** j))
    elif a.is_zero() and d.is_zero():
        # x -> c*y, y -> b*x
        for (i, j, e), coef in f.terms.items():
            add((j, i, e), coef * (c ** i) * (b ** j))
    else:
        lx, ly = _PowerCache(a, c), _PowerCache(b, d)
        for (i, j, e), coef in f.terms.items():
            prod = _dense_mul(lx.get(i), ly.get(j), fld.zero)
            n = i + j
            for k, v in enumerate(prod):
                if not v.is_zero():
                    add((n - k, k, e), coef * v)
    return Poly._raw(fld, {m: v for m, v in out.items() if not v.is_zero()})


def evaluate(f: Poly, x0: Scalar, y0: Scalar, t0: Scalar = 1) -> CycNum:
    return f.evaluate(x0, y0, t0)


def homogeneous_part(f: Poly, d: int) -> Poly:
    return f.homogeneous_part(d)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9']*)|(\*\*|[-+*/^()]))")

Binding = Union[Poly, CycNum, int, Fraction]


class ParseError(ValueError):
    pass


class _Parser:
    def __init__(self, text: str, field: CycField, env: Mapping[str, Binding]) -> None:
        self.field = field
        self.env = env
        self.toks: list[tuple[str, str]] = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character at {pos} in {text!r}")
            num, name, op = m.groups()
            if num is not None:
                self.toks.append(("num", num))
            elif name is not None:
                self.toks.append(("name", name))
            else:
                self.toks.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0
        self.text = text

    def peek(self) -> tuple[str, str] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, op: str | None = None) -> tuple[str, str]:
        tok = self.peek()
        if tok is None or (op is not None and tok != ("op", op)):
            raise ParseError(f"expected {op or 'token'} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Poly:
        p = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input in {self.text!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        tok = self.peek()
        if tok in (("op", "-"), ("op", "+")):
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = self.term() * sign
        while (tok := self.peek()) in (("op", "+"), ("op", "-")):
            self.take()
            rhs = self.term()
            acc = acc + rhs if tok[1] == "+" else acc - rhs
        return acc

    def term(self) -> Poly:
        acc = self.factor()
        while (tok := self.peek()) in (("op", "*"), ("op", "/")):
            self.take()
            if tok[1] == "*":
                acc = acc * self.factor()
            else:
                den = self.factor()
                if den.has_t() or den.degrees() - {0}:
                    raise ParseError("division by a non-constant")
                acc = acc / den.coeff((0, 0, 0))
        return acc

    def factor(self) -> Poly:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "("):
                self.take()
                if self.peek() == ("op", "-"):
                    self.take()
                    neg = True
                kind, val = self.take()
                self.take(")")
            else:
                if self.peek() == ("op", "-"):
                    self.take()
                    neg = True
                kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be an integer literal")
            k = int(val)
            if neg:
                if base.degrees() - {0} or base.has_t():
                    raise ParseError("negative power of a non-constant")
                return Poly.const(self.field, base.coeff((0, 0, 0)) ** (-k))
            return base ** k
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        fld = self.field
        if kind == "num":
            return Poly.const(fld, int(val))
        if kind == "name":
            if val == "x":
                return Poly.x(fld)
            if val == "y":
                return Poly.y(fld)
            if val == "t":
                return Poly.t(fld)
            if val in self.env:
                b = self.env[val]
                return b if isinstance(b, Poly) else Poly.const(fld, b)
            if val == "z":
                return Poly.const(fld, fld.root_of_unity(1))
            raise ParseError(f"unknown name {val!r}")
        if val == "(":
            p = self.expr()
            self.take(")")
            return p
        raise ParseError(f"unexpected {val!r} in {self.text!r}")


def parse_poly(text: str, field: CycField, env: Mapping[str, Binding] | None = None) -> Poly:
    """Parse the textual grammar used by the data files (+ - * / ^, parentheses).

    Without an explicit environment the standard named constants are available.
    """
    return _Parser(text, field, standard_constants(field) if env is None else env).parse()


def parse_scalar(text: str, field: CycField, env: Mapping[str, Binding] | None = None) -> CycNum:
    p = parse_poly(text, field, env)
    if p.has_t() or p.degrees() - {0}:
        raise ParseError(f"{text!r} is not a constant")
    return p.coeff((0, 0, 0))


def standard_constants(field: CycField) -> dict[str, CycNum]:
    """Named scalars available in the field (i, omega, sqrt2, sqrt5, ...)."""
    n = field.conductor
    env: dict[str, CycNum] = {}
    if n % 4 == 0:
        env["i"] = field.i
    if n % 3 == 0:
        env["omega"] = field.omega
    if n % 8 == 0:
        env["sqrt2"] = field.sqrt2
    if n % 5 == 0:
        env["sqrt5"] = field.sqrt5
    for k in (3, 5, 8, 12, 20, 24):
        if n % k == 0:
            env[f"zeta{k}"] = field.primitive_root(k)
    return env
