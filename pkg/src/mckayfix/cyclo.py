"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored as an integer numerator vector over the power basis
1, z, ..., z^(phi(N)-1) together with one positive common denominator.
Keeping integers (instead of a list of Fractions) makes the products that
dominate the linear algebra noticeably cheaper.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Union

Rational = Fraction
Scalar = Union[int, Fraction, "CycNum"]


def _poly_divmod_exact(num: list[int], den: list[int]) -> list[int]:
    """Quotient of integer polynomials (coefficients low to high), den monic."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _poly_divmod_exact(p, list(cyclotomic_polynomial(d)))
    return tuple(p)


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


class CycField:
    """The field Q(zeta_N) with its power-basis reduction table."""

    def __init__(self, conductor: int) -> None:
        if conductor < 1:
            raise ValueError("conductor must be positive")
        self.conductor = conductor
        self.modulus = cyclotomic_polynomial(conductor)
        self.degree = len(self.modulus) - 1
        self.units = tuple(k for k in range(conductor) if gcd(k, conductor) == 1)
        self._table = self._build_table()
        self.zero = CycNum(self, (0,) * self.degree, 1)
        self.one = self.root_of_unity(0)

    def _build_table(self) -> tuple[tuple[int, ...], ...]:
        deg, n = self.degree, self.conductor
        rows: list[tuple[int, ...]] = []
        cur = [0] * deg
        cur[0] = 1
        for _ in range(max(n, deg)):
            rows.append(tuple(cur))
            carry = cur[-1]
            cur = [0] + cur[:-1]
            if carry:
                for i in range(deg):
                    cur[i] -= carry * self.modulus[i]
        return tuple(rows[:n])

    def reduction_row(self, k: int) -> tuple[int, ...]:
        """Power-basis expansion of z^k."""
        return self._table[k % self.conductor]

    def __repr__(self) -> str:
        return f"CycField({self.conductor})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CycField) and other.conductor == self.conductor

    def __hash__(self) -> int:
        return hash(("CycField", self.conductor))

    def __reduce__(self):
        return (get_field, (self.conductor,))

    # constructors -------------------------------------------------------
    def root_of_unity(self, k: int) -> CycNum:
        return CycNum(self, self.reduction_row(k), 1)

    def __call__(self, value: Scalar) -> CycNum:
        return self.coerce(value)

    def coerce(self, value: Scalar) -> CycNum:
        if isinstance(value, CycNum):
            if value.field is not self and value.field != self:
                raise ValueError(
                    f"cannot mix Q(zeta_{value.field.conductor}) with Q(zeta_{self.conductor})"
                )
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return CycNum(self, (value,) + (0,) * (self.degree - 1), 1)
        if isinstance(value, Fraction):
            return CycNum(
                self, (value.numerator,) + (0,) * (self.degree - 1), value.denominator
            )
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")

    def from_coefficients(self, coeffs: Iterable[Scalar]) -> CycNum:
        """Build sum c_k z^k; the list may be longer than the degree."""
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        acc = [0] * self.degree
        for k, c in enumerate(fr):
            if c:
                v = c.numerator * (den // c.denominator)
                for i, r in enumerate(self.reduction_row(k)):
                    if r:
                        acc[i] += v * r
        return CycNum(self, tuple(acc), den)

    # named constants ----------------------------------------------------
    def _require(self, divisor: int, name: str) -> None:
        if self.conductor % divisor:
            raise ValueError(f"{name} needs a conductor divisible by {divisor}")

    @property
    def i(self) -> CycNum:
        self._require(4, "i")
        return self.root_of_unity(self.conductor // 4)

    @property
    def omega(self) -> CycNum:
        self._require(3, "omega")
        return self.root_of_unity(self.conductor // 3)

    def primitive_root(self, order: int) -> CycNum:
        self._require(order, f"a primitive {order}-th root")
        return self.root_of_unity(self.conductor // order)

    @property
    def sqrt2(self) -> CycNum:
        e = self.primitive_root(8)
        s = e + e.inv()
        if s * s != self(2):
            raise ArithmeticError("sqrt2 self-check failed")
        return s

    @property
    def sqrt5(self) -> CycNum:
        z5 = self.primitive_root(5)
        s = 1 + 2 * z5 + 2 * z5 ** 4
        if s * s != self(5):
            raise ArithmeticError("sqrt5 self-check failed")
        return s


@lru_cache(maxsize=None)
def get_field(conductor: int) -> CycField:
    """Shared field instance per conductor."""
    return CycField(conductor)


def _normalize(nums: list[int] | tuple[int, ...], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums = [-a for a in nums]
        den = -den
    g = den
    for a in nums:
        if a:
            g = gcd(g, a)
            if g == 1:
                return tuple(nums), den
    if all(a == 0 for a in nums):
        return tuple(0 for _ in nums), 1
    return tuple(a // g for a in nums), den // g


class CycNum:
    """Immutable element of Q(zeta_N)."""

    __slots__ = ("field", "nums", "den", "_hash")

    def __init__(self, field: CycField, nums: tuple[int, ...], den: int = 1) -> None:
        if len(nums) != field.degree:
            raise ValueError("coefficient vector has the wrong length")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        self.field = field
        self.nums, self.den = _normalize(nums, den)
        self._hash: int | None = None

    # inspection ---------------------------------------------------------
    @property
    def coefficients(self) -> list[Fraction]:
        return [Fraction(a, self.den) for a in self.nums]

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.nums[0], self.den)

    def to_int(self) -> int:
        q = self.to_fraction()
        if q.denominator != 1:
            raise ValueError(f"{self} is not an integer")
        return q.numerator

    def __bool__(self) -> bool:
        return self.is_zero() is False

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycNum):
            return (
                self.field.conductor == other.field.conductor
                and self.den == other.den
                and self.nums == other.nums
            )
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.nums[0], self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self.nums[0], self.den))
            else:
                self._hash = hash((self.field.conductor, self.nums, self.den))
        return self._hash

    def sort_key(self) -> tuple:
        return (self.den, self.nums)

    # arithmetic ---------------------------------------------------------
    def _lift(self, other: Scalar) -> CycNum:
        return self.field.coerce(other)

    def __add__(self, other: Scalar) -> CycNum:
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return CycNum(self.field, tuple(a + b for a, b in zip(self.nums, o.nums)), self.den)
        d1, d2 = self.den, o.den
        return CycNum(
            self.field, tuple(a * d2 + b * d1 for a, b in zip(self.nums, o.nums)), d1 * d2
        )

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum(self.field, tuple(-a for a in self.nums), self.den)

    def __sub__(self, other: Scalar) -> CycNum:
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Scalar) -> CycNum:
        return (-self) + other

    def __mul__(self, other: Scalar) -> CycNum:
        if isinstance(other, int):
            return CycNum(self.field, tuple(a * other for a in self.nums), self.den)
        if isinstance(other, Fraction):
            return CycNum(
                self.field,
                tuple(a * other.numerator for a in self.nums),
                self.den * other.denominator,
            )
        if not isinstance(other, CycNum):
            return NotImplemented
        o = self._lift(other)
        fld = self.field
        deg = fld.degree
        a, b = self.nums, o.nums
        if not any(b[1:]):
            return CycNum(fld, tuple(x * b[0] for x in a), self.den * o.den)
        if not any(a[1:]):
            return CycNum(fld, tuple(a[0] * x for x in b), self.den * o.den)
        prod = [0] * (2 * deg - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        acc = prod[:deg]
        for k in range(deg, 2 * deg - 1):
            c = prod[k]
            if c:
                row = fld.reduction_row(k)
                for i in range(deg):
                    r = row[i]
                    if r:
                        acc[i] += c * r
        return CycNum(fld, tuple(acc), self.den * o.den)

    __rmul__ = __mul__

    def galois(self, k: int) -> CycNum:
        """Apply the automorphism z -> z^k (k coprime to N)."""
        fld = self.field
        if gcd(k, fld.conductor) != 1:
            raise ValueError("Galois exponent must be coprime to the conductor")
        acc = [0] * fld.degree
        for i, a in enumerate(self.nums):
            if a:
                for j, r in enumerate(fld.reduction_row(i * k)):
                    if r:
                        acc[j] += a * r
        return CycNum(fld, tuple(acc), self.den)

    def conj(self) -> CycNum:
        """Complex conjugation, z -> z^(N-1)."""
        return self.galois(self.field.conductor - 1)

    def norm(self) -> Fraction:
        """Field norm down to Q."""
        p = self
        for k in self.field.units:
            if k != 1:
                p = p * self.galois(k)
        return p.to_fraction()

    def inv(self) -> CycNum:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            q = Fraction(self.den, self.nums[0])
            return self.field.coerce(q)
        # a^-1 = (product of the other conjugates) / N(a)
        p = self.field.one
        for k in self.field.units:
            if k != 1:
                p = p * self.galois(k)
        n = (self * p).to_fraction()
        return p * Fraction(n.denominator, n.numerator)

    def __truediv__(self, other: Scalar) -> CycNum:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            q = Fraction(other)
            return self * Fraction(q.denominator, q.numerator)
        if not isinstance(other, CycNum):
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other: Scalar) -> CycNum:
        return self._lift(other) * self.inv()

    def __pow__(self, k: int) -> CycNum:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # rendering ----------------------------------------------------------
    def __str__(self) -> str:
        parts: list[str] = []
        for k in range(self.field.degree - 1, -1, -1):
            c = Fraction(self.nums[k], self.den)
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "z" if k == 1 else f"z^{k}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"CycNum[{self.field.conductor}]({self})"


def root_of_unity(field: CycField, k: int) -> CycNum:
    return field.root_of_unity(k)


def embed(a: CycNum, target: CycField) -> CycNum:
    """Image of a under Q(zeta_N) -> Q(zeta_M), zeta_N -> zeta_M^(M/N)."""
    n, m = a.field.conductor, target.conductor
    if m % n:
        raise ValueError(f"Q(zeta_{n}) does not embed in Q(zeta_{m})")
    step = m // n
    acc = [0] * target.degree
    for i, c in enumerate(a.nums):
        if c:
            for j, r in enumerate(target.reduction_row(i * step)):
                if r:
                    acc[j] += c * r
    return CycNum(target, tuple(acc), a.den)


def descend(a: CycNum, target: CycField) -> CycNum:
    """Inverse of :func:`embed`; raises if a does not lie in the subfield."""
    big = a.field
    if big.conductor % target.conductor:
        raise ValueError("target is not a subfield")
    step = big.conductor // target.conductor
    # columns: images of the target power basis
    cols = [big.reduction_row(i * step) for i in range(target.degree)]
    rhs = [Fraction(c, a.den) for c in a.nums]
    rows = [[Fraction(cols[j][i]) for j in range(target.degree)] + [rhs[i]] for i in range(big.degree)]
    sol = _solve_rational(rows, target.degree)
    if sol is None:
        raise ValueError(f"{a} does not lie in Q(zeta_{target.conductor})")
    return target.from_coefficients(sol)


def _solve_rational(rows: list[list[Fraction]], ncols: int) -> list[Fraction] | None:
    """Solve an augmented rational system; None when inconsistent."""
    rows = [r[:] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(rows)) if rows[k][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [vk - f * vr for vk, vr in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[ncols] != 0 for row in rows[r:]):
        return None
    sol = [Fraction(0)] * ncols
    for k, c in enumerate(pivots):
        sol[c] = rows[k][ncols]
    return sol
