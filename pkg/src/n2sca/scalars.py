"""Exact arithmetic in the field Q(i, sqrt(2)).

A scalar is stored on the fixed rational basis {1, i, sqrt2, i*sqrt2}
with `fractions.Fraction` coordinates, so every value is canonical and
equality is coordinate-wise.  Inversion rationalises the denominator in
two stages: first the sqrt2-conjugate (landing in Q(i)), then the
complex conjugate (landing in Q).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError

_F0 = Fraction(0)
_F1 = Fraction(1)


def _coerce(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build a rational coordinate from {x!r}")


class Scalar:
    """An element a + b*i + c*sqrt2 + d*i*sqrt2 with rational a, b, c, d."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = _coerce(a)
        self.b = _coerce(b)
        self.c = _coerce(c)
        self.d = _coerce(d)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, c: Fraction, d: Fraction) -> "Scalar":
        s = object.__new__(cls)
        s.a = a
        s.b = b
        s.c = c
        s.d = d
        return s

    @classmethod
    def rational(cls, num, den=1) -> "Scalar":
        return cls._raw(Fraction(num, den), _F0, _F0, _F0)

    @property
    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    @property
    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.a

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return (
            self.a == other.a
            and self.b == other.b
            and self.c == other.c
            and self.d == other.d
        )

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __neg__(self) -> "Scalar":
        return Scalar._raw(-self.a, -self.b, -self.c, -self.d)

    def __add__(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return Scalar._raw(
            self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d
        )

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return Scalar._raw(
            self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d
        )

    def __rsub__(self, other) -> "Scalar":
        return (-self) + other

    def __mul__(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            f = _coerce(other)
            return Scalar._raw(self.a * f, self.b * f, self.c * f, self.d * f)
        if not isinstance(other, Scalar):
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        if not (b1 or c1 or d1):  # rational * x
            return Scalar._raw(a1 * a2, a1 * b2, a1 * c2, a1 * d2)
        if not (b2 or c2 or d2):  # x * rational
            return Scalar._raw(a1 * a2, b1 * a2, c1 * a2, d1 * a2)
        # Multiplication table: i^2 = -1, sqrt2^2 = 2, (i*sqrt2)^2 = -2.
        return Scalar._raw(
            a1 * a2 - b1 * b2 + 2 * (c1 * c2 - d1 * d2),
            a1 * b2 + b1 * a2 + 2 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 - b1 * d2 - d1 * b2,
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def conj_sqrt2(self) -> "Scalar":
        return Scalar._raw(self.a, self.b, -self.c, -self.d)

    def conj_i(self) -> "Scalar":
        return Scalar._raw(self.a, -self.b, self.c, -self.d)

    def inverse(self) -> "Scalar":
        if self.is_zero:
            raise ZeroDivisionError("inversion of the zero scalar")
        s = self.conj_sqrt2()
        y = self * s  # lies in Q(i)
        n = y.a * y.a + y.b * y.b  # rational norm of y
        return s * y.conj_i() * Scalar._raw(_F1 / n, _F0, _F0, _F0)

    def __truediv__(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    @property
    def is_simple(self) -> bool:
        """True when at most one basis coordinate is nonzero."""
        return sum(1 for x in (self.a, self.b, self.c, self.d) if x) <= 1

    def __str__(self) -> str:
        parts = []
        for coef, unit in ((self.a, ""), (self.b, "i"), (self.c, "r2"), (self.d, "i*r2")):
            if not coef:
                continue
            if not unit:
                parts.append(str(coef))
            elif coef == 1:
                parts.append(unit)
            elif coef == -1:
                parts.append("-" + unit)
            else:
                parts.append(f"{coef}*{unit}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"Scalar({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


ZERO = Scalar._raw(_F0, _F0, _F0, _F0)
ONE = Scalar._raw(_F1, _F0, _F0, _F0)
I = Scalar._raw(_F0, _F1, _F0, _F0)
SQRT2 = Scalar._raw(_F0, _F0, _F1, _F0)
I_SQRT2 = Scalar._raw(_F0, _F0, _F0, _F1)
HALF = Scalar.rational(1, 2)
INV_SQRT2 = Scalar._raw(_F0, _F0, Fraction(1, 2), _F0)  # 1/sqrt2 = sqrt2/2


class _ScalarParser:
    """Recursive-descent parser for `1/2 + 3*i - (1/4)*r2` expressions."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> Scalar:
        value = self.term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                value = value + self.term()
            elif ch == "-":
                self.pos += 1
                value = value - self.term()
            else:
                return value

    def term(self) -> Scalar:
        value = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                value = value * self.factor()
            else:
                return value

    def factor(self) -> Scalar:
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return -self.factor()
        if ch == "+":
            self.pos += 1
            return self.factor()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                raise ParseError(f"missing ')' in scalar {self.text!r}")
            self.pos += 1
            return value
        if ch == "i":
            self.pos += 1
            return I
        if ch == "r":
            if self.text[self.pos : self.pos + 2] != "r2":
                raise ParseError(f"unknown symbol at {self.text[self.pos:]!r}")
            self.pos += 2
            return SQRT2
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            num = int(self.text[start : self.pos])
            if self.peek() == "/":
                save = self.pos
                self.pos += 1
                ch2 = self.peek()
                if ch2.isdigit():
                    start = self.pos
                    while self.pos < len(self.text) and self.text[self.pos].isdigit():
                        self.pos += 1
                    return Scalar.rational(num, int(self.text[start : self.pos]))
                self.pos = save
            return Scalar.rational(num)
        raise ParseError(f"unexpected character {ch!r} in scalar {self.text!r}")


def parse_scalar(text: str) -> Scalar:
    p = _ScalarParser(text)
    value = p.expr()
    if p.peek():
        raise ParseError(f"trailing input in scalar {text!r}: {text[p.pos:]!r}")
    return value
