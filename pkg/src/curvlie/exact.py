"""Exact rationals and the quadratic field Q(sqrt 3).

Rationals are :class:`fractions.Fraction`; this module adds the string
serialisation used in JSON output and the :class:`QSqrt3` field type.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

Rational = Fraction

RationalLike = Union[int, Fraction]


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal {text!r}") from exc


def format_rational(q: RationalLike) -> str:
    q = to_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


class QSqrt3:
    """The number ``a + b*sqrt(3)`` with rational ``a`` and ``b``.

    Instances are immutable and hashable. Mixed arithmetic with ``int`` and
    ``Fraction`` is supported on both sides.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0):
        object.__setattr__(self, "a", to_fraction(a))
        object.__setattr__(self, "b", to_fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("QSqrt3 is immutable")

    @classmethod
    def coerce(cls, value) -> "QSqrt3":
        if isinstance(value, QSqrt3):
            return value
        return cls(to_fraction(value), 0)

    @classmethod
    def sqrt3(cls) -> "QSqrt3":
        return cls(0, 1)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.a and not self.b

    def is_rational(self) -> bool:
        return not self.b

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- field operations -------------------------------------------------
    def __add__(self, other):
        if isinstance(other, QSqrt3):
            return QSqrt3(self.a + other.a, self.b + other.b)
        if isinstance(other, (int, Fraction)):
            return QSqrt3(self.a + other, self.b)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return QSqrt3(-self.a, -self.b)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, QSqrt3):
            return QSqrt3(self.a - other.a, self.b - other.b)
        if isinstance(other, (int, Fraction)):
            return QSqrt3(self.a - other, self.b)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSqrt3(other - self.a, -self.b)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, QSqrt3):
            a, b, c, d = self.a, self.b, other.a, other.b
            return QSqrt3(a * c + 3 * b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return QSqrt3(self.a * other, self.b * other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "QSqrt3":
        return QSqrt3(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm ``a**2 - 3*b**2``."""
        return self.a * self.a - 3 * self.b * self.b

    def inverse(self) -> "QSqrt3":
        n = self.norm()
        if not n:
            # norm vanishes only at zero since sqrt(3) is irrational
            raise ZeroDivisionError("inverse of zero in Q(sqrt3)")
        return QSqrt3(self.a / n, -self.b / n)

    def __truediv__(self, other):
        if isinstance(other, QSqrt3):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero in Q(sqrt3)")
            return QSqrt3(self.a / other, self.b / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSqrt3(other) * self.inverse()
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = QSqrt3(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- order ------------------------------------------------------------
    def sign(self) -> int:
        return qs3_sign(self)

    def __eq__(self, other):
        if isinstance(other, QSqrt3):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - QSqrt3.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - QSqrt3.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - QSqrt3.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - QSqrt3.coerce(other)).sign() >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * 3 ** 0.5

    # -- I/O --------------------------------------------------------------
    def to_json(self) -> dict:
        return {"a": format_rational(self.a), "b": format_rational(self.b)}

    @classmethod
    def from_json(cls, data) -> "QSqrt3":
        if isinstance(data, dict):
            return cls(parse_rational(str(data.get("a", "0"))),
                       parse_rational(str(data.get("b", "0"))))
        return cls(to_fraction(data))

    def __str__(self):
        if not self.b:
            return format_rational(self.a)
        tail = "sqrt3" if self.b == 1 else f"{format_rational(self.b)}*sqrt3"
        if not self.a:
            return tail if self.b != -1 else "-sqrt3"
        if self.b < 0:
            tail = "sqrt3" if self.b == -1 else f"{format_rational(-self.b)}*sqrt3"
            return f"{format_rational(self.a)} - {tail}"
        return f"{format_rational(self.a)} + {tail}"

    def __repr__(self):
        return f"QSqrt3({format_rational(self.a)}, {format_rational(self.b)})"


def qs3_sign(x) -> int:
    """Exact sign of ``a + b*sqrt(3)``.

    If ``a`` and ``b`` agree in sign the answer is immediate; otherwise the
    term with the larger square wins, comparing ``a**2`` against ``3*b**2``.
    """
    x = QSqrt3.coerce(x)
    sa, sb = _sign(x.a), _sign(x.b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    lhs, rhs = x.a * x.a, 3 * x.b * x.b
    return sa if lhs > rhs else sb


def qs3_arith(x, y, op: str) -> QSqrt3:
    x, y = QSqrt3.coerce(x), QSqrt3.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def sqrt_in_qs3(x) -> QSqrt3 | None:
    """Return a square root of ``x`` inside Q(sqrt3), or None if there is none.

    The root returned is the non-negative one when ``x`` is non-negative.
    """
    x = QSqrt3.coerce(x)
    if x.is_zero():
        return QSqrt3(0)
    if x.sign() < 0:
        return None
    # (c + d*sqrt3)**2 = c**2 + 3 d**2 + 2 c d sqrt3
    if not x.b:
        r = rational_sqrt(x.a)
        if r is not None:
            return QSqrt3(r)
        r = rational_sqrt(x.a / 3)
        if r is not None:
            return QSqrt3(0, r)
        return None
    disc = rational_sqrt(x.norm())
    if disc is None:
        return None
    for c2 in ((x.a + disc) / 2, (x.a - disc) / 2):
        if c2 <= 0:
            continue
        c = rational_sqrt(c2)
        if c is None:
            continue
        d = x.b / (2 * c)
        cand = QSqrt3(c, d)
        if cand * cand == x:
            return cand if cand.sign() >= 0 else -cand
    return None


def integer_sqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def rational_sqrt(q) -> Fraction | None:
    q = to_fraction(q)
    if q < 0:
        return None
    n = integer_sqrt_exact(q.numerator)
    d = integer_sqrt_exact(q.denominator)
    if n is None or d is None:
        return None
    return Fraction(n, d)


def to_qs3_or_fraction(x):
    """Collapse a QSqrt3 with zero irrational part to a Fraction."""
    if isinstance(x, QSqrt3) and not x.b:
        return x.a
    return x


class SqrtExt:
    """``a + b*sqrt(d)`` with ``a``, ``b``, ``d`` in Q(sqrt3) and ``d > 0``.

    Arithmetic is the quotient ring Q(sqrt3)[q]/(q**2 - d): the relation is
    substituted, never approximated. Both operands of a binary operation
    must share ``d``. If ``d`` is a square in Q(sqrt3) this is still a
    valid ring, but :func:`sqrt_in_qs3` should be preferred.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=2):
        object.__setattr__(self, "a", _as_field(a))
        object.__setattr__(self, "b", _as_field(b))
        d = _as_field(d)
        if QSqrt3.coerce(d).sign() <= 0:
            raise ValueError("radicand must be positive")
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("SqrtExt is immutable")

    def _lift(self, other):
        if isinstance(other, SqrtExt):
            if other.d != self.d:
                raise ValueError("mixed radicands")
            return other
        if isinstance(other, (int, Fraction, QSqrt3)):
            return SqrtExt(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return SqrtExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return SqrtExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return SqrtExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return SqrtExt(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self):
        return SqrtExt(self.a, -self.b, self.d)

    def norm(self):
        return _as_field(self.a * self.a - self.b * self.b * self.d)

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("not invertible in this quotient ring")
        inv = QSqrt3.coerce(n).inverse()
        return SqrtExt(self.a * inv, -self.b * inv, self.d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out, base = SqrtExt(1, 0, self.d), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_zero(self):
        return not self

    def sign(self) -> int:
        sa, sb = exact_sign(self.a), exact_sign(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        lhs = QSqrt3.coerce(self.a * self.a)
        rhs = QSqrt3.coerce(self.b * self.b * self.d)
        return sa if lhs > rhs else (sb if rhs > lhs else 0)

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, SqrtExt) or other.d == self.d else None
        if o is None:
            return NotImplemented if not isinstance(other, SqrtExt) else False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * float(self.d) ** 0.5

    def __repr__(self):
        return f"SqrtExt({self.a!s}, {self.b!s}, d={self.d!s})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        return f"({self.a}) + ({self.b})*sqrt({self.d})"


def _as_field(x):
    if isinstance(x, QSqrt3):
        return to_qs3_or_fraction(x)
    return to_fraction(x)


def exact_sign(x) -> int:
    """Sign of an exact scalar (int, Fraction, QSqrt3 or SqrtExt)."""
    if isinstance(x, (QSqrt3, SqrtExt)):
        return x.sign()
    x = to_fraction(x)
    return (x > 0) - (x < 0)


def exact_inverse(x):
    if isinstance(x, (QSqrt3, SqrtExt)):
        return x.inverse()
    return 1 / to_fraction(x)


def simplify_scalar(x):
    """Collapse to the smallest exact type holding the value."""
    if isinstance(x, SqrtExt) and not x.b:
        x = x.a
    if isinstance(x, QSqrt3) and not x.b:
        x = x.a
    return x
