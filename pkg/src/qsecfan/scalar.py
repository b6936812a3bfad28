"""Exact arithmetic in Q and in a real quadratic field Q(sqrt(m)).

A scalar is a + b*sqrt(m) with rational a, b and a squarefree integer
m >= 2; values with b == 0 are canonicalized to the rational-only form
(m is dropped).  All comparisons are exact: the sign of a + b*sqrt(m)
is decided by comparing a^2 against b^2*m with sign bookkeeping, never
through floating point.  A single computation may mix rational-only
scalars with scalars of one fixed m, but never two distinct radicals.
"""

from __future__ import annotations

import math
from typing import Union

from .errors import DegenerateInputError, MixedFieldError

try:  # gmpy2's mpq is drop-in compatible with Fraction and much faster
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rational

RationalLike = Union[int, str, "Rational"]

_ZERO = Rational(0)
_ONE = Rational(1)


def _squarefree_split(m: int) -> tuple[int, int]:
    """Return (s, m') with m = s^2 * m' and m' squarefree."""
    if m <= 0:
        raise ValueError(f"radicand must be positive, got {m}")
    s, rest, p = 1, m, 2
    while p * p <= rest:
        while rest % (p * p) == 0:
            rest //= p * p
            s *= p
        p += 1 if p == 2 else 2
    return s, rest


def common_field(m1: int | None, m2: int | None) -> int | None:
    if m1 is None:
        return m2
    if m2 is None or m1 == m2:
        return m1
    raise MixedFieldError(f"cannot mix sqrt({m1}) and sqrt({m2})")


class Scalar:
    """An exact element a + b*sqrt(m) of Q or of a real quadratic field."""

    __slots__ = ("a", "b", "m")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0, m: int | None = None):
        a = Rational(a)
        b = Rational(b)
        if b != 0:
            if m is None:
                raise ValueError("irrational part requires a radicand m")
            s, m = _squarefree_split(int(m))
            b *= s
            if m == 1:
                a, b, m = a + b, _ZERO, None
        if b == 0:
            b, m = _ZERO, None
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", m)

    def __setattr__(self, *_):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def sqrt(cls, m: int) -> "Scalar":
        return cls(0, 1, m)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, str)) or type(x).__name__ in ("Fraction", "mpq"):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    # -- predicates ----------------------------------------------------

    def is_rational(self) -> bool:
        return self.m is None

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        """Exact sign in {-1, 0, +1}, decided by rational comparisons."""
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        if b == 0:
            return sa
        sb = (b > 0) - (b < 0)
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        # opposite signs: compare |a| with |b|*sqrt(m) via squares
        lhs, rhs = a * a, b * b * self.m
        if lhs == rhs:
            return 0  # impossible for b != 0 with squarefree m >= 2
        return sa if lhs > rhs else sb

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        m = common_field(self.m, other.m)
        return Scalar(self.a + other.a, self.b + other.b, m)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.a, -self.b, self.m)

    def __sub__(self, other) -> "Scalar":
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other) -> "Scalar":
        return (-self) + other

    def __mul__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        m = common_field(self.m, other.m)
        if m is None:
            return Scalar(self.a * other.a)
        a = self.a * other.a + self.b * other.b * m
        b = self.a * other.b + self.b * other.a
        return Scalar(a, b, m)

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        if self.is_zero():
            raise DegenerateInputError("inversion of zero")
        if self.m is None:
            return Scalar(_ONE / self.a)
        norm = self.a * self.a - self.b * self.b * self.m  # nonzero: m squarefree
        return Scalar(self.a / norm, -self.b / norm, self.m)

    def __truediv__(self, other) -> "Scalar":
        return self * Scalar.coerce(other).inv()

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar.coerce(other) * self.inv()

    def __abs__(self) -> "Scalar":
        return -self if self.sign() < 0 else self

    # -- order and identity ---------------------------------------------

    def __eq__(self, other) -> bool:
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.m == other.m

    def __lt__(self, other):
        return (self - Scalar.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - Scalar.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - Scalar.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - Scalar.coerce(other)).sign() >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.m))

    def __bool__(self):
        return not self.is_zero()

    # -- output ----------------------------------------------------------

    def __float__(self) -> float:
        x = float(self.a.numerator) / float(self.a.denominator)
        if self.b != 0:
            x += float(self.b.numerator) / float(self.b.denominator) * math.sqrt(self.m)
        return x

    def __repr__(self) -> str:
        if self.b == 0:
            return f"Scalar({self.a})"
        return f"Scalar({self.a} + {self.b}*sqrt({self.m}))"

    def to_json(self) -> dict:
        out = {"a": str(self.a)}
        if self.b != 0:
            out["b"] = str(self.b)
            out["m"] = self.m
        return out

    @classmethod
    def from_json(cls, data) -> "Scalar":
        """Accept the canonical object form plus int / "p/q" shorthands."""
        if isinstance(data, dict):
            return cls(Rational(data["a"]), Rational(data.get("b", 0)), data.get("m"))
        if isinstance(data, (int, str)):
            return cls(Rational(data))
        raise ValueError(f"not a scalar encoding: {data!r}")


S0 = Scalar(0)
S1 = Scalar(1)


def canon(x) -> Scalar:
    """Coerce to Scalar; the constructor already canonicalizes."""
    return Scalar.coerce(x)
