"""Bounded-precision arithmetic in Q_p and the value group Q/Z.

A nonzero p-adic number is kept in canonical form p^val * unit, with the
unit retained modulo p^digits ("guaranteed unit digits").  Zero is a
distinguished marker rather than a huge valuation: arithmetic that cancels
every certified digit produces a *zero-at-precision* value carrying only a
lower bound on the valuation, and predicates asked of such a value raise
PrecisionError instead of guessing.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

DEFAULT_DIGITS = 60


class PrecisionError(ArithmeticError):
    """An operation or predicate cannot be certified at the digits carried."""


class Prime(int):
    """A prime integer, validated by trial division at construction."""

    def __new__(cls, value):
        value = int(value)
        if value < 2:
            raise ValueError(f"{value} is not prime")
        d = 2
        while d * d <= value:
            if value % d == 0:
                raise ValueError(f"{value} is not prime")
            d += 1
        return super().__new__(cls, value)


def valuation(n: int, p: int) -> int:
    """Largest k with p^k dividing n; undefined (ValueError) for n = 0."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class QmodZ:
    """An element of Q/Z in reduced form num/den with 0 <= num < den."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("denominator 0")
        num %= den if den > 0 else -den
        den = abs(den)
        g = gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    def __setattr__(self, *a):
        raise AttributeError("QmodZ is immutable")

    def __add__(self, other: "QmodZ") -> "QmodZ":
        return QmodZ(self.num * other.den + other.num * self.den,
                     self.den * other.den)

    def __neg__(self) -> "QmodZ":
        return QmodZ(-self.num, self.den)

    def __sub__(self, other: "QmodZ") -> "QmodZ":
        return self + (-other)

    def scalar_mul(self, d: int) -> "QmodZ":
        return QmodZ(d * self.num, self.den)

    def __rmul__(self, d: int) -> "QmodZ":
        return self.scalar_mul(d)

    def __eq__(self, other) -> bool:
        return (isinstance(other, QmodZ)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return self.num != 0

    def __str__(self) -> str:
        return f"{self.num}/{self.den}" if self.num else "0"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "QmodZ":
        text = text.strip()
        if "/" in text:
            a, b = text.split("/")
            return cls(int(a), int(b))
        return cls(int(text))


ZERO_QZ = QmodZ(0)
HALF = QmodZ(1, 2)


class PadicNumber:
    """Element of Q_p with certified unit digits.

    Exactly one of three states:
      * nonzero:           val is an int, unit in [1, p^digits) coprime to p;
      * exact zero:        val is None, zero_bound is None;
      * zero-at-precision: val is None, zero_bound = B certifies val >= B.
    """

    __slots__ = ("p", "val", "unit", "digits", "zero_bound")

    def __init__(self, p, val, unit, digits, zero_bound=None):
        self.p = p
        self.val = val
        self.unit = unit
        self.digits = digits
        self.zero_bound = zero_bound

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, p: Prime) -> "PadicNumber":
        return cls(p, None, 0, None)

    @classmethod
    def zero_at_precision(cls, p: Prime, bound: int) -> "PadicNumber":
        return cls(p, None, 0, None, zero_bound=bound)

    @classmethod
    def from_rational(cls, n: int, d: int, p: Prime,
                      digits: int = DEFAULT_DIGITS) -> "PadicNumber":
        """Canonical image of n/d with >= digits guaranteed unit digits."""
        if d == 0:
            raise ZeroDivisionError("denominator 0")
        if digits < 1:
            raise PrecisionError("at least one unit digit required")
        if n == 0:
            return cls.zero(p)
        v = valuation(n, p) - valuation(d, p)
        nu = n // p ** valuation(n, p)
        du = d // p ** valuation(d, p)
        m = p ** digits
        unit = nu * pow(du, -1, m) % m
        return cls(p, v, unit, digits)

    @classmethod
    def from_fraction(cls, x, p: Prime,
                      digits: int = DEFAULT_DIGITS) -> "PadicNumber":
        x = Fraction(x)
        return cls.from_rational(x.numerator, x.denominator, p, digits)

    # -- state predicates ----------------------------------------------

    @property
    def is_exact_zero(self) -> bool:
        return self.val is None and self.zero_bound is None

    @property
    def is_zero_at_precision(self) -> bool:
        return self.val is None and self.zero_bound is not None

    @property
    def is_nonzero(self) -> bool:
        return self.val is not None

    def _require_nonzero(self, what: str):
        if self.is_exact_zero:
            raise ZeroDivisionError(f"{what} of exact zero")
        if self.is_zero_at_precision:
            raise PrecisionError(
                f"{what} of a value indistinguishable from zero "
                f"(val >= {self.zero_bound})")

    @property
    def valuation(self) -> int:
        self._require_nonzero("valuation")
        return self.val

    def unit_mod(self, k: int) -> int:
        """The unit part modulo p^k; k must not exceed the certified digits."""
        self._require_nonzero("unit part")
        if k > self.digits:
            raise PrecisionError(f"only {self.digits} unit digits certified")
        return self.unit % self.p ** k

    # -- arithmetic -----------------------------------------------------

    def _check_compatible(self, other):
        if not isinstance(other, PadicNumber):
            raise TypeError(f"expected PadicNumber, got {type(other).__name__}")
        if self.p != other.p:
            raise ValueError("mixed primes")

    def __neg__(self) -> "PadicNumber":
        if self.val is None:
            return self
        m = self.p ** self.digits
        return PadicNumber(self.p, self.val, (-self.unit) % m, self.digits)

    def __add__(self, other: "PadicNumber") -> "PadicNumber":
        self._check_compatible(other)
        p = self.p
        if self.is_exact_zero:
            return other
        if other.is_exact_zero:
            return self
        if self.is_zero_at_precision or other.is_zero_at_precision:
            if self.is_zero_at_precision and other.is_zero_at_precision:
                return PadicNumber.zero_at_precision(
                    p, min(self.zero_bound, other.zero_bound))
            z, x = ((self, other) if self.is_zero_at_precision
                    else (other, self))
            if x.val >= z.zero_bound:
                return PadicNumber.zero_at_precision(p, z.zero_bound)
            d = min(x.digits, z.zero_bound - x.val)
            return PadicNumber(p, x.val, x.unit % p ** d, d)
        a, b = (self, other) if self.val <= other.val else (other, self)
        k = b.val - a.val
        known = min(a.digits, k + b.digits)  # sum of units known mod p^known
        s = (a.unit + b.unit * p ** k) % p ** known
        if s == 0:
            return PadicNumber.zero_at_precision(p, a.val + known)
        c = valuation(s, p)
        return PadicNumber(p, a.val + c, s // p ** c, known - c)

    def __sub__(self, other: "PadicNumber") -> "PadicNumber":
        return self + (-other)

    def __mul__(self, other: "PadicNumber") -> "PadicNumber":
        self._check_compatible(other)
        p = self.p
        if self.is_exact_zero or other.is_exact_zero:
            return PadicNumber.zero(p)
        if self.is_zero_at_precision or other.is_zero_at_precision:
            lo = lambda x: x.zero_bound if x.val is None else x.val
            return PadicNumber.zero_at_precision(p, lo(self) + lo(other))
        d = min(self.digits, other.digits)
        return PadicNumber(p, self.val + other.val,
                           self.unit * other.unit % p ** d, d)

    def inverse(self) -> "PadicNumber":
        """Multiplicative inverse.  Costs one guaranteed unit digit."""
        self._require_nonzero("inversion")
        d = self.digits - 1
        if d < 1:
            raise PrecisionError("precision exhausted by inversion")
        m = self.p ** d
        return PadicNumber(self.p, -self.val, pow(self.unit, -1, m) % m, d)

    def __truediv__(self, other: "PadicNumber") -> "PadicNumber":
        return self * other.inverse()

    def __pow__(self, k: int) -> "PadicNumber":
        if k < 0:
            return self.inverse() ** (-k)
        out = PadicNumber.from_rational(1, 1, self.p,
                                        self.digits or DEFAULT_DIGITS)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison -----------------------------------------------------

    def __eq__(self, other) -> bool:
        """Indistinguishability at the shared guaranteed precision."""
        if not isinstance(other, PadicNumber) or self.p != other.p:
            return NotImplemented
        return (self - other).val is None

    __hash__ = None

    def __repr__(self) -> str:
        if self.is_exact_zero:
            return f"0 (p={self.p})"
        if self.is_zero_at_precision:
            return f"O({self.p}^{self.zero_bound})"
        return (f"{self.p}^{self.val}*{self.unit} "
                f"(mod {self.p}^{self.val + self.digits})")


def is_square_qp(x: PadicNumber) -> bool:
    """Whether x is a square in Q_p.

    Requires a nonzero value carrying at least 2*val_p(2)+1 certified unit
    digits (one digit for odd p, three for p = 2).
    """
    x._require_nonzero("square test")
    p = x.p
    need = 3 if p == 2 else 1
    if x.digits < need:
        raise PrecisionError(f"square test needs {need} unit digits")
    if x.val % 2 != 0:
        return False
    if p == 2:
        return x.unit % 8 == 1
    return pow(x.unit % p, (p - 1) // 2, p) == 1
