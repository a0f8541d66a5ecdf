"""Unreduced multivariate rational functions over the integers.

No multivariate gcd is ever taken. Equality is decided by cross
multiplication. The only simplifications applied are free ones: a
monomial denominator is absorbed into the numerator (monomials are units
in the Laurent ring), and identical numerator/denominator collapse to 1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .poly import Poly, ONE


class ZeroDivision(ArithmeticError):
    pass


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, int):
            num = Poly.const(num)
        if den is None:
            den = ONE
        elif isinstance(den, int):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivision("zero denominator")
        if den.is_monomial():
            (m, c), = den.terms.items()
            if c in (1, -1):
                num = num * Poly({tuple(-k for k in m): c})
                den = ONE
        elif num == den:
            num, den = ONE, ONE
        self.num: Poly = num
        self.den: Poly = den

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (Poly, int)):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __add__(self, other) -> "RatFunc":
        other = RatFunc.coerce(other)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        other = RatFunc.coerce(other)
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc(0)
        # cheap cross cancellation of structurally equal factors
        if self.num == other.den:
            return RatFunc(other.num, self.den)
        if self.den == other.num:
            return RatFunc(self.num, other.den)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivision("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> "RatFunc":
        return self * RatFunc.coerce(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k)

    def __eq__(self, other) -> bool:
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None  # equality is not structural

    def subs_monomial(self, name: str, image, coeff: int = 1) -> "RatFunc":
        return RatFunc(self.num.subs_monomial(name, image, coeff),
                       self.den.subs_monomial(name, image, coeff))

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        d = self.den.evaluate(values)
        if d == 0:
            raise ZeroDivision("denominator vanishes at evaluation point")
        return self.num.evaluate(values) / d

    def to_str(self) -> str:
        if self.den == ONE:
            return self.num.to_str()
        return f"({self.num.to_str()})/({self.den.to_str()})"

    def __repr__(self) -> str:
        return f"RatFunc({self.to_str()})"
