"""Exact rational functions of the single formal parameter ``q``.

Numerator and denominator are dense integer coefficient tuples
``(c0, c1, ...)`` meaning ``c0 + c1 q + ...``. Values are kept canonical:
the polynomial gcd is 1, the integer contents are coprime and the
denominator has a positive leading coefficient. Canonical forms are
compared structurally.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Tuple

Dense = Tuple[int, ...]


def _trim(a) -> Dense:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _add(a: Dense, b: Dense) -> Dense:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _neg(a: Dense) -> Dense:
    return tuple(-c for c in a)


def _mul(a: Dense, b: Dense) -> Dense:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _content(a: Dense) -> int:
    g = 0
    for c in a:
        g = gcd(g, c)
    return g


def _exact_div_int(a: Dense, k: int) -> Dense:
    return tuple(c // k for c in a)


def _primitive(a: Dense) -> Dense:
    if not a:
        return a
    g = _content(a)
    if a[-1] < 0:
        g = -g
    return _exact_div_int(a, g)


def _pseudo_rem(a: Dense, b: Dense) -> Dense:
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        a = [c * lb for c in a]
        for i, c in enumerate(b):
            a[i + shift] -= la * c
        a = list(_trim(a))
    return tuple(a)


def poly_gcd(a: Dense, b: Dense) -> Dense:
    """Primitive gcd over the integers (equivalently over Q up to units)."""
    if not a:
        return _primitive(b)
    if not b:
        return _primitive(a)
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _primitive(r)
    return _primitive(a)


def poly_divexact(a: Dense, b: Dense) -> Dense:
    """Exact division of integer polynomials; raises if not exact."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    out = [0] * max(len(a) - db, 0)
    while a and len(a) - 1 >= db:
        shift = len(a) - 1 - db
        qc, rem = divmod(a[-1], lb)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        out[shift] = qc
        for i, c in enumerate(b):
            a[i + shift] -= qc * c
        a = list(_trim(a))
    if a:
        raise ArithmeticError("inexact polynomial division")
    return _trim(out)


class QScalar:
    """Canonical element of Q(q)."""

    __slots__ = ("num", "den")

    def __init__(self, num=(), den=(1,), _canonical: bool = False):
        if isinstance(num, int):
            num = (num,)
        if isinstance(den, int):
            den = (den,)
        num, den = _trim(num), _trim(den)
        if not den:
            raise ZeroDivisionError("QScalar with zero denominator")
        if not _canonical:
            num, den = self._canon(num, den)
        self.num: Dense = num
        self.den: Dense = den

    @staticmethod
    def _canon(num: Dense, den: Dense):
        if not num:
            return (), (1,)
        if len(den) > 1:
            g = poly_gcd(num, den)
            if len(g) > 1:
                num = poly_divexact(num, g)
                den = poly_divexact(den, g)
        c = gcd(_content(num), _content(den))
        if den[-1] < 0:
            c = -c
        if c != 1:
            num = _exact_div_int(num, c)
            den = _exact_div_int(den, c)
        return num, den

    @staticmethod
    def _reduced(num: Dense, den: Dense, common: Dense) -> "QScalar":
        # num/den is coprime except possibly for factors of ``common``
        if not num:
            return QScalar()
        if len(common) > 1:
            g = poly_gcd(num, common)
            if len(g) > 1:
                num, den = poly_divexact(num, g), poly_divexact(den, g)
        c = gcd(_content(num), _content(den))
        if den[-1] < 0:
            c = -c
        if c != 1:
            num, den = _exact_div_int(num, c), _exact_div_int(den, c)
        return QScalar(num, den, _canonical=True)

    # constructors -----------------------------------------------------
    @classmethod
    def q_power(cls, k: int, coeff: int = 1) -> "QScalar":
        if k >= 0:
            return cls((0,) * k + (coeff,), (1,), _canonical=True)
        return cls((coeff,), (0,) * (-k) + (1,))

    @classmethod
    def from_laurent(cls, coeffs: dict) -> "QScalar":
        """From a mapping q-exponent -> int (negative exponents allowed)."""
        if not coeffs:
            return cls()
        lo = min(coeffs)
        shift = -lo if lo < 0 else 0
        hi = max(coeffs) + shift
        num = [0] * (hi + 1)
        for k, c in coeffs.items():
            num[k + shift] += c
        return cls(tuple(num), (0,) * shift + (1,))

    @classmethod
    def coerce(cls, x) -> "QScalar":
        if isinstance(x, QScalar):
            return x
        if isinstance(x, int):
            return cls((x,), (1,), _canonical=True) if x else cls()
        if isinstance(x, Fraction):
            return cls((x.numerator,), (x.denominator,))
        raise TypeError(f"cannot coerce {type(x).__name__} to QScalar")

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return len(self.den) == 1

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "QScalar":
        other = QScalar.coerce(other)
        if not self.num:
            return other
        if not other.num:
            return self
        # a/b + c/d with g = gcd(b, d): only g can share factors with the sum
        b, d = self.den, other.den
        if b == d:
            return QScalar._reduced(_add(self.num, other.num), b, b)
        g = poly_gcd(b, d) if len(b) > 1 and len(d) > 1 else (1,)
        if len(g) > 1:
            bg, dg = poly_divexact(b, g), poly_divexact(d, g)
        else:
            bg, dg = b, d
        num = _add(_mul(self.num, dg), _mul(other.num, bg))
        return QScalar._reduced(num, _mul(b, dg), g)

    __radd__ = __add__

    def __neg__(self) -> "QScalar":
        return QScalar(_neg(self.num), self.den, _canonical=True)

    def __sub__(self, other) -> "QScalar":
        return self + (-QScalar.coerce(other))

    def __rsub__(self, other) -> "QScalar":
        return QScalar.coerce(other) - self

    def __mul__(self, other) -> "QScalar":
        other = QScalar.coerce(other)
        if not self.num or not other.num:
            return QScalar()
        # cross-cancel: (a/g1)(c/g2) / ((b/g2)(d/g1)) is already coprime
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = poly_gcd(a, d) if len(a) > 1 and len(d) > 1 else (1,)
        g2 = poly_gcd(c, b) if len(c) > 1 and len(b) > 1 else (1,)
        if len(g1) > 1:
            a, d = poly_divexact(a, g1), poly_divexact(d, g1)
        if len(g2) > 1:
            c, b = poly_divexact(c, g2), poly_divexact(b, g2)
        return QScalar._reduced(_mul(a, c), _mul(b, d), (1,))

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if not self.num:
            raise ZeroDivisionError("inverse of zero QScalar")
        return QScalar(self.den, self.num)

    def __truediv__(self, other) -> "QScalar":
        return self * QScalar.coerce(other).inverse()

    def __rtruediv__(self, other) -> "QScalar":
        return QScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "QScalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = QScalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        try:
            other = QScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # evaluation / formatting -----------------------------------------
    def evaluate(self, qv) -> Fraction:
        qv = Fraction(qv)
        n = sum((Fraction(c) * qv ** i for i, c in enumerate(self.num)), Fraction(0))
        d = sum((Fraction(c) * qv ** i for i, c in enumerate(self.den)), Fraction(0))
        return n / d

    def laurent_terms(self):
        """Return {exp: coeff} when the value is a Laurent polynomial, else None."""
        den = self.den
        nz = [i for i, c in enumerate(den) if c]
        if len(nz) != 1 or den[nz[0]] not in (1, -1):
            return None
        shift, sign = nz[0], den[nz[0]]
        return {i - shift: sign * c for i, c in enumerate(self.num) if c}

    @staticmethod
    def _fmt(a: Dense) -> str:
        if not a:
            return "0"
        parts = []
        for k, c in enumerate(a):
            if c:
                parts.append(f"{c}*q^{k}")
        return "+".join(parts).replace("+-", "-")

    def to_str(self) -> str:
        return f"{self._fmt(self.num)}/{self._fmt(self.den)}"

    def __repr__(self) -> str:
        return f"QScalar({self.to_str()})"


ONE_Q = QScalar(1)
ZERO_Q = QScalar()
