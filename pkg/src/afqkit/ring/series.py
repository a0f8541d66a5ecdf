"""Truncated Laurent/Puiseux series in one formal variable.

A series is ``var^offset * sum_k c_k var^k`` where the coefficients
``c_k`` are exact :class:`QScalar` values. Only the exponents inside the
window ``[lo, hi]`` are known; ``hi=None`` marks a series whose stored terms
are complete (a Laurent polynomial). When ``bounded_below`` is true every
exponent below ``lo`` is known to vanish, which is what lets products of
power series stay exact up to ``min(a.lo + b.hi, b.lo + a.hi)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from .poly import Poly, VARS
from .qscalar import QScalar


class WindowError(ValueError):
    pass


def _min_opt(*vals):
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


@dataclass(frozen=True)
class PuiseuxSeries:
    coeffs: Dict[int, QScalar]
    lo: int
    hi: Optional[int]
    offset: Fraction = Fraction(0)
    var: str = "z"
    bounded_below: bool = True

    def __post_init__(self):
        clean = {}
        for k, c in self.coeffs.items():
            c = QScalar.coerce(c)
            if c.is_zero():
                continue
            if k < self.lo or (self.hi is not None and k > self.hi):
                raise WindowError(f"exponent {k} outside window [{self.lo}, {self.hi}]")
            clean[k] = c
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "offset", Fraction(self.offset))

    # constructors -----------------------------------------------------
    @classmethod
    def polynomial(cls, coeffs: Dict[int, object], var: str = "z",
                   offset: Fraction = Fraction(0)) -> "PuiseuxSeries":
        lo = min(coeffs) if coeffs else 0
        return cls(dict(coeffs), lo, None, offset, var)

    @classmethod
    def one(cls, var: str = "z") -> "PuiseuxSeries":
        return cls.polynomial({0: 1}, var)

    # queries ----------------------------------------------------------
    def coefficient(self, k: int) -> QScalar:
        if k < self.lo:
            if self.bounded_below:
                return QScalar()
            raise WindowError(f"exponent {k} below window")
        if self.hi is not None and k > self.hi:
            raise WindowError(f"exponent {k} above window")
        return self.coeffs.get(k, QScalar())

    def window(self) -> Tuple[int, Optional[int]]:
        return self.lo, self.hi

    def is_exact(self) -> bool:
        return self.hi is None

    def support(self) -> Tuple[int, int]:
        if not self.coeffs:
            return 0, 0
        return min(self.coeffs), max(self.coeffs)

    # arithmetic -------------------------------------------------------
    def _check_compatible(self, other: "PuiseuxSeries"):
        if self.var != other.var:
            raise ValueError("series in different variables")
        if self.offset != other.offset:
            raise ValueError("series with different exponent offsets cannot be added")

    def __add__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        self._check_compatible(other)
        two_sided = [s.lo for s in (self, other) if not s.bounded_below]
        lo = max(two_sided) if two_sided else min(self.lo, other.lo)
        hi = _min_opt(self.hi, other.hi)
        out = {}
        for src in (self.coeffs, other.coeffs):
            for k, c in src.items():
                if k < lo or (hi is not None and k > hi):
                    continue
                out[k] = out.get(k, QScalar()) + c
        return PuiseuxSeries(out, lo, hi, self.offset, self.var,
                             self.bounded_below and other.bounded_below)

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries({k: -c for k, c in self.coeffs.items()}, self.lo, self.hi,
                             self.offset, self.var, self.bounded_below)

    def __sub__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return self + (-other)

    def scale(self, c) -> "PuiseuxSeries":
        c = QScalar.coerce(c)
        return PuiseuxSeries({k: v * c for k, v in self.coeffs.items()}, self.lo, self.hi,
                             self.offset, self.var, self.bounded_below)

    def shift(self, k: int) -> "PuiseuxSeries":
        """Multiply by var^k."""
        return PuiseuxSeries({e + k: c for e, c in self.coeffs.items()}, self.lo + k,
                             None if self.hi is None else self.hi + k,
                             self.offset, self.var, self.bounded_below)

    def with_offset(self, offset) -> "PuiseuxSeries":
        return PuiseuxSeries(dict(self.coeffs), self.lo, self.hi, Fraction(offset),
                             self.var, self.bounded_below)

    def truncate(self, hi: int) -> "PuiseuxSeries":
        if self.hi is not None and hi > self.hi:
            raise WindowError("cannot widen a window by truncation")
        return PuiseuxSeries({k: c for k, c in self.coeffs.items() if k <= hi},
                             self.lo, hi, self.offset, self.var, self.bounded_below)

    def _product_window(self, other: "PuiseuxSeries"):
        a, b = self, other
        if a.is_exact() and not b.is_exact():
            a, b = b, a
        if b.is_exact():
            bmin, bmax = b.support()
            if a.is_exact():
                return a.lo + b.lo, None, a.bounded_below and b.bounded_below
            if a.bounded_below:
                return a.lo + bmin, a.hi + bmin, True
            return a.lo + bmax, a.hi + bmin, False
        if not (a.bounded_below and b.bounded_below):
            raise WindowError("product of two two-sided truncated series is not determined")
        return a.lo + b.lo, min(a.lo + b.hi, b.lo + a.hi), True

    def __mul__(self, other) -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            return self.scale(other)
        if self.var != other.var:
            raise ValueError("series in different variables")
        lo, hi, bb = self._product_window(other)
        out: Dict[int, QScalar] = {}
        for i, x in self.coeffs.items():
            for j, y in other.coeffs.items():
                k = i + j
                if k < lo or (hi is not None and k > hi):
                    continue
                out[k] = out.get(k, QScalar()) + x * y
        return PuiseuxSeries(out, lo, hi, self.offset + other.offset, self.var, bb)

    __rmul__ = __mul__

    def reciprocal(self, hi: Optional[int] = None) -> "PuiseuxSeries":
        """Inverse of a bounded-below series with invertible leading coefficient."""
        if not self.bounded_below:
            raise WindowError("reciprocal needs a series bounded below")
        v = self.lo
        c0 = self.coeffs.get(v)
        if c0 is None or c0.is_zero():
            raise ZeroDivisionError("leading coefficient at window start is zero")
        length = (self.hi - v) if self.hi is not None else None
        if hi is not None:
            length = hi + v if length is None else min(length, hi + v)
        if length is None:
            raise WindowError("reciprocal of an exact series needs an explicit order")
        inv0 = c0.inverse()
        b = [inv0]
        for m in range(1, length + 1):
            acc = QScalar()
            for j in range(1, m + 1):
                a = self.coeffs.get(v + j)
                if a is not None:
                    acc = acc + a * b[m - j]
            b.append(-acc * inv0)
        return PuiseuxSeries({i - v: c for i, c in enumerate(b)}, -v, -v + length,
                             -self.offset, self.var, True)

    def __truediv__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            return self.scale(QScalar.coerce(other).inverse())
        return self * other.reciprocal()

    # comparison / evaluation ------------------------------------------
    def agrees_with(self, other: "PuiseuxSeries") -> bool:
        """Coefficientwise equality on the common known window."""
        if self.var != other.var or self.offset != other.offset:
            return False
        lo = max(self.lo, other.lo)
        hi = _min_opt(self.hi, other.hi)
        keys = set(self.coeffs) | set(other.coeffs)
        if self.bounded_below and other.bounded_below:
            lo = min(self.lo, other.lo)
        for k in keys:
            if k < lo or (hi is not None and k > hi):
                continue
            if self.coeffs.get(k, QScalar()) != other.coeffs.get(k, QScalar()):
                return False
        return True

    def residual(self, other: "PuiseuxSeries") -> Dict[int, QScalar]:
        diff = self - other
        return dict(diff.coeffs)

    def evaluate(self, u, qv) -> Fraction:
        """Exact value of the stored part at var = u, q = qv (offset ignored)."""
        u = Fraction(u)
        return sum((c.evaluate(qv) * u ** k for k, c in self.coeffs.items()), Fraction(0))

    def dump(self) -> str:
        """One line per exponent: ``exponent<TAB>numerator/denominator``."""
        lines = []
        for k in sorted(self.coeffs):
            e = self.offset + k
            exp = str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
            lines.append(f"{exp}\t{self.coeffs[k].to_str()}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return (f"PuiseuxSeries(var={self.var}, offset={self.offset}, "
                f"window=[{self.lo}, {self.hi}], terms={len(self.coeffs)})")


# ---------------------------------------------------------------------
# scalar conversion

def qscalar_from_poly(p: Poly) -> QScalar:
    """Convert a Laurent polynomial involving only q into a QScalar."""
    coeffs = {}
    for m, c in p.terms.items():
        if any(m[1:]):
            raise ValueError("polynomial depends on variables other than q")
        coeffs[m[0]] = coeffs.get(m[0], 0) + c
    return QScalar.from_laurent({k: c for k, c in coeffs.items() if c})


# ---------------------------------------------------------------------
# q-products

def _q(k: int) -> QScalar:
    return QScalar.q_power(k)


def qpochhammer(coeff, p_exponent: int, order: int, z_power: int = 1,
                var: str = "z") -> PuiseuxSeries:
    """Finite product prod_{j<order} (1 - a p^j) with a = coeff*var^z_power, p = q^p_exponent.

    Every omitted factor is 1 modulo p^order, so this is the truncation of
    the infinite product in the p-adic sense; the result is an exact
    polynomial in ``var``.
    """
    if order < 0 or p_exponent < 1:
        raise ValueError("need order >= 0 and p_exponent >= 1")
    coeff = QScalar.coerce(coeff)
    poly = {0: QScalar(1)}
    if coeff.is_zero():
        return PuiseuxSeries.polynomial(poly, var)
    for j in range(order):
        a = -(coeff * _q(p_exponent * j))
        nxt = dict(poly)
        for k, c in poly.items():
            nxt[k + z_power] = nxt.get(k + z_power, QScalar()) + c * a
        poly = nxt
    return PuiseuxSeries.polynomial(poly, var)


def _poch_finite_q(a_exp: int, p_exponent: int, k: int) -> QScalar:
    """(q^a_exp; q^p)_k as an exact QScalar."""
    out = QScalar(1)
    for j in range(k):
        out = out * (1 - _q(a_exp + p_exponent * j))
    return out


def qpochhammer_zseries(coeff, p_exponent: int, order: int, inverse: bool = False,
                        var: str = "z") -> PuiseuxSeries:
    """Exact z-expansion of (a z; p)_inf (or its reciprocal) to z-degree ``order``.

    Uses the q-binomial (Euler) expansions, so every coefficient is the full
    rational function of q, not a truncation.
    """
    coeff = QScalar.coerce(coeff)
    out = {}
    for k in range(order + 1):
        denom = _poch_finite_q(p_exponent, p_exponent, k)
        if inverse:
            c = coeff ** k / denom
        else:
            c = (-coeff) ** k * _q(p_exponent * k * (k - 1) // 2) / denom
        out[k] = c
    return PuiseuxSeries(out, 0, order, Fraction(0), var, True)


def q_product_series(factors: Iterable[Tuple[int, int, int]], order: int) -> PuiseuxSeries:
    """q-expansion of prod (q^s; q^p)_inf^{sign} to q-degree ``order``.

    ``factors`` lists ``(s, p, sign)`` with ``s >= 1``; integer coefficients.
    """
    series = [1] + [0] * order
    for s, p, sign in factors:
        if s < 1 or p < 1:
            raise ValueError("q-adic product needs positive exponents")
        e = s
        while e <= order:
            if sign > 0:
                for d in range(order, e - 1, -1):
                    series[d] -= series[d - e]
            else:
                for d in range(e, order + 1):
                    series[d] += series[d - e]
            e += p
    return PuiseuxSeries({k: QScalar(c) for k, c in enumerate(series) if c},
                         0, order, Fraction(0), "q", True)


def theta(p_exponent: int, order: int, var: str = "z") -> PuiseuxSeries:
    """(z;p)(p/z;p)(p;p) with p = q^p_exponent on the window [-order, order].

    Coefficients come from the triple product: the z^n term is
    (-1)^n p^{n(n-1)/2}, exact in q.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    out = {}
    for n in range(-order, order + 1):
        out[n] = QScalar.q_power(p_exponent * n * (n - 1) // 2, -1 if n % 2 else 1)
    return PuiseuxSeries(out, -order, order, Fraction(0), var, False)


# ---------------------------------------------------------------------
# formal delta

@dataclass(frozen=True)
class DeltaTerm:
    """scale * delta(var) with delta(z) = sum_n z^n."""

    scale: QScalar = field(default_factory=lambda: QScalar(1))
    var: str = "z"

    def is_zero(self) -> bool:
        return self.scale.is_zero()


def delta_apply(f, d: DeltaTerm) -> DeltaTerm:
    """f(z) delta(z) = f(1) delta(z) for a Laurent polynomial f."""
    if isinstance(f, int):
        f = Poly.const(f)
    if d.var not in VARS:
        raise ValueError(f"unknown variable {d.var}")
    at_one = f.subs_monomial(d.var, (0,) * len(VARS))
    return DeltaTerm(d.scale * qscalar_from_poly(at_one), d.var)
