"""Sparse Laurent polynomials with integer coefficients.

Every polynomial lives in the same fixed set of formal variables ``VARS``;
a monomial is a tuple of integer exponents (negative exponents allowed).
Unused variables simply carry exponent zero.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

VARS: Tuple[str, ...] = ("q", "z", "w", "x", "y", "t")
NVARS = len(VARS)
_INDEX = {name: i for i, name in enumerate(VARS)}
ZERO_EXP = (0,) * NVARS

Monomial = Tuple[int, ...]


def _add_exp(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Laurent polynomial: mapping monomial -> nonzero int."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        if terms:
            self.terms: Dict[Monomial, int] = {m: c for m, c in terms.items() if c}
        else:
            self.terms = {}
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls({ZERO_EXP: c}) if c else cls()

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Poly":
        e = [0] * NVARS
        e[_INDEX[name]] = power
        return cls({tuple(e): 1})

    @classmethod
    def monomial(cls, coeff: int = 1, **powers: int) -> "Poly":
        e = [0] * NVARS
        for name, p in powers.items():
            e[_INDEX[name]] = p
        return cls({tuple(e): coeff})

    @classmethod
    def _raw(cls, terms: Dict[Monomial, int]) -> "Poly":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ZERO_EXP in self.terms)

    def const_value(self) -> int:
        return self.terms.get(ZERO_EXP, 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "Poly":
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        if isinstance(other, int):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, int):
            if other == 0:
                return Poly()
            return Poly._raw({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            (m, c), = self.terms.items()
            if c not in (1, -1):
                raise ValueError("negative power needs a unit coefficient")
            return Poly({tuple(-k * x for x in m): c ** (-k)})
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # substitution -----------------------------------------------------
    def subs_monomial(self, name: str, image: Monomial, coeff: int = 1) -> "Poly":
        """Substitute ``name -> coeff * image`` where image is a monomial.

        Only unit coefficients are allowed so that negative powers stay integral.
        """
        if coeff not in (1, -1):
            raise ValueError("monomial substitution needs a unit coefficient")
        i = _INDEX[name]
        out: Dict[Monomial, int] = {}
        for m, c in self.terms.items():
            k = m[i]
            base = list(m)
            base[i] = 0
            new = tuple(b + k * e for b, e in zip(base, image))
            v = out.get(new, 0) + c * (coeff ** abs(k))
            if v:
                out[new] = v
            else:
                out.pop(new, None)
        return Poly._raw(out)

    def evaluate(self, values: Mapping[str, Fraction | int]):
        """Exact evaluation at rational points; unspecified variables must be absent."""
        total = Fraction(0)
        for m, c in self.terms.items():
            term = Fraction(c)
            for i, k in enumerate(m):
                if k:
                    term *= Fraction(values[VARS[i]]) ** k
            total += term
        return total

    def partial_eval(self, name: str, value) -> Dict[Monomial, Fraction]:
        i = _INDEX[name]
        out: Dict[Monomial, Fraction] = {}
        value = Fraction(value)
        for m, c in self.terms.items():
            base = list(m)
            k = base[i]
            base[i] = 0
            key = tuple(base)
            out[key] = out.get(key, 0) + c * value ** k
        return {k: v for k, v in out.items() if v}

    def degree_range(self, name: str) -> Tuple[int, int]:
        i = _INDEX[name]
        exps = [m[i] for m in self.terms]
        return min(exps), max(exps)

    def coeff_in(self, name: str) -> Dict[int, "Poly"]:
        """Split by powers of one variable."""
        i = _INDEX[name]
        out: Dict[int, Dict[Monomial, int]] = {}
        for m, c in self.terms.items():
            rest = list(m)
            k = rest[i]
            rest[i] = 0
            out.setdefault(k, {})[tuple(rest)] = c
        return {k: Poly._raw(v) for k, v in out.items()}

    def variables(self) -> set:
        used = set()
        for m in self.terms:
            for i, k in enumerate(m):
                if k:
                    used.add(VARS[i])
        return used

    def __repr__(self) -> str:
        return f"Poly({self.to_str()})"

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = "*".join(
                f"{VARS[i]}^{k}" if k != 1 else VARS[i] for i, k in enumerate(m) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_sum(items: Iterable[Poly]) -> Poly:
    out: Dict[Monomial, int] = {}
    for p in items:
        for m, c in p.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return Poly._raw(out)


q = Poly.var("q")
z = Poly.var("z")
w = Poly.var("w")
ONE = Poly.const(1)
