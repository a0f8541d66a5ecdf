"""The trigonometric gl(n) R-matrix with spectral parameter and its identities.

Basis of V (x) V: e_i (x) e_j has index ``i*n + j`` (0-based colors), i.e.
row-major order. All checks clear the common denominator ``q^{-1}z - q``
and compare Laurent-polynomial matrices, so every verdict is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from . import linalg
from .ring import Poly, QScalar, RatFunc
from .ring.poly import ONE, VARS

Q = Poly.var("q")
QI = Poly.var("q", -1)
Z = Poly.var("z")


def _mono(**powers) -> Tuple[int, ...]:
    return tuple(powers.get(v, 0) for v in VARS)


def _denominator() -> Poly:
    return QI * Z - Q


@dataclass
class SpectralMatrix:
    """Square matrix over RatFunc, stored sparsely (absent entries are 0)."""

    n: int
    size: int
    entries: Dict[int, Dict[int, RatFunc]] = field(default_factory=dict)

    def entry(self, row: int, col: int) -> RatFunc:
        return self.entries.get(row, {}).get(col, RatFunc(0))

    def index(self, i: int, j: int) -> int:
        """Index of e_i (x) e_j for 1-based colors."""
        return (i - 1) * self.n + (j - 1)

    def subs(self, name: str, image, coeff: int = 1) -> "SpectralMatrix":
        return SpectralMatrix(self.n, self.size,
                              linalg.mat_map(self.entries, lambda x: x.subs_monomial(name, image, coeff)))

    def dump(self) -> str:
        return "\n".join(f"{r} {c} {x.to_str()}" for r, c, x in linalg.entries(self.entries))


def build_R(n: int) -> SpectralMatrix:
    if n < 2:
        raise ValueError("n must be at least 2")
    den = _denominator()
    diag_off = RatFunc(Z - 1, den)
    upper = RatFunc(Z * (QI - Q), den)
    lower = RatFunc(QI - Q, den)
    ent: Dict[int, Dict[int, RatFunc]] = {}
    for i in range(n):
        for j in range(n):
            r = i * n + j
            if i == j:
                ent[r] = {r: RatFunc(1)}
            else:
                ent[r] = {r: diag_off, j * n + i: upper if i < j else lower}
    return SpectralMatrix(n, n * n, ent)


def perm_matrix(n: int, one=None) -> Dict[int, Dict[int, object]]:
    one = RatFunc(1) if one is None else one
    return {i * n + j: {j * n + i: one} for i in range(n) for j in range(n)}


# ---------------------------------------------------------------------
# denominator clearing

def clear_denominators(m: Dict[int, Dict[int, RatFunc]]) -> Tuple[Dict[int, Dict[int, Poly]], Poly]:
    """Return (polynomial matrix N, common denominator d) with m = N / d."""
    dens = []
    for _, _, x in linalg.entries(m):
        if x.den != ONE and all(x.den != d for d in dens):
            dens.append(x.den)
    common = ONE
    for d in dens:
        common = common * d
    out: Dict[int, Dict[int, Poly]] = {}
    for i, row in m.items():
        r = {}
        for j, x in row.items():
            if x.den == common:
                v = x.num
            else:
                cofactor = ONE
                for d in dens:
                    if d != x.den:
                        cofactor = cofactor * d
                if x.den != ONE and cofactor * x.den != common:
                    raise ArithmeticError("entry denominator not among the collected factors")
                v = x.num * cofactor
            if not v.is_zero():
                r[j] = v
        if r:
            out[i] = r
    return out, common


def embed(m: Dict[int, Dict[int, object]], n: int, legs: Tuple[int, int]) -> Dict[int, Dict[int, object]]:
    """Place a two-leg matrix on legs ``legs`` of V^{(x)3} by index arithmetic."""
    a, b = legs
    other = 3 - a - b
    out: Dict[int, Dict[int, object]] = {}
    for r, row in m.items():
        ri, rj = divmod(r, n)
        for c, x in row.items():
            ci, cj = divmod(c, n)
            for s in range(n):
                rr = [0, 0, 0]
                cc = [0, 0, 0]
                rr[a], rr[b], rr[other] = ri, rj, s
                cc[a], cc[b], cc[other] = ci, cj, s
                R = (rr[0] * n + rr[1]) * n + rr[2]
                C = (cc[0] * n + cc[1]) * n + cc[2]
                out.setdefault(R, {})[C] = x
    return out


# ---------------------------------------------------------------------
# reports

@dataclass
class CheckReport:
    name: str
    passed: bool
    counterexample: Optional[dict] = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed


def _residual_report(name: str, diff, details=None) -> CheckReport:
    bad = linalg.first_nonzero(diff)
    if bad is None:
        return CheckReport(name, True, None, details or {})
    r, c, v = bad
    return CheckReport(name, False, {"row": r, "col": c, "value": v.to_str()}, details or {})


# spectral substitutions for the three-variable YBE
_Z_OVER_W = _mono(z=1, w=-1)
_Z_TIMES_W = _mono(z=1, w=1)
_W = _mono(w=1)
_Z = _mono(z=1)

YBE_FORMS = {
    # R12(a) R13(b) R23(c) = R23(c) R13(b) R12(a); arguments as z-images
    "swapped": (_Z, _Z_OVER_W, _W),
    "difference": (_Z_OVER_W, _Z, _W),
    "product": (_Z, _Z_TIMES_W, _W),
}


def check_ybe(n: int, form: str = "difference", R: Optional[SpectralMatrix] = None) -> CheckReport:
    """Residual of R12(a)R13(b)R23(c) - R23(c)R13(b)R12(a) over Q(q, z, w).

    ``form='swapped'`` uses (a, b, c) = (z, z/w, w); ``form='difference'``
    uses (z/w, z, w) and ``form='product'`` uses (z, zw, w); in the last two
    the middle argument is the product of the outer ones, which is what the
    identity needs. The swapped arrangement is kept so its failure can be
    reported.
    """
    R = build_R(n) if R is None else R
    num, den = clear_denominators(R.entries)
    a, b, c = YBE_FORMS[form]
    mats = []
    for img, legs in ((a, (0, 1)), (b, (0, 2)), (c, (1, 2))):
        mats.append(embed(linalg.mat_map(num, lambda p: p.subs_monomial("z", img)), n, legs))
    r12, r13, r23 = mats
    lhs = linalg.mat_mul(linalg.mat_mul(r12, r13), r23)
    rhs = linalg.mat_mul(linalg.mat_mul(r23, r13), r12)
    return _residual_report(f"ybe[{form}]", linalg.mat_add(lhs, rhs, -1),
                            {"n": n, "form": form, "arguments": form_arguments(form)})


def form_arguments(form: str) -> str:
    return {"swapped": "R12(z) R13(z/w) R23(w)", "difference": "R12(z/w) R13(z) R23(w)",
            "product": "R12(z) R13(zw) R23(w)"}[form]


def check_unitarity(n: int, R: Optional[SpectralMatrix] = None) -> CheckReport:
    """P R(z) P . R(1/z) = identity, with denominators cleared."""
    R = build_R(n) if R is None else R
    num, den = clear_denominators(R.entries)
    P = perm_matrix(n, ONE)
    inv_img = _mono(z=-1)
    num_inv = linalg.mat_map(num, lambda p: p.subs_monomial("z", inv_img))
    den_inv = den.subs_monomial("z", inv_img)
    prod = linalg.mat_mul(linalg.mat_mul(linalg.mat_mul(P, num), P), num_inv)
    ident = linalg.identity(n * n, den * den_inv)
    return _residual_report("unitarity", linalg.mat_add(prod, ident, -1), {"n": n})


def _limit_entry(x: RatFunc, at_zero: bool) -> QScalar:
    """Constant term (z -> 0) or leading term (z -> infinity) of a ratio of Laurent polys."""
    from .ring.series import qscalar_from_poly

    def part(p: Poly):
        by_z = p.coeff_in("z")
        k = min(by_z) if at_zero else max(by_z)
        return k, qscalar_from_poly(by_z[k])

    kn, cn = part(x.num)
    kd, cd = part(x.den)
    if (at_zero and kn > kd) or (not at_zero and kn < kd):
        return QScalar()
    if kn != kd:
        raise ArithmeticError("entry diverges in the requested limit")
    return cn / cd


def limits_R(n: int, R: Optional[SpectralMatrix] = None):
    """Return (R(0), R(inf)) as QScalar matrices plus the consistency report.

    The consistency identity is R(0) = q^{-1} P (q R(inf)^{-1}) P.
    """
    R = build_R(n) if R is None else R
    lim0, liminf = {}, {}
    for r, c, x in linalg.entries(R.entries):
        for store, flag in ((lim0, True), (liminf, False)):
            v = _limit_entry(x, flag)
            if not v.is_zero():
                store.setdefault(r, {})[c] = v
    size = n * n
    inv_inf = linalg.inverse(liminf, size, QScalar(1), QScalar())
    P = perm_matrix(n, QScalar(1))
    qv = QScalar.q_power(1)
    rhs = linalg.mat_scale(linalg.mat_mul(linalg.mat_mul(P, linalg.mat_scale(inv_inf, qv)), P),
                           qv.inverse())
    report = _residual_report("limits", linalg.mat_add(lim0, rhs, -1), {"n": n})
    return lim0, liminf, report


# ---------------------------------------------------------------------
# normalization scalar of the fundamental exchange matrices

@dataclass(frozen=True)
class RhoFactor:
    """Normalization scalar of the fundamental exchange matrices.

    rho(z) = z^offset * prod of q-Pochhammer symbols (x z^{+-1}; p)^{+-1} with
    p = q^{2n}. The theta quotients are split into their Pochhammer factors
    (the common (p;p) factors cancel). :meth:`factors` exposes the symbolic
    data, :meth:`evaluate` gives exact rational values with every infinite
    product cut at a fixed number of factors.
    """

    k: int
    kp: int
    n: int
    offset: Fraction
    b: int
    s: int
    m: int

    def factors(self):
        """List of (sign, q-exponent, z-power, +1 numerator / -1 denominator).

        A factor stands for (sign * q^e * z^zp; q^{2n})_inf.
        """
        n, b, s = self.n, self.b, self.s
        sb = -1 if b % 2 else 1
        ss = -1 if s % 2 else 1
        out = [(sb, b, -1, +1), (ss, s, 1, +1), (sb, b, 1, -1), (ss, s, -1, -1)]
        for i in range(1, self.m + 1):
            e = 2 * i + b
            # theta(x/z) / theta(x z) with x = (-q)^e
            out += [(sb, e, -1, +1), (sb, 2 * n - e, 1, +1),
                    (sb, e, 1, -1), (sb, 2 * n - e, -1, -1)]
        return out

    def evaluate(self, qv, zv, terms: int) -> Fraction:
        """Product part at q = qv, z = zv, each infinite product cut at ``terms`` factors."""
        qv, zv = Fraction(qv), Fraction(zv)
        p = qv ** (2 * self.n)
        val = Fraction(1)
        for sign, e, zp, where in self.factors():
            arg = sign * qv ** e * zv ** zp
            f = Fraction(1)
            for j in range(terms):
                f *= 1 - arg * p ** j
            val = val * f if where > 0 else val / f
        return val


def rho_factor(k: int, kp: int, n: int, order: int = 0) -> RhoFactor:
    if n < 2 or k not in (1, n - 1) or kp not in (1, n - 1):
        raise ValueError("rho factor is defined for k, k' in {1, n-1}")
    if order < 0:
        raise ValueError("order must be >= 0")
    offset = Fraction(-k * kp, n) + min(k, kp)
    b = abs(k - kp)
    s = min(k + kp, 2 * n - k - kp)
    m = min(k, kp, n - k, n - kp)
    return RhoFactor(k, kp, n, offset, b, s, m)
