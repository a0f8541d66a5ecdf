"""Evaluation modules of U_q(sl(n)^), two-point functions and exchange relations.

Index sets I are sorted tuples of elements of {0, ..., n-1}; ``v_I`` spans
V^(k). Matrices are dicts ``row -> {col: QScalar}`` keyed by basis labels.
All q-dependence is exact (QScalar); the exchange relations, whose two sides
are expanded in opposite directions, are compared numerically at a rational
q with every infinite product cut at a fixed number of factors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Tuple

from .ring import QScalar
from .ring.series import PuiseuxSeries, q_product_series, qpochhammer_zseries

Subset = Tuple[int, ...]
QMatrix = Dict[object, Dict[object, QScalar]]

ONE = QScalar(1)


def mq(e: int) -> QScalar:
    """(-q)^e."""
    return QScalar.q_power(e, -1 if e % 2 else 1)


def s_of(I) -> int:
    return sum(I)


def delta_weight(n: int, j: int) -> Fraction:
    """Delta_j = j(n-j)/2n with the index read mod n."""
    j %= n
    return Fraction(j * (n - j), 2 * n)


# ---------------------------------------------------------------------
# fundamental modules

@dataclass
class FundamentalModule:
    """V^(k): basis of k-subsets, Chevalley generators acting by signed moves.

    ``z_degree`` records the loop bookkeeping of the evaluation lift: E_0
    raises the power of z by one and F_0 lowers it.
    """

    n: int
    k: int
    basis: List[Subset]
    z_degree: Dict[str, int] = field(default_factory=dict)

    def act(self, gen: str, i: int, I: Subset) -> Optional[Tuple[Subset, QScalar]]:
        n = self.n
        i %= n
        prev = (i - 1) % n
        S = set(I)
        if gen == "E":
            if i not in S or prev in S:
                return None
            return tuple(sorted(S - {i} | {prev})), ONE
        if gen == "F":
            if prev not in S or i in S:
                return None
            return tuple(sorted(S - {prev} | {i})), ONE
        if gen == "K":
            return I, QScalar.q_power((prev in S) - (i in S))
        if gen == "Kinv":
            return I, QScalar.q_power((i in S) - (prev in S))
        raise ValueError(f"unknown generator {gen}")

    def matrix(self, gen: str, i: int) -> QMatrix:
        out: QMatrix = {}
        for I in self.basis:
            r = self.act(gen, i, I)
            if r is not None:
                out.setdefault(r[0], {})[I] = r[1]
        return out

    @property
    def dim(self) -> int:
        return len(self.basis)


def build_pi_k(n: int, k: int) -> FundamentalModule:
    if not 1 <= k <= n - 1:
        raise ValueError("need 1 <= k <= n-1")
    basis = [tuple(c) for c in combinations(range(n), k)]
    return FundamentalModule(n, k, basis, {"E0": 1, "F0": -1})


# small sparse helpers over arbitrary keys

def mmul(a: QMatrix, b: QMatrix) -> QMatrix:
    out: QMatrix = {}
    for i, row in a.items():
        acc: Dict[object, QScalar] = {}
        for k, x in row.items():
            for j, y in b.get(k, {}).items():
                acc[j] = acc[j] + x * y if j in acc else x * y
        acc = {j: v for j, v in acc.items() if not v.is_zero()}
        if acc:
            out[i] = acc
    return out


def madd(a: QMatrix, b: QMatrix, sign: int = 1) -> QMatrix:
    out: QMatrix = {i: dict(r) for i, r in a.items()}
    for i, row in b.items():
        dst = out.setdefault(i, {})
        for j, y in row.items():
            y = y if sign == 1 else -y
            dst[j] = dst[j] + y if j in dst else y
            if dst[j].is_zero():
                del dst[j]
        if not dst:
            del out[i]
    return out


def mscale(a: QMatrix, c) -> QMatrix:
    c = QScalar.coerce(c)
    out: QMatrix = {}
    for i, row in a.items():
        r = {j: x * c for j, x in row.items() if not (x * c).is_zero()}
        if r:
            out[i] = r
    return out


def mtranspose(a: QMatrix) -> QMatrix:
    out: QMatrix = {}
    for i, row in a.items():
        for j, x in row.items():
            out.setdefault(j, {})[i] = x
    return out


def mzero(a: QMatrix) -> bool:
    return all(x.is_zero() for row in a.values() for x in row.values())


# ---------------------------------------------------------------------
# dual modules and the isomorphisms C_+-

def antipode_matrix(mod: FundamentalModule, gen: str, i: int, power: int) -> QMatrix:
    """pi(S^power(x)) for Delta(E) = E(x)1 + K(x)E, Delta(F) = F(x)K^-1 + 1(x)F.

    S(E) = -K^-1 E, S(F) = -F K, S(K) = K^-1; S^-1(E) = -E K^-1, S^-1(F) = -K F.
    """
    E, F = mod.matrix("E", i), mod.matrix("F", i)
    K, Ki = mod.matrix("K", i), mod.matrix("Kinv", i)
    if gen == "K":
        return Ki
    if gen == "E":
        return mscale(mmul(Ki, E) if power == 1 else mmul(E, Ki), -1)
    if gen == "F":
        return mscale(mmul(F, K) if power == 1 else mmul(K, F), -1)
    raise ValueError(gen)


def dual_iso(n: int, k: int, sign: int) -> QMatrix:
    """C_+-: v_I -> (-q)^{+-s(I)} v*_{I^c}; rows are labels ('*', I^c)."""
    if not 1 <= k <= n - 1:
        raise ValueError("need 1 <= k <= n-1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    out: QMatrix = {}
    for I in combinations(range(n), k):
        Ic = tuple(x for x in range(n) if x not in I)
        out[("*", Ic)] = {tuple(I): mq(sign * s_of(I))}
    return out


def spectral_shift(n: int, sign: int) -> QScalar:
    """C_+- relates V^(k) at z(-q)^{-+n} to the dual of V^(n-k) at z."""
    return mq(-sign * n)


def check_dual_iso(n: int, k: int, sign: int, antipode_power: Optional[int] = None):
    """C pi^(k)_{z'}(x) = pi^(n-k)*_z(x) C for all Chevalley generators.

    The dual action is the transpose of pi(S^p(x)) with p = sign unless
    overridden. Loop generators carry their z factor: on the source the
    factor is z' = z(-q)^{-+n}, on the target z, so only the ratio enters.
    Returns (passed, first failing generator or None).
    """
    p = sign if antipode_power is None else antipode_power
    src, dst = build_pi_k(n, k), build_pi_k(n, n - k)
    C = dual_iso(n, k, sign)
    ratio = spectral_shift(n, sign)
    relabel = lambda m: {("*", r): {("*", c): x for c, x in row.items()} for r, row in m.items()}
    for gen in ("E", "F", "K"):
        for i in range(n):
            left = mmul(C, src.matrix(gen, i))
            if i == 0 and gen == "E":
                left = mscale(left, ratio)
            elif i == 0 and gen == "F":
                left = mscale(left, ratio.inverse())
            right = mmul(relabel(mtranspose(antipode_matrix(dst, gen, i, p))), C)
            if not mzero(madd(left, right, -1)):
                return False, (gen, i)
    return True, None


# ---------------------------------------------------------------------
# tensor products and the projectors on V^(1) (x) V^(1)

def kron(a: QMatrix, b: QMatrix) -> QMatrix:
    out: QMatrix = {}
    for i1, r1 in a.items():
        for i2, r2 in b.items():
            row = {}
            for j1, x in r1.items():
                for j2, y in r2.items():
                    row[(j1, j2)] = x * y
            out[(i1, i2)] = row
    return out


def ident(labels) -> QMatrix:
    return {l: {l: ONE} for l in labels}


def coproduct(mod1: FundamentalModule, mod2: FundamentalModule, gen: str, i: int) -> QMatrix:
    """Delta(E) = E(x)1 + K(x)E, Delta(F) = F(x)K^-1 + 1(x)F, Delta(K) = K(x)K."""
    I1, I2 = ident(mod1.basis), ident(mod2.basis)
    if gen == "K":
        return kron(mod1.matrix("K", i), mod2.matrix("K", i))
    if gen == "E":
        return madd(kron(mod1.matrix("E", i), I2), kron(mod1.matrix("K", i), mod2.matrix("E", i)))
    if gen == "F":
        return madd(kron(mod1.matrix("F", i), mod2.matrix("Kinv", i)), kron(I1, mod2.matrix("F", i)))
    raise ValueError(gen)


def flip(labels1, labels2) -> QMatrix:
    """P: v (x) w -> w (x) v."""
    return {(b, a): {(a, b): ONE} for a in labels1 for b in labels2}


def commutes_with_coproduct(n: int, m: QMatrix, affine: bool = False) -> Optional[Tuple[str, int]]:
    V = build_pi_k(n, 1)
    for gen in ("E", "F", "K"):
        for i in range(0 if affine else 1, n):
            d = coproduct(V, V, gen, i)
            if not mzero(madd(mmul(m, d), mmul(d, m), -1)):
                return gen, i
    return None


@dataclass
class Projectors:
    """Spectral projectors of the braid limit on V^(1) (x) V^(1).

    ``identification`` maps the rmat color a (0-based) to the subset
    label; ``braid`` names which limit and side the constant operator came
    from; eigenvalues are normalized to q (symmetric) and -q^-1.
    """

    n: int
    sym: QMatrix
    anti: QMatrix
    braid: QMatrix
    identification: Dict[int, Subset]
    source: str
    scale: QScalar


def _rmat_limits_as_labels(n: int, ident_map: Dict[int, Subset]):
    from .rmat import limits_R
    lim0, liminf, _ = limits_R(n)
    def relabel(m):
        out: QMatrix = {}
        for r, row in m.items():
            a, b = divmod(r, n)
            for c, x in row.items():
                cc, d = divmod(c, n)
                out.setdefault((ident_map[a], ident_map[b]), {})[(ident_map[cc], ident_map[d])] = x
        return out
    return relabel(lim0), relabel(liminf)


def spectral_projectors(n: int) -> Projectors:
    """Find a basis identification and a braid limit commuting with U_q(sl(n)), then split it.

    Candidates: colors a -> {a} or {n-1-a}; braid P R(0), R(0) P, P R(inf),
    R(inf) P. The first candidate that commutes with the coproduct action
    of all E_i, F_i, K_i (i != 0) is used; the choice is recorded.
    """
    labels = [(a,) for a in range(n)]
    P = flip(labels, labels)
    for name, ident_map in (("identity", {a: (a,) for a in range(n)}),
                            ("reversed", {a: (n - 1 - a,) for a in range(n)})):
        lim0, liminf = _rmat_limits_as_labels(n, ident_map)
        for src, B in (("P R(0)", mmul(P, lim0)), ("R(0) P", mmul(lim0, P)),
                       ("P R(inf)", mmul(P, liminf)), ("R(inf) P", mmul(liminf, P))):
            if commutes_with_coproduct(n, B) is not None:
                continue
            v00 = ((0,), (0,))
            lam_s = B[v00][v00]
            pairs = [(a, b) for a in labels for b in labels]
            tr = QScalar()
            for x in pairs:
                tr = tr + B.get(x, {}).get(x, QScalar())
            ds, da = n * (n + 1) // 2, n * (n - 1) // 2
            lam_a = (tr - lam_s * ds) / QScalar(da)
            scale = QScalar.q_power(1) / lam_s
            I = ident(pairs)
            quad = mmul(madd(B, mscale(I, lam_s), -1), madd(B, mscale(I, lam_a), -1))
            if not mzero(quad) or lam_a * scale != -QScalar.q_power(-1):
                continue
            sym = mscale(madd(B, mscale(I, lam_a), -1), (lam_s - lam_a).inverse())
            anti = madd(I, sym, -1)
            return Projectors(n, sym, anti, mscale(B, scale), ident_map, f"{name}: {src}", scale)
    raise ArithmeticError("no braid limit commutes with the coproduct")


# ---------------------------------------------------------------------
# two-point functions

def _shift_set(I, j: int, n: int) -> Subset:
    return tuple(sorted((i + j) % n for i in I))


@dataclass
class CorrelationForm:
    """Closed form of <Phi^(k)(z2) Phi^(k')(z1)> on highest weight vectors.

    Value = z1^{offset_z1} z2^{offset_z2} * prod over ``poch_factors`` of
    ((-q)^e u; q^{2n})^{+-1} * sum over ``sum_terms`` of
    (-q)^{sign_exp} u^{mu} v_left (x) v_right, with u = z1/z2. ``left`` is a
    k'-subset (the z1 leg), ``right`` a k-subset (the z2 leg).
    """

    n: int
    k: int
    kp: int
    j: int
    offset_z1: Fraction
    offset_z2: Fraction
    poch_factors: List[Tuple[int, int]]
    sum_terms: Dict[Tuple[Subset, Subset], Tuple[int, int]]

    def dump(self) -> str:
        return json.dumps({
            "n": self.n, "k": self.k, "kp": self.kp, "j": self.j,
            "offset": [str(self.offset_z1), str(self.offset_z2)],
            "poch_factors": [{"minus_q_power": e, "exponent": s} for e, s in self.poch_factors],
            "sum_terms": [{"left": list(l), "right": list(r), "minus_q_power": se, "mu": mu}
                          for (l, r), (se, mu) in sorted(self.sum_terms.items())],
        }, indent=1)

    def prefactor_value(self, qv: Fraction, u: Fraction, terms: int) -> Fraction:
        p = Fraction(qv) ** (2 * self.n)
        val = Fraction(1)
        for e, s in self.poch_factors:
            x = (-Fraction(qv)) ** e * u
            f = Fraction(1)
            for r in range(terms):
                f *= 1 - x * p ** r
            val = val * f if s > 0 else val / f
        return val

    def vector_value(self, qv: Fraction, u: Fraction) -> Dict[Tuple[Subset, Subset], Fraction]:
        return {key: (-Fraction(qv)) ** se * Fraction(u) ** mu for key, (se, mu) in self.sum_terms.items()}

    def series(self, order: int) -> Dict[Tuple[Subset, Subset], PuiseuxSeries]:
        """Expansion in u = z1/z2 to u-degree ``order`` (the z-prefactor kept symbolic)."""
        pre = PuiseuxSeries.one("u")
        p = 2 * self.n
        for e, s in self.poch_factors:
            pre = pre * qpochhammer_zseries(mq(e), p, order, inverse=s < 0, var="u")
        out = {}
        for key, (se, mu) in self.sum_terms.items():
            out[key] = (pre.scale(mq(se)).shift(mu)).truncate(order)
        return out


def two_point(n: int, k: int, kp: int, j: int, order: int = 0) -> CorrelationForm:
    if n < 2 or k not in (1, n - 1) or kp not in (1, n - 1):
        raise ValueError("two-point forms are implemented for k, k' in {1, n-1}")
    if order < 0:
        raise ValueError("order must be >= 0")
    m = min(k, kp, n - k, n - kp)
    b = abs(k - kp)
    poch = []
    for i in range(1, m + 1):
        poch.append((2 * i + b - 2, +1))
        poch.append((-2 * i - b, -1))
    r = max(0, k + kp - n)
    base = list(range(r))                # elements carried with multiplicity two
    free = list(range(r, min(k + kp, n)))
    I0k = list(range(k))
    terms: Dict[Tuple[Subset, Subset], Tuple[int, int]] = {}
    for J in combinations(free, k - r):
        I = base + list(J)
        rest = base + [x for x in free if x not in J]
        sign_exp = sum(I0k) - sum(I)
        mu = sum(1 for i in I if i + j >= n) - sum(1 for i in I0k if i + j >= n)
        key = (_shift_set(rest, j, n), _shift_set(I, j, n))
        terms[key] = (sign_exp, mu)
    return CorrelationForm(n, k, kp, j,
                           delta_weight(n, j + k) - delta_weight(n, j + k + kp),
                           delta_weight(n, j) - delta_weight(n, j + k),
                           poch, terms)


# ---------------------------------------------------------------------
# exchange relations

@dataclass
class Report:
    name: str
    passed: bool
    checked: int = 0
    counterexample: Optional[str] = None
    details: Dict[str, object] = field(default_factory=dict)


def _numeric(m: QMatrix, qv: Fraction):
    return {r: {c: x.evaluate(qv) for c, x in row.items()} for r, row in m.items()}


def _napply(m, v):
    out = {}
    for r, row in m.items():
        s = sum((x * v.get(c, 0) for c, x in row.items()), Fraction(0))
        if s:
            out[r] = s
    return out


def braided_R11(n: int, qv: Fraction, x: Fraction, terms: int, with_rho: bool = True):
    """P R_11(x) without its monomial x^offset: rho(x) (rho_0(x) P_anti + P_sym), numeric.

    rho_0(x) = (x - q^2) / (1 - q^2 x) is the ratio rule for i = 1 with
    rho_1 = 1; ``with_rho=False`` drops the scalar rho^(1,1) (negative control).
    """
    from .rmat import rho_factor
    pr = spectral_projectors(n)
    S, A = _numeric(pr.sym, qv), _numeric(pr.anti, qv)
    q2 = Fraction(qv) ** 2
    rho0 = (x - q2) / (1 - q2 * x)
    scal = rho_factor(1, 1, n).evaluate(qv, x, terms) if with_rho else Fraction(1)
    out = {}
    for r in set(S) | set(A):
        row = {}
        for c in set(S.get(r, {})) | set(A.get(r, {})):
            val = scal * (rho0 * A.get(r, {}).get(c, 0) + S.get(r, {}).get(c, 0))
            if val:
                row[c] = val
        out[r] = row
    return out


def _form_side(form: CorrelationForm, qv, x, terms):
    """Numeric value at inner/outer ratio x: (vector, (inner exponent, outer exponent))."""
    pre = form.prefactor_value(qv, x, terms)
    vec = {key: c * pre for key, c in form.vector_value(qv, x).items()}
    return vec, (form.offset_z1, form.offset_z2)


def truncation_bound(args, p: Fraction, terms: int) -> Fraction:
    """2 * sum |x| p^terms over the truncated products (x; p): first omitted factors."""
    return 2 * sum(abs(Fraction(a)) for a in args) * p ** terms


def _exchange_args(form_l, form_r, rho, qv, xl, xr, xrho, with_rho):
    args = [(-Fraction(qv)) ** e * xl for e, _ in form_l.poch_factors]
    args += [(-Fraction(qv)) ** e * xr for e, _ in form_r.poch_factors]
    if with_rho:
        args += [sg * Fraction(qv) ** e * Fraction(xrho) ** zp for sg, e, zp, _ in rho.factors()]
    return args


def _compare(lv, rv, tol):
    keys = set(lv) | set(rv)
    scale = max((abs(x) for x in lv.values()), default=Fraction(0))
    if scale == 0:
        return Fraction(0) if not any(rv.values()) else Fraction(1), None
    worst, where = Fraction(0), None
    for kk in keys:
        e = abs(lv.get(kk, 0) - rv.get(kk, 0)) / scale
        if e > worst:
            worst, where = e, kk
    return worst, where


def _leg_map(C_num, v, leg: int):
    """Apply a one-leg matrix to a tensor vector keyed (left, right)."""
    out = {}
    for (l, r), x in v.items():
        src = l if leg == 0 else r
        for row, cols in C_num.items():
            c = cols.get(src)
            if c is None:
                continue
            key = (row, r) if leg == 0 else (l, row)
            out[key] = out.get(key, 0) + c * x
    return {k_: x for k_, x in out.items() if x}


def _kind(n: int, k: int, kp: int) -> str:
    if k == 1 and kp == 1:
        return "direct"
    if k == 1 and kp == n - 1:
        return "starred"
    if k == n - 1 and kp == n - 1:
        return "double-starred"
    raise ValueError("exchange checks need R_11: (k, k') in {(1,1), (1,n-1), (n-1,n-1)}")


def exchange_sides(n, k, kp, j, qv, u, terms, with_rho=True):
    """Both sides of the exchange relation at q = qv, z1/z2 = u, as numeric tensor vectors.

    The left side is <Phi^(k)(z1) Phi^(k')(z2)> and the right side is
    P R_kk'(u) <Phi^(k')(z2) Phi^(k)(z1)>, with z-monomials divided out (the
    exponent bookkeeping must close with an integer power of u). Starred
    modules are C_- images of V^(1) at z(-q)^n; R* and R** are the C_-
    conjugates of R_11 per the dual-module construction.
    Returns (lhs, rhs, truncation bound).
    """
    from .rmat import rho_factor
    kind = _kind(n, k, kp)
    qv, u = Fraction(qv), Fraction(u)
    mqn = (-qv) ** n
    A = two_point(n, 1, 1, j)
    B = two_point(n, 1, 1, j)
    rho = rho_factor(1, 1, n)
    if kind == "direct":
        xl, xr = 1 / u, u
        shift_l, shift_r = (0, 0), (0, 0)
    elif kind == "starred":
        # inner operator of the left side and outer one of the right side are starred
        xl, xr = mqn / u, u / mqn
        shift_l, shift_r = (1, 0), (0, 1)
    else:
        xl, xr = 1 / u, u
        shift_l, shift_r = (1, 1), (1, 1)
    lv, (a_in, a_out) = _form_side(A, qv, xl, terms)
    rv, (b_in, b_out) = _form_side(B, qv, xr, terms)
    C = _numeric(dual_iso(n, 1, -1), qv)
    Cinv = {c: {r: 1 / x} for r, row in C.items() for c, x in row.items()}
    M = braided_R11(n, qv, xr, terms, with_rho)
    if kind == "direct":
        target = _napply(M, rv)
    elif kind == "starred":
        lv = _leg_map(C, lv, 0)
        rv = _leg_map(C, rv, 1)
        # P R* = P (id (x) C) R_11 (id (x) C)^-1 = (C (x) id) P R_11 (id (x) C)^-1
        target = _leg_map(C, _napply(M, _leg_map(Cinv, rv, 1)), 0)
    else:
        lv = _leg_map(C, _leg_map(C, lv, 0), 1)
        rv = _leg_map(C, _leg_map(C, rv, 0), 1)
        inner = _leg_map(Cinv, _leg_map(Cinv, rv, 0), 1)
        target = _leg_map(C, _leg_map(C, _napply(M, inner), 0), 1)
    off = rho.offset
    # monomials: left z2^{a_in} z1^{a_out}, right z1^{b_in} z2^{b_out} (z1/z2)^off,
    # each starred argument z(-q)^n contributing (-q)^{n * exponent}
    if a_in + a_out != b_in + b_out:
        raise ArithmeticError("total z-degrees of the two sides differ")
    d = a_out - b_in - off
    e = n * (shift_r[1] * b_out + shift_r[0] * b_in - shift_l[0] * a_in - shift_l[1] * a_out)
    e -= n * off if kind == "starred" else 0
    if d.denominator != 1 or Fraction(e).denominator != 1:
        raise ArithmeticError(f"non-integral monomial mismatch u^{d} (-q)^{e}")
    factor = u ** int(-d) * (-qv) ** int(e)
    rhs = {key: x * factor for key, x in target.items()}
    args = _exchange_args(A, B, rho, qv, xl, xr, xr, with_rho)
    return lv, rhs, truncation_bound(args, qv ** (2 * n), terms)


PROBE_POINTS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3))


def check_exchange(n: int, k: int, kp: int, j: int, order: int = 0, q_probe=Fraction(1, 3),
                   terms: int = 12, points=PROBE_POINTS, with_rho: bool = True,
                   tolerance: Optional[Fraction] = None) -> Report:
    """Exchange relation at q = q_probe, every infinite product cut at ``terms`` factors.

    The two sides are expanded in opposite directions (u and 1/u), so they
    are compared as numbers. Each point passes when the relative residual
    is within ``tolerance`` if given, else within the bound 2 sum |x| p^terms
    built from the first omitted factor of every truncated product.
    ``order`` is recorded only: no termwise route exists for this relation.
    """
    q_probe = Fraction(q_probe)
    if not 0 < q_probe < 1:
        raise ValueError("q_probe must lie in (0, 1)")
    if terms < 8:
        raise ValueError("terms must be >= 8")
    kind = _kind(n, k, kp)
    rep = Report(f"exchange {kind} n={n} k={k} k'={kp} j={j}", True)
    rows = []
    for u in points:
        lhs, rhs, bound = exchange_sides(n, k, kp, j, q_probe, u, terms, with_rho)
        err, where = _compare(lhs, rhs, bound)
        tol = bound if tolerance is None else Fraction(tolerance)
        rep.checked += 1
        rows.append({"u": str(u), "residual": float(err), "bound": float(bound),
                     "residual_over_p_terms": float(err / q_probe ** (2 * n * terms))})
        if err > tol and rep.passed:
            rep.passed = False
            rep.counterexample = f"u={u} entry={where} residual={float(err):.3e} > {float(tol):.3e}"
    rep.details = {"points": rows, "terms": terms, "q_probe": str(q_probe), "order": order,
                   "with_rho": with_rho,
                   "tolerance": "first-omitted-factor bound" if tolerance is None else str(tolerance)}
    return rep


def exchange_convergence(n, k, kp, j, q_probe=Fraction(1, 3), u=Fraction(1, 2), terms=(8, 12, 16)):
    """Residuals at increasing truncation; they must decrease strictly."""
    out = []
    for t in terms:
        lhs, rhs, bound = exchange_sides(n, k, kp, j, q_probe, u, t)
        out.append(_compare(lhs, rhs, bound)[0])
    return out, all(a > b for a, b in zip(out, out[1:]))


# ---------------------------------------------------------------------
# structure functions and the residue at z1 = z2

def structure_functions(n: int, order: int):
    """f and F as u-series (u = z2/z1) and the identity (1 - q^-2 u) f = (1 - u)/F.

    Returns (f, F, report); ``report.details['F_bar']`` is (1 - q^-2 u) F.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    p = 2 * n
    qs = QScalar.q_power
    f = qpochhammer_zseries(ONE, p, order, var="u") * \
        qpochhammer_zseries(qs(-2), p, order, inverse=True, var="u")
    F = qpochhammer_zseries(qs(p - 2), p, order, var="u") * \
        qpochhammer_zseries(qs(p), p, order, inverse=True, var="u")
    one_minus = lambda c: PuiseuxSeries.polynomial({0: ONE, 1: -c}, var="u")
    lhs = (one_minus(qs(-2)) * f).truncate(order)
    rhs = (one_minus(ONE) * F.reciprocal(order)).truncate(order)
    resid = lhs.residual(rhs)
    rep = Report(f"structure functions n={n}", not resid, order + 1,
                 None if not resid else f"u^{min(resid)}: {resid[min(resid)]}",
                 {"F_bar": (one_minus(qs(-2)) * F).truncate(order), "order": order})
    return f, F, rep


def _diag_label(key):
    outer, inner = key
    return inner[0] == "*" and tuple(inner[1]) == tuple(outer)


def residue_check(n: int, k: int, order: int = 10, j: int = 0) -> Report:
    """Residue at z1 = z2 of <Phi^(k)(z1) Phi^(k)*(z2)> d(z1/z2) against h^(k).

    The starred intertwiner is C_- Phi^(n-k)(z(-q)^n), normalized like the
    closed forms (the I = I_0 term has coefficient 1, no constant in the
    z-monomial). The pole comes from the factor (z2/z1; q^2n) of the
    denominator; the rest is evaluated at z1 = z2 as a q-series.
    """
    if k not in (1, n - 1):
        raise ValueError("k must be 1 or n-1")
    kp = n - k
    form = two_point(n, k, kp, j)
    p = 2 * n
    # the Pochhammer arguments (-q)^e x with x = (-q)^n z2/z1 become (-q)^{e+n} at z1 = z2
    factors, poles = [], 0
    for e, s in form.poch_factors:
        a = e + n
        if a == 0 and s < 0:
            poles += 1
            factors.append((p, p, -1))     # (z2/z1; p) = (1 - z2/z1)(p z2/z1; p)
            continue
        if a <= 0 or a % 2:
            raise ArithmeticError(f"factor ((-q)^{a}; q^{p}) is not a positive q-product")
        factors.append((a, p, s))
    value = q_product_series(factors, order)
    hk = [(p - 2, p, +1), (p, p, -1)]
    for i in range(1, min(k, n - k)):
        hk += [(p - 2 * i - 2, p, +1), (2 * i, p, -1)]
    h = q_product_series(hk, order)
    # vector part: C_- on the inner (starred) leg, exponents of (-q) collected
    C = dual_iso(n, kp, -1)
    expo: Dict[Tuple, int] = {}
    for (inner, outer), (se, mu) in form.sum_terms.items():
        comp = tuple(x for x in range(n) if x not in inner)
        if C[("*", comp)][tuple(inner)] != mq(-s_of(inner)):
            raise ArithmeticError("dual isomorphism has unexpected entries")
        # (z1/z2)^mu of the closed form is x^mu with x = (-q)^n z2/z1 in this ordering
        expo[(tuple(outer), ("*", comp))] = se - s_of(inner) + n * mu
    lead_key = (_shift_set(range(k), j, n), ("*", _shift_set(range(k), j, n)))
    lead = expo[lead_key]
    off_diag = [key for key in expo if not _diag_label(key)]
    uneven = {str(key): e - lead for key, e in expo.items() if e != lead}
    resid = value.residual(h)
    passed = poles == 1 and not off_diag and not uneven and not resid and len(expo) == comb(n, k)
    cex = None
    if not passed:
        cex = (f"off-diagonal {off_diag[0]}" if off_diag else
               f"diagonal not constant: {uneven}" if uneven else
               f"q^{min(resid)} coefficient differs" if resid else f"{poles} poles")
    return Report(f"residue n={n} k={k} j={j}", passed, order + 1 + len(expo), cex, {
        "pole_factors": poles,
        "diagonal_minus_q_exponent": lead,
        "monomial_exponent": str(n * form.offset_z1),
        "residue_series": value.dump(),
        "h_series": h.dump(),
    })


def compare_with_build_R(n: int, q_values=(Fraction(1, 3), Fraction(2, 7)),
                         z_values=(Fraction(1, 2), Fraction(2, 5), Fraction(5, 2))) -> Report:
    """R-bar_11(z) = P (rho_0 P_anti + P_sym) against c * build_R(n) at z and at 1/z.

    The entrywise ratio is recorded for both arguments; the check passes when
    one argument gives a single scalar c at every sample point.
    """
    from .rmat import build_R
    R = build_R(n)
    found: Dict[str, set] = {"z": set(), "1/z": set()}
    checked = 0
    for qv in q_values:
        for zv in z_values:
            for label, arg in (("z", zv), ("1/z", 1 / zv)):
                M = braided_R11(n, qv, arg, 8, with_rho=False)
                for r, row in R.entries.items():
                    a, b = divmod(r, n)
                    for c, x in row.items():
                        cc, d = divmod(c, n)
                        v = x.evaluate({"q": Fraction(qv), "z": zv})
                        w = M.get(((b,), (a,)), {}).get(((cc,), (d,)), Fraction(0))
                        found[label].add(w / v if v else ("inf", w))
                        checked += 1
    good = [lab for lab, vals in found.items() if len(vals) == 1]
    details = {lab: sorted(map(str, vals))[:6] for lab, vals in found.items()}
    if good:
        details["argument"] = good[0]
        details["scalar"] = str(next(iter(found[good[0]])))
    return Report(f"R11 vs build_R n={n}", bool(good), checked,
                  None if good else "no argument gives a constant ratio", details)
