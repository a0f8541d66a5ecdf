"""Lattice Fock space, Frenkel-Kac vertex operators and the boson-fermion checks.

A basis state is ``(lam, parts)``: ``lam`` a length-n integer tuple (the
lattice point) and ``parts`` one descending tuple per color listing the
h_i(-m) applied. Vectors are dicts ``state -> Fraction``.

The vertex operator of a lattice vector alpha is

    Gamma_alpha(z) = e^alpha z^{alpha(0)} E^-(alpha, z) E^+(alpha, z),
    E^-(alpha, z) = exp(sum_{k>0} alpha(-k) z^k / k),
    E^+(alpha, z) = exp(-sum_{k>0} alpha(k) z^{-k} / k),

where e^alpha |lam> = eps(alpha, lam) |lam + alpha> and z^{alpha(0)} acts on
the lattice point it meets (the one before the shift). Fermions are
a_i(z) = z Gamma_{e_i}(z) and a*_i(z) = Gamma_{-e_i}(z).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Dict, List, Optional, Tuple

from . import fermion as fm

Lattice = Tuple[int, ...]
Parts = Tuple[Tuple[int, ...], ...]
BState = Tuple[Lattice, Parts]
BVector = Dict[BState, Fraction]


def vacuum(n: int, lam: Optional[Lattice] = None) -> BState:
    return (tuple(lam) if lam is not None else (0,) * n, ((),) * n)


def degree(state: BState) -> int:
    return sum(sum(p) for p in state[1])


def energy(state: BState) -> Fraction:
    lam = state[0]
    return degree(state) + Fraction(sum(x * x for x in lam), 2)


def _add(acc: BVector, key: BState, c) -> None:
    val = acc.get(key, 0) + c
    if val:
        acc[key] = val
    else:
        acc.pop(key, None)


def add_into(acc: BVector, v: BVector, scale=1) -> BVector:
    for k, c in v.items():
        _add(acc, k, scale * c)
    return acc


# ---------------------------------------------------------------------
# cocycle

def eps_basis(i: int, j: int) -> int:
    """eps(e_i, e_j): +1 for i <= j, -1 for i > j (0-based or 1-based alike)."""
    return 1 if i <= j else -1


def cocycle(alpha: Lattice, beta: Lattice) -> int:
    """Bimultiplicative extension of :func:`eps_basis`."""
    odd = 0
    for i, a in enumerate(alpha):
        if a:
            for j, b in enumerate(beta):
                if b and i > j:
                    odd += a * b
    return -1 if odd % 2 else 1


SYMMETRIC_COCYCLE_RULE = "(-1)^{(h_i(0), h_j(0))}"


def symmetric_cocycle(alpha: Lattice, beta: Lattice) -> int:
    """Symmetric sign rule: commutation sign (-1)^{(alpha, beta)}.

    Kept to show that it makes distinct colors commute.
    """
    return 1


# ---------------------------------------------------------------------
# Heisenberg modes

def _apply_h(i: int, m: int, state: BState) -> List[Tuple[BState, int]]:
    lam, parts = state
    if m == 0:
        return [(state, lam[i])] if lam[i] else []
    p = parts[i]
    if m < 0:
        new = tuple(sorted(p + (-m,), reverse=True))
        return [((lam, parts[:i] + (new,) + parts[i + 1:]), 1)]
    mult = p.count(m)
    if not mult:
        return []
    lst = list(p)
    lst.remove(m)
    return [((lam, parts[:i] + (tuple(lst),) + parts[i + 1:]), m * mult)]


def heisenberg_apply(i: int, m: int, v: BVector) -> BVector:
    """h_i(m) with [h_i(m), h_j(l)] = m delta_ij delta_{m,-l}; colors 1-based, h_i(0) = lam_i."""
    out: BVector = {}
    for s, c in v.items():
        for t, d in _apply_h(i - 1, m, s):
            _add(out, t, c * d)
    return out


def _apply_alpha_mode(alpha: Lattice, m: int, v: BVector) -> BVector:
    out: BVector = {}
    for i, a in enumerate(alpha):
        if a:
            for s, c in v.items():
                for t, d in _apply_h(i, m, s):
                    _add(out, t, a * c * d)
    return out


@lru_cache(maxsize=None)
def _partitions(k: int) -> Tuple[Tuple[int, ...], ...]:
    if k == 0:
        return ((),)
    out = []

    def rec(rem, mx, acc):
        if rem == 0:
            out.append(tuple(acc))
            return
        for p in range(min(rem, mx), 0, -1):
            acc.append(p)
            rec(rem - p, p, acc)
            acc.pop()
    rec(k, k, [])
    return tuple(out)


@lru_cache(maxsize=None)
def _z_mu(mu: Tuple[int, ...]) -> int:
    out = 1
    for k in set(mu):
        mk = mu.count(k)
        out *= k ** mk * factorial(mk)
    return out


def _exp_coefficient(alpha: Lattice, K: int, v: BVector, sign: int) -> BVector:
    """z^{sign*K} coefficient of exp(sign * sum_k alpha(-sign k) z^{sign k} / k) on v.

    sign = +1 is E^- (creators), sign = -1 is E^+ (annihilators, with the
    overall minus in the exponent).
    """
    out: BVector = {}
    for mu in _partitions(K):
        w = v
        for part in mu:
            w = _apply_alpha_mode(alpha, -sign * part, w)
            if not w:
                break
        if w:
            coef = Fraction((-1) ** len(mu) if sign < 0 else 1, _z_mu(mu))
            add_into(out, w, coef)
    return out


def _shift(lam: Lattice, alpha: Lattice) -> Lattice:
    return tuple(a + b for a, b in zip(lam, alpha))


def _pair(a: Lattice, b: Lattice) -> int:
    return sum(x * y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def _vertex_state(alpha: Lattice, m: int, state: BState, zshift: int, cocycle_kind: str):
    lam, parts = state
    v = {state: Fraction(1)}
    p0 = zshift + _pair(alpha, lam)
    sign = cocycle(alpha, lam) if cocycle_kind == "standard" else symmetric_cocycle(alpha, lam)
    out: BVector = {}
    for J in range(degree(state) + 1):
        K = J - m - p0
        if K < 0:
            continue
        w = _exp_coefficient(alpha, J, v, -1)
        if not w:
            continue
        w = _exp_coefficient(alpha, K, w, +1)
        for (l2, pp), c in w.items():
            _add(out, (_shift(l2, alpha), pp), sign * c)
    return tuple(out.items())


def vertex_mode(alpha, m: int, v: BVector, D: Optional[int] = None, zshift: int = 0,
                cocycle_kind: str = "standard") -> BVector:
    """z^{-m} coefficient of z^{zshift} Gamma_alpha(z) applied to v.

    Every mode is a finite computation on a fixed vector (E^+ terminates on
    the parts, E^- is needed only up to the one power that lands on z^{-m}),
    so no truncation error arises. ``D`` only validates the input support.
    """
    alpha = tuple(alpha)
    if D is not None and any(degree(s) > D for s in v):
        raise ValueError("vector has components above the degree bound")
    out: BVector = {}
    for s, c in v.items():
        for t, d in _vertex_state(alpha, m, s, zshift, cocycle_kind):
            _add(out, t, c * d)
    return out


def unit(n: int, i: int, sign: int = 1) -> Lattice:
    return tuple(sign if k == i - 1 else 0 for k in range(n))


def boson_a(i: int, m: int, v: BVector, n: int, cocycle_kind: str = "standard") -> BVector:
    return vertex_mode(unit(n, i), m, v, zshift=1, cocycle_kind=cocycle_kind)


def boson_astar(i: int, m: int, v: BVector, n: int, cocycle_kind: str = "standard") -> BVector:
    return vertex_mode(unit(n, i, -1), m, v, zshift=0, cocycle_kind=cocycle_kind)


# ---------------------------------------------------------------------
# basis

def _lattice_points(n: int, max_norm2: int):
    r = int(max_norm2 ** 0.5)
    for lam in product(range(-r, r + 1), repeat=n):
        if sum(x * x for x in lam) <= max_norm2:
            yield lam


def _multi_partitions(n: int, D: int):
    """Tuples of n partitions with total size <= D."""
    per = {k: _partitions(k) for k in range(D + 1)}

    def rec(color, rem):
        if color == n:
            yield ()
            return
        for k in range(rem + 1):
            for mu in per[k]:
                for rest in rec(color + 1, rem - k):
                    yield (mu,) + rest
    return list(rec(0, D))


def basis(n: int, D, ell: Optional[int] = None, by_energy: bool = True) -> List[BState]:
    """States with energy (or plain degree, if by_energy is False) <= D; lam sum fixed when ell given."""
    D = Fraction(D)
    out = []
    lams = _lattice_points(n, int(2 * D)) if by_energy else None
    if not by_energy:
        raise ValueError("plain-degree enumeration needs a lattice bound; use by_energy")
    for lam in lams:
        if ell is not None and sum(lam) != ell:
            continue
        rem = D - Fraction(sum(x * x for x in lam), 2)
        if rem < 0:
            continue
        for parts in _multi_partitions(n, int(rem)):
            out.append((lam, parts))
    return sorted(out, key=lambda s: (energy(s), s))


def boson_character(n: int, ell: int, D) -> Dict[Fraction, int]:
    dims: Dict[Fraction, int] = {}
    for s in basis(n, D, ell):
        e = energy(s)
        dims[e] = dims.get(e, 0) + 1
    return dict(sorted(dims.items()))


# ---------------------------------------------------------------------
# literal format "lam=(l1,...,ln); i:[parts]; ..."

def format_state(state: BState) -> str:
    lam, parts = state
    body = "; ".join(f"{i + 1}:[{','.join(map(str, p))}]" for i, p in enumerate(parts) if p)
    head = f"lam=({','.join(map(str, lam))})"
    return f"{head}; {body}" if body else head


def parse_state(text: str) -> BState:
    import re
    head = re.search(r"=\s*\(([^)]*)\)", text)
    lam = tuple(int(x) for x in head.group(1).split(",") if x.strip())
    parts = [()] * len(lam)
    for i, body in re.findall(r"(\d+)\s*:\s*\[([^\]]*)\]", text):
        parts[int(i) - 1] = tuple(sorted((int(x) for x in body.split(",") if x.strip()), reverse=True))
    return (lam, tuple(parts))


# ---------------------------------------------------------------------
# checks

@dataclass
class Report:
    name: str
    passed: bool
    checked: int = 0
    counterexample: Optional[dict] = None
    details: Optional[dict] = None

    def __bool__(self) -> bool:
        return self.passed


def _fmt(v: BVector) -> Dict[str, str]:
    return {format_state(s): str(c) for s, c in sorted(v.items())}


def _field(n: int, kind: int, i: int, m: int, v: BVector, cocycle_kind: str) -> BVector:
    if kind == fm.A:
        return boson_a(i, m, v, n, cocycle_kind)
    return boson_astar(i, m, v, n, cocycle_kind)


def _energy_change(kind: int, m: int) -> Fraction:
    return -m + (Fraction(-1, 2) if kind == fm.A else Fraction(1, 2))


def check_boson_clifford(n: int, D, cocycle_kind: str = "standard") -> Report:
    """{x(m), y(l)} for x, y among a_i, a*_i on the graded components of energy <= D.

    A pair is tested on a basis state when both products stay inside the
    window (every intermediate and final energy <= D), i.e. the relation is
    checked for the operators restricted to the truncated space. The
    anticommutator must be delta_{m,-l} for a matching a / a* pair of one
    color and 0 otherwise.
    """
    if n < 1:
        raise ValueError("n must be positive")
    D = Fraction(D)
    W = int(D) + 1
    gens = [(kind, i, m) for kind in (fm.A, fm.ASTAR) for i in range(1, n + 1) for m in range(-W, W + 1)]
    checked = 0
    for s in basis(n, D):
        E = energy(s)
        v = {s: Fraction(1)}
        ok = [g for g in gens if E + _energy_change(g[0], g[2]) <= D]
        singles = {g: _field(n, *g, v, cocycle_kind) for g in ok}
        for a, g1 in enumerate(ok):
            d1 = _energy_change(g1[0], g1[2])
            for g2 in ok[a:]:
                if E + d1 + _energy_change(g2[0], g2[2]) > D:
                    continue
                lhs = _field(n, *g1, singles[g2], cocycle_kind)
                add_into(lhs, _field(n, *g2, singles[g1], cocycle_kind))
                pair = g1[0] != g2[0] and g1[1] == g2[1] and g1[2] == -g2[2]
                rhs = {s: Fraction(1)} if pair else {}
                checked += 1
                if lhs != rhs:
                    return Report("boson_clifford", False, checked,
                                  {"state": format_state(s), "x": g1, "y": g2, "lhs": _fmt(lhs)},
                                  {"n": n, "D": str(D), "cocycle": cocycle_kind})
    return Report("boson_clifford", True, checked, None, {"n": n, "D": str(D), "cocycle": cocycle_kind})


def bosonic_E_from_fields(n: int, i: int, j: int, m: int, v: BVector) -> BVector:
    """sum_k :a_i(k) a*_j(m-k): with the fermionic normal ordering, fields realized by vertex operators."""
    out: BVector = {}
    for s, c in v.items():
        E = int(energy(s)) + 1
        for k in range(m - E - 1, E + 2):
            l = m - k
            w = {s: c}
            if k >= 0 and l <= 0:
                add_into(out, boson_astar(j, l, boson_a(i, k, w, n), n), -1)
            else:
                add_into(out, boson_a(i, k, boson_astar(j, l, w, n), n))
    return out


def frenkel_kac_E(n: int, i: int, j: int, m: int, v: BVector) -> BVector:
    """E_ij(m) from a single vertex operator: eps(e_i, e_j) z Gamma_{e_i - e_j}(z), or h_i(m) for i = j."""
    if i == j:
        return heisenberg_apply(i, m, v)
    alpha = tuple((1 if k == i - 1 else 0) - (1 if k == j - 1 else 0) for k in range(n))
    out = vertex_mode(alpha, m, v, zshift=1)
    sign = eps_basis(i, j)
    return {s: sign * c for s, c in out.items()}


def check_structure(n: int, D) -> Report:
    """E_ij(m) built from the bosonic fermions equals the Frenkel-Kac operator on energy <= D."""
    checked = 0
    W = int(D) + 1
    for s in basis(n, D):
        v = {s: Fraction(1)}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for m in range(-W, W + 1):
                    a = bosonic_E_from_fields(n, i, j, m, v)
                    b = frenkel_kac_E(n, i, j, m, v)
                    checked += 1
                    if a != b:
                        return Report("boson_structure", False, checked,
                                      {"state": format_state(s), "E": (i, j, m), "fields": _fmt(a), "vertex": _fmt(b)})
    return Report("boson_structure", True, checked, None, {"n": n, "D": str(D)})


def check_characters(n: int, D: int, charges=range(-2, 3)) -> Report:
    """Shifted fermionic graded dimensions against bosonic ones, sector by sector."""
    table = {}
    for ell in charges:
        f = fm.fermion_character(n, ell, D, shifted=True)
        b = boson_character(n, ell, D)
        table[ell] = {"fermion": {str(k): x for k, x in f.items()}, "boson": {str(k): x for k, x in b.items()}}
        if f != b:
            return Report("characters", False, len(table), {"charge": ell, **table[ell]}, {"n": n, "D": D})
    return Report("characters", True, len(table), None, {"n": n, "D": D, "table": table})


def check_correspondence(n: int, D: int) -> Report:
    """(a) characters for |l| <= 2 and degree <= D, (b) E_ij structure on degree <= D - 1."""
    if n < 3 or D < 3:
        raise ValueError("need n >= 3 and D >= 3")
    chars = check_characters(n, D)
    struct = check_structure(n, D - 1)
    return Report("correspondence", chars.passed and struct.passed, chars.checked + struct.checked,
                  chars.counterexample or struct.counterexample,
                  {"characters": chars.passed, "structure": struct.passed, "n": n, "D": D})


# ---------------------------------------------------------------------
# Jacobi triple product, with s = x^{1/2}

def jtp_sides(order: int):
    """Both sides as dicts (s-exponent, y-exponent) -> int, exact for x-order <= order."""
    S = 2 * order
    lhs = {(0, 0): 1}
    for m in range(1, order + 1):
        e = 2 * m - 1
        if e > S:
            break
        for y in (1, -1):
            new = dict(lhs)
            for (se, ye), c in lhs.items():
                if se + e <= S:
                    key = (se + e, ye + y)
                    new[key] = new.get(key, 0) + c
            lhs = new
    # 1 / prod (1 - s^{2m}) = partition generating function in s^2
    p = [0] * (S + 1)
    p[0] = 1
    for part in range(2, S + 1, 2):
        for k in range(part, S + 1):
            p[k] += p[k - part]
    rhs = {}
    ell = 0
    while ell * ell <= S:
        for y in {ell, -ell}:
            for k in range(0, S - ell * ell + 1):
                if p[k]:
                    key = (ell * ell + k, y)
                    rhs[key] = rhs.get(key, 0) + p[k]
        ell += 1
    clean = lambda d: {k: v for k, v in d.items() if v}
    return clean(lhs), clean(rhs)


def check_jtp(order: int) -> Report:
    lhs, rhs = jtp_sides(order)
    if lhs == rhs:
        return Report("jacobi_triple_product", True, len(lhs), None, {"x_order": order})
    bad = sorted(set(lhs) ^ set(rhs) | {k for k in lhs if lhs.get(k) != rhs.get(k)})[0]
    return Report("jacobi_triple_product", False, len(lhs),
                  {"x_exponent": str(Fraction(bad[0], 2)), "y": bad[1], "lhs": lhs.get(bad, 0), "rhs": rhs.get(bad, 0)},
                  {"x_order": order})
