from fractions import Fraction

import pytest
import sympy

from afqkit import linalg, rmat
from afqkit.ring import Poly, QScalar, RatFunc

q, z = Poly.var("q"), Poly.var("z")
qi = Poly.var("q", -1)
ONE = Poly.const(1)


def test_entry_families_n2():
    R = rmat.build_R(2)
    assert R.entry(R.index(1, 1), R.index(1, 1)) == RatFunc(1)
    assert R.entry(R.index(1, 2), R.index(1, 2)) == RatFunc(z - ONE, qi * z - q)
    assert R.entry(R.index(1, 2), R.index(2, 1)) == RatFunc(z * (qi - q), z * qi - q)
    assert R.entry(R.index(2, 1), R.index(1, 2)) == RatFunc(qi - q, qi * z - q)


def test_only_four_families_are_nonzero():
    n = 3
    R = rmat.build_R(n)
    for r, c, _ in linalg.entries(R.entries):
        i, j = divmod(r, n)
        k, l = divmod(c, n)
        assert (i, j) == (k, l) or (i, j) == (l, k)


def test_n_below_two_rejected():
    with pytest.raises(ValueError):
        rmat.build_R(1)


def test_numerator_vanishes_at_one():
    R = rmat.build_R(3)
    x = R.entry(R.index(1, 2), R.index(1, 2))
    assert x.num.evaluate({"q": Fraction(2), "z": Fraction(1)}) == 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ybe_difference_form(n):
    assert rmat.check_ybe(n).passed


def test_ybe_product_form_also_holds():
    assert rmat.check_ybe(3, form="product").passed


def test_swapped_ybe_arrangement_fails_with_location():
    rep = rmat.check_ybe(2, form="swapped")
    assert not rep.passed
    assert (rep.counterexample["row"], rep.counterexample["col"]) == (1, 2)


def test_perturbed_R_fails_ybe():
    R = rmat.build_R(2)
    r, c = R.index(1, 2), R.index(2, 1)
    R.entries[r][c] = -R.entries[r][c]
    rep = rmat.check_ybe(2, R=R)
    assert not rep.passed and rep.counterexample is not None


def _sympy_R(n):
    qs, zs = sympy.symbols("q z")
    R = sympy.zeros(n * n, n * n)
    for i in range(n):
        for j in range(n):
            r = i * n + j
            if i == j:
                R[r, r] = 1
            else:
                R[r, r] = (zs - 1) / (zs / qs - qs)
                R[r, j * n + i] = zs * (1 / qs - qs) / (zs / qs - qs) if i < j else (1 / qs - qs) / (zs / qs - qs)
    return R, qs, zs


def test_ybe_against_sympy_oracle_n2():
    # independent oracle: Kronecker products in sympy, difference arrangement
    R, qs, zs = _sympy_R(2)
    ws = sympy.Symbol("w")
    I2 = sympy.eye(2)
    P = sympy.zeros(4, 4)
    for i in range(2):
        for j in range(2):
            P[i * 2 + j, j * 2 + i] = 1

    def at(x):
        return R.subs(zs, x)

    R12 = lambda x: sympy.kronecker_product(at(x), I2)
    R23 = lambda x: sympy.kronecker_product(I2, at(x))
    P23 = sympy.kronecker_product(I2, P)
    R13 = lambda x: P23 * R12(x) * P23
    diff = R12(zs / ws) * R13(zs) * R23(ws) - R23(ws) * R13(zs) * R12(zs / ws)
    assert diff.applyfunc(sympy.simplify) == sympy.zeros(8, 8)
    bad = R12(zs) * R13(zs / ws) * R23(ws) - R23(ws) * R13(zs / ws) * R12(zs)
    assert bad.applyfunc(sympy.simplify) != sympy.zeros(8, 8)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_unitarity(n):
    assert rmat.check_unitarity(n).passed


def test_identity_is_unitary():
    n = 2
    ident = rmat.SpectralMatrix(n, n * n, linalg.identity(n * n, RatFunc(1)))
    assert rmat.check_unitarity(n, R=ident).passed


def test_limits_follow_entry_formula():
    lim0, liminf, rep = rmat.limits_R(2)
    assert lim0[1][1] == QScalar.q_power(-1)
    assert liminf[1][1] == QScalar.q_power(1)
    assert rep.passed


@pytest.mark.parametrize("n", [3, 4])
def test_limit_consistency(n):
    assert rmat.limits_R(n)[2].passed


def test_rho_offsets_and_parameters():
    r = rmat.rho_factor(1, 1, 3)
    assert r.offset == Fraction(2, 3)
    r = rmat.rho_factor(1, 2, 3)
    assert (r.b, r.s, r.m) == (1, 3, 1)


def test_rho_rejects_other_types():
    with pytest.raises(ValueError):
        rmat.rho_factor(2, 2, 5)


def test_rho_with_no_factors_is_one():
    assert rmat.rho_factor(1, 1, 3).evaluate(Fraction(1, 3), Fraction(1, 2), 0) == 1


def test_rho_inversion():
    # rho is built from ratios f(1/z)/f(z), so rho(z) rho(1/z) = 1 without the monomial
    r = rmat.rho_factor(1, 1, 3)
    qv, zv = Fraction(1, 3), Fraction(2, 5)
    assert r.evaluate(qv, zv, 10) * r.evaluate(qv, 1 / zv, 10) == 1


def test_matrix_dump_triplets():
    lines = rmat.build_R(2).dump().splitlines()
    assert len(lines) == 6
    assert all(len(l.split(" ", 2)) == 3 for l in lines)
