import pytest
from hypothesis import assume, given, settings, strategies as st

from afqkit import linalg, rll
from afqkit.ring import Poly, RatFunc
from afqkit.rmat import _limit_entry

q, z = Poly.var("q"), Poly.var("z")
qi = Poly.var("q", -1)
ONE = Poly.const(1)


def test_L11_is_diagonal_n2():
    L = rll.eval_L(2)
    e = L.get(0, 0)
    assert set(e) == {0, 1} and all(set(row) == {r} for r, row in e.items())
    assert e[0][0] == RatFunc(1)
    assert e[1][1] == RatFunc(z - ONE, qi * z - q)


def test_L12_single_entry_n2():
    L = rll.eval_L(2)
    cells = list(linalg.entries(L.get(0, 1)))
    assert len(cells) == 1
    _, _, x = cells[0]
    assert x == RatFunc(qi - q, qi * z - q) or x == RatFunc(z * (qi - q), z * qi - q)


def _outer_shape_at(L, at_zero):
    nonzero = set()
    for (i, j), inner in L.entries.items():
        if any(not _limit_entry(x, at_zero).is_zero() for _, _, x in linalg.entries(inner)):
            nonzero.add((i, j))
    return nonzero


@pytest.mark.parametrize("n", [2, 3])
def test_triangularity_forced_by_rll(n):
    # L+(0) lower and L-(inf) upper triangular (the shape the RLL relations force)
    at0 = _outer_shape_at(rll.eval_L(n, +1), True)
    atinf = _outer_shape_at(rll.eval_L(n, -1), False)
    assert all(i >= j for i, j in at0)
    assert all(i <= j for i, j in atinf)
    assert all((i, i) in at0 for i in range(n))


@pytest.mark.parametrize("n", [2, 3])
def test_rll(n):
    assert rll.check_rll(n).passed
    assert rll.check_rll(n, mixed=True).passed


@pytest.mark.parametrize("reading", [r for r in rll.READINGS if r != rll.FROZEN_READING])
def test_rejected_readings_fail(reading):
    rep = rll.check_rll(2, reading)
    assert not rep.passed and rep.counterexample is not None


def test_gauss_of_identity():
    I = rll.OpMatrix.identity(3, 2)
    g = rll.gauss_decompose(I)
    assert (g.E - I).is_zero() and (g.K - I).is_zero() and (g.F - I).is_zero()


@pytest.mark.parametrize("n,sign", [(2, 1), (2, -1), (3, 1), (3, -1)])
def test_gauss_recomposes(n, sign):
    assert rll.check_gauss(n, sign).passed


def test_gauss_perturbation_changes_product():
    M = rll.eval_L(2)
    g = rll.gauss_decompose(M)
    unit = linalg.identity(2, RatFunc(1))
    F2 = rll.OpMatrix(2, 2, dict(g.F.entries))
    F2.entries[(0, 1)] = linalg.mat_add(F2.get(0, 1), unit)
    assert not (rll.GaussFactors(g.E, g.K, F2).recompose() - M).is_zero()


def test_singular_pivot_is_named():
    M = rll.OpMatrix(2, 1, {(0, 1): {0: {0: RatFunc(1)}}, (1, 0): {0: {0: RatFunc(1)}}})
    with pytest.raises(rll.PivotError) as err:
        rll.gauss_decompose(M)
    assert err.value.index == 0


small = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(-1, 1)), st.integers(-3, 3),
                        min_size=1, max_size=3).map(
    lambda d: RatFunc(Poly({(a, b, 0, 0, 0, 0): c for (a, b), c in d.items()})))


@settings(max_examples=25, deadline=None)
@given(st.lists(small, min_size=4, max_size=4))
def test_gauss_recomposition_property(vals):
    # 2 x 2 outer matrix with 1 x 1 inner entries
    M = rll.OpMatrix(2, 1, {(i, j): {0: {0: vals[2 * i + j]}} for i in range(2) for j in range(2)
                            if not vals[2 * i + j].is_zero()})
    try:
        g = rll.gauss_decompose(M)
    except rll.PivotError:
        assume(False)
        return
    assert (g.recompose() - M).is_zero()


@settings(max_examples=10, deadline=None)
@given(st.lists(small, min_size=4, max_size=4), st.lists(small, min_size=4, max_size=4))
def test_gauss_noncommutative_inner_blocks(a, b):
    # 2 x 2 outer with 2 x 2 inner (upper-triangular inner blocks keep inversion cheap)
    ents = {}
    for idx in range(4):
        i, j = divmod(idx, 2)
        ents[(i, j)] = {0: {0: a[idx], 1: b[idx]}, 1: {1: a[(idx + 1) % 4]}}
    M = rll.OpMatrix(2, 2, ents)
    try:
        g = rll.gauss_decompose(M)
    except rll.PivotError:
        assume(False)
        return
    assert (g.recompose() - M).is_zero()


def test_currents_first_pivot_is_L11():
    cur = rll.extract_currents(2)
    L = rll.eval_L(2)
    assert linalg.first_nonzero(linalg.mat_add(cur.k[0], L.get(0, 0), -1)) is None
    assert cur.plus_minus_agree


def test_x_plus_has_a_pole_in_z():
    cur = rll.extract_currents(3)
    cells = list(linalg.entries(cur.x_plus[0]))
    assert cells
    assert any(x.den.degree_range("z")[1] > 0 for _, _, x in cells)


def test_drinfeld_n3():
    assert rll.check_drinfeld(3).passed


def test_drinfeld_swapped_psi_fails():
    assert not rll.check_drinfeld(3, psi_order="swapped").passed


def test_drinfeld_opposite_sign_fails():
    assert not rll.check_drinfeld(3, sign=-1).passed


@pytest.mark.parametrize("n", [2, 3])
def test_reflection(n):
    assert rll.check_reflection(n).passed


def test_reflection_needs_the_product():
    assert not rll.check_reflection(2, L=rll.eval_L(2, +1)).passed


def test_current_dump_lists_every_family():
    text = rll.extract_currents(2).dump()
    assert {line.split()[0] for line in text.splitlines()} >= {"X+1", "X-1", "k1", "k2"}
