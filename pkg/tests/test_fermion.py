import pytest
from hypothesis import given, settings, strategies as st

from afqkit import fermion as fm
from afqkit.fermion import A, ASTAR, VACUUM

VAC = {VACUUM: 1}


def test_zero_mode_pair_returns_vacuum():
    v = fm.apply_mode(A, 1, 0, fm.apply_mode(ASTAR, 1, 0, VAC))
    assert v == VAC


def test_creator_squares_to_zero():
    assert fm.apply_mode(A, 1, -1, fm.apply_mode(A, 1, -1, VAC)) == {}


def test_annihilator_past_other_color():
    v = fm.apply_mode(ASTAR, 1, -2, VAC)
    assert fm.apply_mode(A, 2, 1, v) == {}


def test_anticommutation_sign_is_tracked():
    ab = fm.from_creators([(A, 1, -1), (A, 2, -1)])
    ba = fm.from_creators([(A, 2, -1), (A, 1, -1)])
    (s1, c1), = ab.items()
    (s2, c2), = ba.items()
    assert s1 == s2 and c1 == -c2


def test_E11_kills_vacuum():
    assert fm.spinor_E(1, 1, 0, VAC) == {}


def test_E12_moves_vector_creators():
    # a-creators span V: E12 a2(-1)|0> = a1(-1)|0>
    v = fm.from_creators([(A, 2, -1)])
    assert fm.spinor_E(1, 2, 0, v) == fm.from_creators([(A, 1, -1)])


def test_E12_on_dual_creators():
    # a*-creators span V*: E12 a*1(0)|0> = -a*2(0)|0>, and E12 a*2(0)|0> = 0
    v1 = fm.from_creators([(ASTAR, 1, 0)])
    v2 = fm.from_creators([(ASTAR, 2, 0)])
    assert fm.spinor_E(1, 2, 0, v1) == {k: -c for k, c in fm.from_creators([(ASTAR, 2, 0)]).items()}
    assert fm.spinor_E(1, 2, 0, v2) == {}


def _E(i, j, m, v):
    return fm.spinor_E(i, j, m, v)


def _comm(a, b, v):
    out = dict(a(b(v)))
    fm.add_into(out, b(a(v)), -1)
    return out


def test_central_term_on_vacuum():
    lhs = _comm(lambda x: _E(1, 2, 1, x), lambda x: _E(2, 1, -1, x), VAC)
    cartan = dict(_E(1, 1, 0, VAC))
    fm.add_into(cartan, _E(2, 2, 0, VAC), -1)
    diff = dict(lhs)
    fm.add_into(diff, cartan, -1)
    assert diff == {VACUUM: 1}


def test_heisenberg_level_one():
    assert _comm(lambda x: _E(1, 1, 1, x), lambda x: _E(1, 1, -1, x), VAC) == VAC


def test_root_commutator():
    v = fm.from_creators([(A, 3, -1), (ASTAR, 1, 0)])
    lhs = _comm(lambda x: _E(1, 2, 1, x), lambda x: _E(2, 3, -1, x), v)
    assert lhs == _E(1, 3, 0, v)


@pytest.mark.parametrize("n,D", [(2, 3), (3, 3)])
def test_affine_gl_relations(n, D):
    rep = fm.check_affine_gl_relations(n, D)
    assert rep.passed, rep.counterexample


@pytest.mark.parametrize("central", [0, -1])
def test_wrong_central_value_fails(central):
    assert not fm.check_affine_gl_relations(2, 2, central=central).passed


def test_clifford_relations():
    assert fm.check_clifford_relations(3, 3).passed


states = st.sampled_from(fm.basis(3, 3))
colors = st.integers(1, 3)


@settings(max_examples=60, deadline=None)
@given(states, colors, colors, st.integers(-3, 3))
def test_E_preserves_charge_and_shifts_degree(s, i, j, m):
    out = fm.spinor_E(i, j, m, {s: 1})
    for t in out:
        assert fm.charge(t) == fm.charge(s)
        assert fm.degree(t) == fm.degree(s) - m


@settings(max_examples=60, deadline=None)
@given(states, colors, colors, st.integers(-3, 3))
def test_E_matches_bruteforce_sum(s, i, j, m):
    assert fm.spinor_E(i, j, m, {s: 1}) == fm.spinor_E_bruteforce(i, j, m, {s: 1}, 12)


def test_character_single_color():
    assert fm.fermion_character(1, 0, 3) == [1, 1, 2, 3]


def test_character_vacuum_degree():
    for n in (1, 2, 3):
        assert fm.fermion_character(n, 0, 0) == [1]


def test_character_charge_one():
    assert fm.fermion_character(3, 1, 0) == [3]


def test_state_literal_round_trip():
    v = fm.from_creators([(A, 1, -2), (ASTAR, 2, 0), (ASTAR, 3, -1)])
    (s, c), = v.items()
    assert fm.parse_state(fm.format_state(s)) == {s: 1}
    assert fm.format_state(s).startswith("1;")


def test_state_literal_rejects_wrong_charge():
    with pytest.raises(ValueError):
        fm.parse_state("0; a*(1,0)")


def test_wick_split_off_diagonal_has_no_contraction():
    w = fm.wick_product(1, 2, VAC, 3)
    assert w.contraction == {} and w.verified


def test_wick_vacuum_contraction_is_geometric():
    w = fm.wick_product(1, 1, VAC, 3)
    assert w.verified
    assert w.contraction == {(k, -k): 1 for k in range(4)}


def test_wick_normal_part_matches_currents():
    # :a_1(k) a*_2(m-k): summed over k is E_12(m)
    for s in fm.basis(3, 2):
        w = fm.wick_product(1, 2, {s: 1}, 6)
        for m in range(-2, 3):
            total = {}
            for (k, l), vec in w.normal.items():
                if k + l == m:
                    fm.add_into(total, vec)
            assert total == fm.spinor_E(1, 2, m, {s: 1})


def test_degree_zero_commutation():
    assert fm.check_degree_zero_commutation(3, 2).passed


def test_measured_shift_constants():
    ce, cf, bad, _ = fm.casimir_shift_constants(3, 2)
    assert bad is None
    assert (ce, cf) == (1, -1)


def test_wick_form_is_minus_casimir_minus_identity():
    assert fm.check_wick_casimir(3, 2, sign=-1, shift=-1).passed
    assert not fm.check_wick_casimir(3, 2).passed


def test_casimir_report_records_measurements():
    rep = fm.check_casimir_series(3, 2)
    assert rep.details["degree_zero"]
    assert rep.details["shift_constants"] == ["1", "-1"]
    assert rep.details["wick_equals_minus_casimir_minus_id"]
    # even with the measured constants, the Wick form is not +Casimir
    rep = fm.check_casimir_series(3, 2, expected=(1, -1))
    assert not rep.passed and not rep.details["wick_equals_casimir"]
