"""Acceptance criteria, one test per criterion, each at its stated tolerance and time limit.

Every test records a PASS/FAIL line shown in the "acceptance criteria"
section of the pytest summary. Two criteria cannot be met as stated and
are marked ``xfail(strict=True)``: they run in full, print FAIL, and turn
the run red if they ever start passing.
"""

import time
from fractions import Fraction

import pytest

from afqkit import boson, fermion, linalg, qeval, rll, rmat
from afqkit.ring import RatFunc


def timed(fn, *args, **kwargs):
    t = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t


def test_criterion_01_yang_baxter(criterion):
    times, ok = {}, True
    for n in (2, 3, 4):
        rep, dt = timed(rmat.check_ybe, n)
        times[n] = dt
        ok = ok and rep.passed and dt < 60
    swapped = rmat.check_ybe(2, form="swapped")
    criterion(1, "Yang-Baxter exact, n=2,3,4", ok,
              "max %.2fs; swapped arrangement residual nonzero: %s"
              % (max(times.values()), not swapped.passed))
    assert ok


def test_criterion_02_unitarity_and_limits(criterion):
    t = time.perf_counter()
    ok = all(rmat.check_unitarity(n).passed and rmat.limits_R(n)[2].passed for n in (2, 3, 4))
    dt = time.perf_counter() - t
    ok = ok and dt < 10
    criterion(2, "unitarity and limit consistency, n=2,3,4", ok, "%.2fs" % dt)
    assert ok


def test_criterion_03_rll(criterion):
    t = time.perf_counter()
    ok = all(rll.check_rll(n, mixed=m).passed for n in (2, 3) for m in (False, True))
    dt = time.perf_counter() - t
    ok = ok and dt < 120
    criterion(3, "RLL on evaluation L+-, n=2,3", ok, "%.2fs" % dt)
    assert ok


def _perturbations(g):
    """Every factor with one admissible block shifted by the identity."""
    one = linalg.identity(g.K.dim, RatFunc(1))
    n = g.K.n
    shapes = {"E": lambda i, j: i >= j, "K": lambda i, j: i == j, "F": lambda i, j: i <= j}
    for name, allowed in shapes.items():
        for i in range(n):
            for j in range(n):
                if not allowed(i, j):
                    continue
                parts = {"E": g.E, "K": g.K, "F": g.F}
                X = parts[name]
                entries = dict(X.entries)
                entries[(i, j)] = linalg.mat_add(X.get(i, j), one)
                parts[name] = rll.OpMatrix(X.n, X.dim, entries)
                yield (name, i, j), rll.GaussFactors(parts["E"], parts["K"], parts["F"])


def test_criterion_04_gauss(criterion):
    t = time.perf_counter()
    ok, tried, accepted = True, 0, []
    for n in (2, 3):
        for sign in (1, -1):
            ok = ok and rll.check_gauss(n, sign).passed
            M = rll.eval_L(n, sign)
            g = rll.gauss_decompose(M)
            for where, h in _perturbations(g):
                tried += 1
                if (h.recompose() - M).is_zero():
                    accepted.append((n, sign, where))
    dt = time.perf_counter() - t
    ok = ok and not accepted and dt < 60
    criterion(4, "Gauss decomposition recomposes; perturbations rejected, n=2,3", ok,
              "%d perturbations, %.2fs" % (tried, dt))
    assert ok, accepted


def test_criterion_05_drinfeld(criterion):
    rep, dt = timed(rll.check_drinfeld, 3)
    ok = rep.passed and dt < 120
    criterion(5, "Drinfeld relations on currents, n=3", ok, "%.2fs" % dt)
    assert ok, rep.counterexample


def test_criterion_06_reflection(criterion):
    t = time.perf_counter()
    ok = all(rll.check_reflection(n).passed for n in (2, 3))
    dt = time.perf_counter() - t
    ok = ok and dt < 60
    criterion(6, "reflection relation, n=2,3", ok, "%.2fs" % dt)
    assert ok


def test_criterion_07_spinor(criterion):
    rep, dt = timed(fermion.check_affine_gl_relations, 3, 4, central=1)
    ok = rep.passed and dt < 180
    criterion(7, "affine gl(3) commutators, central value 1, degree <= 4", ok,
              "%d checks, %.2fs" % (rep.checked, dt))
    assert ok, rep.counterexample


def test_criterion_08_boson_fermion(criterion):
    t = time.perf_counter()
    a = boson.check_boson_clifford(3, 3)
    b = boson.check_characters(3, 4, charges=range(-2, 3))
    c = boson.check_jtp(8)
    dt = time.perf_counter() - t
    ok = a.passed and b.passed and c.passed and dt < 180
    criterion(8, "boson-fermion: Clifford, characters, triple product", ok,
              "clifford %s, characters %s, jtp %s, %.2fs" % (a.passed, b.passed, c.passed, dt))
    assert ok


@pytest.mark.xfail(strict=True, reason="measured shift constants are (+1, -1), not (-2, +2); "
                                        "the Wick form is -Casimir - id")
def test_criterion_09_casimir(criterion):
    rep, dt = timed(fermion.check_casimir_series, 3, 2)
    d = rep.details
    ok = rep.passed and dt < 60
    criterion(9, "Casimir series with constants -2, +2 at n=3, D=2", ok,
              "degree-zero %s; constants measured %s vs expected %s; %.2fs"
              % (d["degree_zero"], tuple(d["shift_constants"]), tuple(d["expected_constants"]), dt))
    assert ok, rep.counterexample


def test_criterion_09_degree_zero_part():
    # the matrix-coefficient part of the criterion holds on its own
    assert fermion.check_degree_zero_commutation(3, 2).passed


def test_criterion_10_structure_functions(criterion):
    (_, _, rep), dt = timed(qeval.structure_functions, 3, 12)
    ok = rep.passed and dt < 5
    criterion(10, "structure-function identity to order 12, n=3", ok, "%.2fs" % dt)
    assert ok, rep.counterexample


STATED_TOLERANCE = 2 * Fraction(1, 3) ** 72


@pytest.mark.xfail(strict=True, reason="residual at 12 factors is 7.5-162 times (1/3)^72, "
                                        "above the stated 2*(1/3)^72; see the derived bound test")
def test_criterion_11_exchange(criterion):
    t = time.perf_counter()
    worst, ok = 0.0, True
    for kp in (1, 2):
        for j in range(3):
            rep = qeval.check_exchange(3, 1, kp, j, q_probe=Fraction(1, 3), terms=12,
                                       tolerance=STATED_TOLERANCE)
            worst = max([worst] + [pt["residual_over_p_terms"] for pt in rep.details["points"]])
            ok = ok and rep.passed
        ok = ok and qeval.exchange_convergence(3, 1, kp, 0)[1]
    dt = time.perf_counter() - t
    ok = ok and dt < 60
    criterion(11, "exchange at q=1/3, 12 factors, tolerance 2*(1/3)^72", ok,
              "worst residual %.1f*(1/3)^72; monotone to 16 factors; %.2fs" % (worst, dt))
    assert ok


def test_criterion_11_within_derived_bound_and_converging():
    for kp in (1, 2):
        for j in range(3):
            assert qeval.check_exchange(3, 1, kp, j).passed
        residuals, monotone = qeval.exchange_convergence(3, 1, kp, 0)
        assert monotone
        assert residuals[2] < STATED_TOLERANCE


def test_criterion_12_residue(criterion):
    t = time.perf_counter()
    reps = [qeval.residue_check(3, 1, 10, j) for j in range(3)]
    dt = time.perf_counter() - t
    ok = all(r.passed for r in reps) and dt < 30
    criterion(12, "residue equals h^(1) to order 10, n=3, k=1", ok, "%.2fs" % dt)
    assert ok, [r.counterexample for r in reps]
