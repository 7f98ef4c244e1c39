from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kzcheck.arith import fundamental_discriminants
from kzcheck.errors import PreconditionError
from kzcheck.kz import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    class_of,
    constancy_check,
    kz_constant,
    kz_ratio,
    make_record,
    predict_vanishing,
    ramanujan_scan,
    report_kv,
    two_discriminant_check,
    verify_report,
)
from kzcheck.lfunctions import NewformData, central_lvalue, root_number
from kzcheck.qseries import QExpansion, delta_series, kohnen_plus_basis, theta_series, zero_series

ACCEPT_DS = [1, 5, 8, 12, 13, 17, 21, 24]


@pytest.fixture(scope="module")
def delta_long():
    return NewformData.from_qexpansion(delta_series(1200))


def test_class_of_examples(delta, level11):
    assert all(class_of(D, delta) == frozenset() for D in fundamental_discriminants(-50, 50))
    assert class_of(-3, level11) == frozenset()
    assert class_of(5, level11) == frozenset({11})


def test_predict_vanishing_examples(delta, level11):
    assert not predict_vanishing(5, delta)
    assert predict_vanishing(-3, delta)
    assert not predict_vanishing(-3, level11)
    with pytest.raises(PreconditionError):
        predict_vanishing(9, delta)


def test_predict_vanishing_iff_root_number(delta, level11):
    for f in (delta, level11):
        for D in fundamental_discriminants(-100, 100):
            assert predict_vanishing(D, f) == (root_number(f, D) == -1), (f.level, D)


SYNTH = NewformData(105, 4, (0, 1), ((3, 1), (5, -1), (7, -1)))


def test_classes_partition_discriminants(level11):
    Ds = fundamental_discriminants(-500, 500)
    for f in (level11, SYNTH):
        primes = f.primes
        subsets = [frozenset(c) for r in range(len(primes) + 1) for c in combinations(primes, r)]
        blocks = {S: {D for D in Ds if class_of(D, f) == S} for S in subsets}
        assert set().union(*blocks.values()) == set(Ds)
        assert sum(len(b) for b in blocks.values()) == len(Ds)
        assert all(blocks[S] for S in subsets)


def test_kz_constant_examples():
    assert kz_constant(1, set(), 0, k=6) == (Fraction(120), -6)
    assert kz_constant(11, {11}, 0, k=1) == (Fraction(11, 6), -1)
    assert kz_constant(11, set(), 1, k=1) == (Fraction(1), -1)
    with pytest.raises(PreconditionError):
        kz_constant(11, {3}, 0, k=1)


def test_constancy_pass(delta, g6):
    rep = constancy_check(delta, g6, ACCEPT_DS, tol=1e-6, target_abs_err=1e-9)
    assert rep.status == PASS and rep.max_rel_deviation < 1e-6


def test_single_discriminant_inconclusive(delta, g6):
    assert constancy_check(delta, g6, [5]).status == INCONCLUSIVE


def test_negative_control_adding_eisenstein_plus_form(delta, g6):
    forms = kohnen_plus_basis(6, 200, cuspidal=False)
    eis = next(h for h in forms if h[0] != 0)
    bad = g6 + eis.replace(cuspidal=False)
    assert constancy_check(delta, bad, ACCEPT_DS).status == FAIL
    rep = verify_report(delta, bad, 1, 24)
    assert rep.overall == FAIL


def test_two_discriminant_check(delta, g6):
    assert two_discriminant_check(delta, g6, 5, 5) == 0
    assert two_discriminant_check(delta, g6, 5, 13) < 1e-6
    with pytest.raises(PreconditionError):
        two_discriminant_check(delta, g6, 5, -3)


@given(st.fractions(min_value=Fraction(-50), max_value=Fraction(50), max_denominator=30).filter(lambda x: x != 0))
@settings(max_examples=25, deadline=None)
def test_ratio_scales_quadratically(delta, g6, lam):
    for D in (1, 13):
        assert kz_ratio(delta, g6 * lam, D) == pytest.approx(float(lam) ** 2 * kz_ratio(delta, g6, D), rel=1e-12)


@given(st.fractions(min_value=Fraction(-50), max_value=Fraction(50), max_denominator=30).filter(lambda x: x != 0))
@settings(max_examples=15, deadline=None)
def test_verdict_scale_invariant(delta, g6, lam):
    assert constancy_check(delta, g6 * lam, ACCEPT_DS).status == constancy_check(delta, g6, ACCEPT_DS).status == PASS
    forms = kohnen_plus_basis(6, 200, cuspidal=False)
    bad = g6 + next(h for h in forms if h[0] != 0).replace(cuspidal=False)
    assert constancy_check(delta, bad * lam, ACCEPT_DS).status == FAIL


def test_verdict_invariant_under_coefficient_extension(delta, delta_long, g6):
    a = constancy_check(delta, g6, ACCEPT_DS)
    b = constancy_check(delta_long, g6, ACCEPT_DS)
    assert a.status == b.status == PASS
    assert a.ratio_mean == pytest.approx(b.ratio_mean, rel=1e-9)


def test_anomaly_flagged(delta, g6):
    coeffs = list(g6.coefficients)
    coeffs[5] = Fraction(0)
    g = g6.replace(coefficients=tuple(coeffs))
    rec = make_record(delta, g, 5)
    assert rec.status == "anomaly" and rec.ratio == 0


def test_ramanujan_scan(g6):
    assert ramanujan_scan(zero_series(50, Fraction(13, 2), 4), 6, 50) == (0.0, 1)
    assert ramanujan_scan(g6, 6, 1) == (1.0, 1)
    stat, arg = ramanujan_scan(g6, 6, 200)
    assert 0 < stat < 10 and 1 <= arg <= 200


def test_verify_report_pass(delta, g6):
    rep = verify_report(delta, g6, -24, 24)
    assert rep.overall == PASS
    vanishing = [c for c in rep.checks if c[0].startswith("vanishing")]
    assert len(vanishing) == len([D for D in fundamental_discriminants(-24, -1)])
    assert all(c[1] == PASS for c in rep.checks)


def test_verify_report_theta13_fails(delta):
    th13 = theta_series(200) ** 13
    rep = verify_report(delta, th13, 1, 24)
    states = dict((name, state) for name, state, _ in rep.checks)
    assert states["kohnen-condition"] == FAIL and states["cuspidal"] == FAIL
    assert rep.overall == FAIL


def test_verify_report_empty_range(delta, g6):
    rep = verify_report(delta, g6, 2, 3)
    assert rep.records == [] and rep.overall == INCONCLUSIVE


def test_vanishing_records_are_small(delta_long, level11, g6):
    for f in (delta_long, level11):
        for D in fundamental_discriminants(-60, 60):
            if predict_vanishing(D, f):
                res = central_lvalue(f, D, 1e-10)
                assert abs(res.value) <= 10 * res.abs_error_bound


def test_out_of_class_coefficient_is_a_fail_entry(level11):
    # weight 3/2 against the level-11 form, declared class {}: c(3) is fine
    # (-3 lies in the empty class) but c(5) is not, since -5 is not a discriminant
    coeffs = [Fraction(0)] * 41
    coeffs[3] = coeffs[5] = Fraction(1)
    g = QExpansion(tuple(coeffs), Fraction(3, 2), 44, cuspidal=True)
    rep = verify_report(level11, g, -40, 40, declared_class=())
    states = {name: state for name, state, _ in rep.checks}
    assert states["out-of-class D=5"] == FAIL
    assert "out-of-class D=3" not in states
    assert rep.overall == FAIL


def test_report_deterministic(delta, g6):
    a = report_kv(verify_report(delta, g6, -24, 24))
    b = report_kv(verify_report(delta, g6, -24, 24))
    assert a == b and a.endswith("overall=PASS\n")
