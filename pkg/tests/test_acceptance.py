"""Acceptance criteria 1-11, one test each. Every test prints a single
`criterion N: PASS|FAIL ...` line to the terminal before asserting."""
import time
from fractions import Fraction

import pytest

import test_arith
import test_kz
import test_lfunctions
import test_local_factors
import test_qseries
import test_twoadic
from kzcheck.kz import PASS, constancy_check, kz_constant, kz_ratio, predict_vanishing
from kzcheck.lfunctions import NewformData, central_lvalue
from kzcheck.local_factors import (
    SWEEP_PRIMES,
    arch_quotient_check,
    default_grid,
    gamma_duplication_check,
    quotient_check,
)
from kzcheck.petersson import petersson_norm_numeric
from kzcheck.qseries import (
    EtaQuotientSpec,
    delta_series,
    eta_quotient,
    kohnen_plus_basis,
    plus_space_excluded,
    proportionality,
    shimura_lift,
)
from kzcheck.cyclo import I, SQRT2
from kzcheck.twoadic import (
    GAUSS_GRID,
    SQUARE_CLASSES,
    gauss_sum_2,
    gauss_sum_nonvanishing_predicted,
    kohnen_vanishing_predicted,
    kohnen_vector_exact,
    whittaker_F22_closed,
    whittaker_F22_series,
)

ACCEPT_DS = [1, 5, 8, 12, 13, 17, 21, 24]


@pytest.fixture
def verdict(capsys):
    def emit(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def test_criterion_01_ratio_constancy(verdict):
    t0 = time.perf_counter()
    f = NewformData.from_qexpansion(eta_quotient(EtaQuotientSpec(((1, 24),)), 400))
    (g,) = kohnen_plus_basis(6)
    rep = constancy_check(f, g, ACCEPT_DS, tol=1e-6, target_abs_err=1e-9)
    elapsed = time.perf_counter() - t0
    defined = [r.D for r in rep.records if r.ratio is not None]
    ok = rep.status == PASS and rep.max_rel_deviation < 1e-6 and elapsed < 60 and len(defined) >= 2
    verdict(1, ok, f"max_rel_dev={rep.max_rel_deviation:.3e} over D={defined}, runtime={elapsed:.2f}s")


def test_criterion_02_sign_forced_vanishing(verdict, delta):
    vals = {D: central_lvalue(delta, D, 1e-10).value for D in (-3, -4, -7, -8)}
    ok = all(predict_vanishing(D, delta) for D in vals) and all(abs(v) < 1e-8 for v in vals.values())
    verdict(2, ok, "max |L| = %.3e" % max(abs(v) for v in vals.values()))


def test_criterion_03_kohnen_condition(verdict, g6):
    bad = [n for n in range(201) if plus_space_excluded(n, 6) and g6[n] != 0]
    verdict(3, g6.precision == 200 and not bad, f"violations={bad[:5]} up to n=200")


def test_criterion_04_shimura_lift(verdict):
    (g,) = kohnen_plus_basis(6, 2500)
    lift = shimura_lift(g, 1, 6, 50)
    lam = proportionality(lift, delta_series(50))
    ok = lam is not None and lam != 0 and isinstance(lam, Fraction)
    verdict(4, ok, f"lift = {lam} * Delta for n <= 50")


def test_criterion_05_root_number_bookkeeping(verdict, level11):
    const = kz_constant(11, {11}, 0, k=1)
    ok = level11.w(11) == -1 and const == (Fraction(11, 6), -1)
    verdict(5, ok, f"w_11={level11.w(11)}, constant={const[0]}*pi^{const[1]}")


def test_criterion_06_quotient_identities(verdict):
    grid = default_grid()
    worst = max(quotient_check(spec, d) for spec, d in grid)
    seen = {(s.kind, s.q, complex(s.s), s.tau, d.valuation, d.unit_symbol) for s, d in grid}
    covered = all(
        ("unramified_principal", q, complex(s), 1, v, u) in seen
        for q in SWEEP_PRIMES for s in (0, 0.3j, 0.7j) for v, u in ((0, 1), (0, -1), (1, 1))
    ) and all(
        ("complementary", q, complex(s), t, v, u) in seen
        for q in SWEEP_PRIMES for s in (0.1, 0.3) for t in (1, -1) for v, u in ((0, 1), (0, -1), (1, 1))
    ) and all(
        ("special", q, 0j, t, 0, -t) in seen and ("special", q, 0j, t, 1, 1) in seen and ("weil_odd", q, 0j, t, 0, t) in seen
        for q in SWEEP_PRIMES for t in (1, -1)
    )
    verdict(6, covered and worst < 1e-12, f"{len(grid)} grid points, max residual={worst:.3e}")


def test_criterion_07_gauss_sums(verdict):
    named = (
        gauss_sum_2("chi_2", Fraction(1, 8)) == SQRT2 / 2
        and gauss_sum_2("chi_-2", Fraction(1, 8)) == -I * SQRT2 / 2
        and gauss_sum_2("chi_-1", Fraction(1, 4)) == -I
    )
    agree = sum((not gauss_sum_2(nu, t).is_zero()) == gauss_sum_nonvanishing_predicted(nu, t) for nu, t in GAUSS_GRID)
    verdict(7, named and agree == len(GAUSS_GRID) == 20, f"named values exact={named}, conductor rule {agree}/20")


def test_criterion_08_whittaker_tables(verdict):
    total = same = 0
    for delta in SQUARE_CLASSES:
        for Delta in (1, 2, 4):
            for kp in (0, 1):
                z = (delta, Fraction(1, Delta))
                total += 1
                same += whittaker_F22_closed(z, kp) == whittaker_F22_series(z, kp)
    unit = [(d, kp) for d in SQUARE_CLASSES for kp in (0, 1)]
    vanish_ok = all(
        kohnen_vector_exact(Fraction(d), kp).is_zero() == (((-1) ** kp * d) % 4 in (2, 3)) for d, kp in unit
    ) and all(kohnen_vector_exact(Fraction(d), kp).is_zero() == kohnen_vanishing_predicted(Fraction(d), kp) for d, kp in unit)
    verdict(8, same == total == 48 and vanish_ok, f"closed==series {same}/{total}, unit-scale vanishing set exact={vanish_ok}")


def test_criterion_09_absolute_constant(verdict, delta, g6):
    nf = petersson_norm_numeric(delta_series(200), 1, 1e-16)
    ng = petersson_norm_numeric(g6, 4, 1e-14)
    R1 = kz_ratio(delta, g6, 1)
    rel = abs(R1 - ng / nf) / (ng / nf)
    verdict(9, rel < 1e-3, f"R(1)={R1:.12g}, <g,g>/<f,f>={ng / nf:.12g}, rel={rel:.2e}")


def test_criterion_10_duplication_and_arch(verdict):
    dup = max(gamma_duplication_check(k) for k in range(1, 21))
    arch = max(arch_quotient_check(k, n, D) for k in range(1, 9) for n in (1, 2) for D in (1, 5, 13))
    verdict(10, dup < 1e-12 and arch < 1e-10, f"duplication max={dup:.3e}, arch log-residual max={arch:.3e}")


def _property_suite(delta, level11, g6, delta_long):
    """(name, zero-argument callable) for every module invariant."""
    k = {"delta": delta, "g6": g6}
    return [
        ("arith: kronecker multiplicative", test_arith.test_kronecker_multiplicative),
        ("arith: kronecker = Legendre by enumeration", lambda: [test_arith.test_kronecker_matches_legendre_enumeration(D) for D in (-23, -4, 5, 8, 12, 53)]),
        ("arith: hilbert2 brute force", test_arith.test_hilbert2_matches_brute_force),
        ("arith: hilbert2 symmetric/bimultiplicative", test_arith.test_hilbert2_symmetric_and_bimultiplicative),
        ("arith: characters periodic/multiplicative", test_arith.test_character_periodic_and_multiplicative),
        ("qseries: product = naive Cauchy product", test_qseries.test_int_poly_mul_matches_naive),
        ("qseries: Delta multiplicative", test_qseries.test_delta_multiplicative),
        ("qseries: theta^2 = r2 by enumeration", test_qseries.test_theta_square_counts_representations),
        ("qseries: plus condition on all indices", lambda: [test_qseries.test_plus_basis_condition_on_all_indices(j) for j in (6, 8, 9)]),
        ("qseries: lift is a Hecke eigenform", lambda: test_qseries.test_shimura_lift_hecke_eigen(6, 1)),
        ("lfunctions: root number from sign data", test_lfunctions.test_root_number_depends_only_on_sign_data),
        ("lfunctions: L >= -err and forced zeros", lambda: [test_lfunctions.test_lvalues_nonnegative_and_forced_zeros(delta_long, level11, D) for D in (-8, -7, -4, -3, 1, 5, 8, 12, 13)]),
        ("lfunctions: cutoff invariance", lambda: [test_lfunctions.test_afe_invariant_under_cutoff_change(delta, level11, D) for D in (1, 5, -3)]),
        ("kz: predict_vanishing iff root number -1", lambda: test_kz.test_predict_vanishing_iff_root_number(delta, level11)),
        ("kz: classes partition the discriminants", lambda: test_kz.test_classes_partition_discriminants(level11)),
        ("kz: verdict invariant under g -> lambda g", lambda: test_kz.test_verdict_scale_invariant(**k)),
        ("kz: verdict invariant under coefficient extension", lambda: test_kz.test_verdict_invariant_under_coefficient_extension(delta, delta_long, g6)),
        ("kz: vanishing records small", lambda: test_kz.test_vanishing_records_are_small(delta_long, level11, g6)),
        ("local: quotient identities (unramified)", test_local_factors.test_unramified_identity_property),
        ("local: quotient identities (complementary)", test_local_factors.test_complementary_identity_property),
        ("local: Gauss sums stable under m -> m+2", test_twoadic.test_gauss_sum_modulus_stability_and_float_oracle),
        ("local: Whittaker closed form = series", test_twoadic.test_closed_form_equals_series_random),
        ("local: Kohnen vector vanishing set", test_twoadic.test_kohnen_vector_vanishing_random),
        ("local: special table zero on tau-square line", test_local_factors.test_special_table_zero_on_tau_square_line),
    ]


def test_criterion_11_property_suites(verdict, capsys, delta, level11, g6):
    delta_long = NewformData.from_qexpansion(delta_series(1200))
    failures = []
    suite = _property_suite(delta, level11, g6, delta_long)
    for name, fn in suite:
        try:
            fn()
        except Exception as exc:  # report every invariant, then fail once
            failures.append(f"{name}: {type(exc).__name__}")
    verdict(11, not failures, f"{len(suite) - len(failures)}/{len(suite)} invariant suites hold" + (f"; failing: {failures}" if failures else ""))
