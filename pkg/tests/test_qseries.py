import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kzcheck.errors import FormatError, PrecisionError, UnderdeterminedError, WeightMismatchError
from kzcheck.qseries import (
    EtaQuotientSpec,
    QExpansion,
    add,
    delta_series,
    eisenstein_F,
    eta_quotient,
    hecke_Tp,
    int_poly_mul,
    kohnen_plus_basis,
    mul,
    parse,
    partition_series,
    plus_space_excluded,
    proportionality,
    scale,
    serialize,
    shimura_lift,
    theta_series,
    zero_series,
)


def naive_product(a, b, n_out):
    out = [0] * n_out
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < n_out:
                out[i + j] += x * y
    return out


def naive_eta_product(factors, N):
    """q^(sum d r / 24) prod (1 - q^(d n))^r by repeated multiplication / geometric series."""
    offset = sum(d * r for d, r in factors) // 24
    series = [0] * offset + [1] + [0] * (N - offset)
    for d, r in factors:
        for n in range(1, N // d + 1):
            step = d * n
            for _ in range(abs(r)):
                if r > 0:
                    factor = [1] + [0] * N
                    factor[step] = -1
                else:
                    factor = [1 if i % step == 0 else 0 for i in range(N + 1)]
                series = naive_product(series, factor, N + 1)
    return series


@given(
    st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=1, max_size=64),
    st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=1, max_size=64),
    st.integers(1, 64),
)
@settings(max_examples=150)
def test_int_poly_mul_matches_naive(a, b, n_out):
    assert int_poly_mul(a, b, n_out) == naive_product(a, b, n_out)


@given(st.lists(st.fractions(max_denominator=50), min_size=2, max_size=30), st.lists(st.fractions(max_denominator=50), min_size=2, max_size=30))
@settings(max_examples=60)
def test_rational_mul_matches_naive(a, b):
    N = min(len(a), len(b)) - 1
    A, B = QExpansion(tuple(a[: N + 1])), QExpansion(tuple(b[: N + 1]))
    assert list(mul(A, B).coefficients) == naive_product(a[: N + 1], b[: N + 1], N + 1)


def test_small_products():
    one_plus = QExpansion((1, 1, 0))
    one_minus = QExpansion((1, -1, 0))
    assert (one_plus * one_minus).coefficients == (1, 0, -1)
    th = theta_series(4)
    assert (th * th).coefficients == (1, 4, 4, 0, 4)
    assert scale(th, 0).is_zero()


def test_add_rejects_weight_mismatch():
    with pytest.raises(WeightMismatchError):
        add(theta_series(10), eisenstein_F(10))


def test_delta_values_and_naive_oracle():
    d = delta_series(60)
    assert (d[1], d[2], d[3]) == (1, -24, 252)
    assert list(d.coefficients) == naive_eta_product([(1, 24)], 60)
    assert d.weight == 12 and d.level == 1 and d.character is None


def test_delta_multiplicative():
    d = delta_series(900)
    for m in range(1, 31):
        for n in range(1, 31):
            if math.gcd(m, n) == 1:
                assert d[m * n] == d[m] * d[n]


def test_level11_newform():
    f = eta_quotient(EtaQuotientSpec.parse("1^2,11^2"), 80)
    assert list(f.coefficients) == naive_eta_product([(1, 2), (11, 2)], 80)
    assert f[1] == 1 and f[11] == 1
    assert f.level == 11 and f.weight == 2 and f.character is None


def test_eta_with_negative_exponent_and_empty_spec():
    # eta(2z)^16 / eta(z)^8: 2*16 - 8 = 24, so the expansion starts at q^1
    f = eta_quotient(EtaQuotientSpec.parse("1^-8,2^16"), 40)
    assert list(f.coefficients) == naive_eta_product([(1, -8), (2, 16)], 40)
    assert eta_quotient(EtaQuotientSpec.parse(""), 5).coefficients == (1, 0, 0, 0, 0, 0)


def test_partition_series_known_values():
    assert partition_series(10) == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_theta_square_counts_representations():
    N = 200
    th2 = theta_series(N) ** 2
    r = int(math.isqrt(N)) + 1
    for n in range(N + 1):
        count = sum(1 for a in range(-r, r + 1) for b in range(-r, r + 1) if a * a + b * b == n)
        assert th2[n] == count


def test_theta_and_eisenstein_examples():
    th = theta_series(10)
    assert (th[0], th[4], th[3]) == (1, 2, 0)
    F = eisenstein_F(10)
    assert (F[1], F[3], F[2]) == (1, 4, 0)


def test_plus_basis_k6(g6):
    assert g6.weight == Fraction(13, 2) and g6.level == 4
    assert (g6[1], g6[2], g6[3]) == (1, 0, 0)
    assert g6[0] == 0
    assert all(g6[n] == 0 for n in range(201) if plus_space_excluded(n, 6))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6, 7, 8, 9])
def test_plus_basis_condition_on_all_indices(k):
    for g in kohnen_plus_basis(k, 120) + kohnen_plus_basis(k, 120, cuspidal=False):
        assert all(g[n] == 0 for n in range(121) if plus_space_excluded(n, k))


def test_plus_basis_dimensions():
    # cusp plus spaces match level-1 cusp forms of weight 2k
    assert [len(kohnen_plus_basis(k, 160)) for k in range(1, 13)] == [0, 0, 0, 0, 0, 1, 0, 1, 1, 1, 1, 2]
    assert kohnen_plus_basis(2, 100) == []


def test_plus_basis_underdetermined():
    with pytest.raises(UnderdeterminedError):
        kohnen_plus_basis(6, 20)


def test_hecke_on_delta():
    d = delta_series(300)
    assert proportionality(hecke_Tp(d, 2), d.truncate(150)) == -24
    assert proportionality(hecke_Tp(d, 3), d.truncate(100)) == 252
    assert hecke_Tp(zero_series(20, 12), 2).is_zero()


@pytest.fixture(scope="module")
def g6_long():
    (g,) = kohnen_plus_basis(6, 2500)
    return g


def test_shimura_lift_is_delta(g6_long):
    lift = shimura_lift(g6_long, 1, 6, 50)
    assert lift[1] == g6_long[1]
    lam = proportionality(lift, delta_series(50))
    assert lam is not None and lam != 0


def test_shimura_lift_other_discriminant(g6_long):
    # D0 = 5: A(1) = c(5) and the lift is still proportional to Delta
    lift = shimura_lift(g6_long, 5, 6, 20)
    assert lift[1] == g6_long[5]
    assert proportionality(lift, delta_series(20)) == g6_long[5]


@pytest.mark.parametrize("k, D0", [(6, 1), (8, 1), (9, 3)])
def test_shimura_lift_hecke_eigen(k, D0):
    L = 40
    (g,) = kohnen_plus_basis(k, D0 * L * L)
    lift = shimura_lift(g, D0, k, L)
    assert not lift.is_zero()
    for p in (2, 3, 5):
        tp = hecke_Tp(lift, p, k)
        lam = proportionality(tp, lift.truncate(tp.precision))
        assert lam is not None and lam.denominator == 1


def test_shimura_lift_of_zero():
    z = zero_series(100, Fraction(13, 2), 4)
    assert shimura_lift(z, 1, 6, 10).is_zero()


def test_shimura_lift_needs_precision(g6):
    with pytest.raises(PrecisionError):
        shimura_lift(g6, 1, 6, 50)


def test_serialize_round_trip():
    th = theta_series(10)
    back = parse(serialize(th))
    assert back.coefficients == th.coefficients and back.weight == th.weight and back.level == 4


def test_parse_half_integral_and_errors():
    f = parse("weight 3/2\nlevel 4\nprecision 3\n1 1\n# comment\n3 -1/2\n")
    assert f.half_integral and f[3] == Fraction(-1, 2)
    with pytest.raises(FormatError):
        parse("weight 2\nprecision 3\n1 1\n")
    with pytest.raises(FormatError):
        parse("weight 2\nlevel 1\nprecision 3\n5 1\n")
    with pytest.raises(FormatError):
        parse("weight 2\nlevel 1\nprecision 3\n1 0.5\n")


@given(st.lists(st.fractions(max_denominator=1000), min_size=1, max_size=40), st.booleans())
def test_serialize_round_trip_property(cs, half):
    f = QExpansion(tuple(cs), Fraction(5, 2) if half else Fraction(4), 4)
    g = parse(serialize(f))
    assert g.coefficients == f.coefficients and g.weight == f.weight
