"""2-adic objects behind the level-4 plus space: the unit Weil constant,
quadratic Gauss sums, and Whittaker functionals of the two vectors F[2,1],
F[2,4] spanning the relevant fixed space.

Every 2-adic integral here has a locally constant integrand, so it is
computed exactly as a finite average over units modulo 2^m, with values in
Q(zeta_256). Whittaker values are polynomials in mu = mu(2)."""
from __future__ import annotations

from fractions import Fraction
from typing import Union

from .arith import valuation
from .cyclo import I, ONE, SQRT2, ZERO, Cyclo, MuPoly

# quadratic characters of Z_2^*, as exponents (a, b) in chi_{-1}^a chi_2^b
CHARACTERS = {
    "trivial": (0, 0),
    "chi_-1": (1, 0),
    "chi_2": (0, 1),
    "chi_-2": (1, 1),
}
CONDUCTOR = {(0, 0): 0, (1, 0): 2, (0, 1): 3, (1, 1): 3}


def _tag(nu) -> tuple[int, int]:
    if isinstance(nu, str):
        try:
            return CHARACTERS[nu]
        except KeyError:
            raise ValueError(f"unknown 2-adic character {nu!r}") from None
    a, b = nu
    return a % 2, b % 2


def chi_m1(u: int) -> int:
    return 1 if u % 4 == 1 else -1


def chi_2(u: int) -> int:
    return 1 if u % 8 in (1, 7) else -1


def char_value(nu, u: int) -> int:
    """nu(u) for an odd integer u."""
    if u % 2 == 0:
        raise ValueError("2-adic unit characters need an odd argument")
    a, b = _tag(nu)
    return (chi_m1(u) if a else 1) * (chi_2(u) if b else 1)


def conductor(nu) -> int:
    return CONDUCTOR[_tag(nu)]


def weil_gamma_2_exact(x: int) -> Cyclo:
    """(1 - i + (1 + i) chi_{-1}(x)) / 2 for a 2-adic unit x."""
    if x % 2 == 0:
        raise ValueError("the unit Weil constant needs an odd argument")
    return (ONE - I + (ONE + I) * chi_m1(x)) / 2


def weil_gamma_2(x: int) -> complex:
    return complex(weil_gamma_2_exact(x))


def _split(t: Fraction) -> tuple[int, Fraction]:
    """t = 2^v * (odd/odd)."""
    t = Fraction(t)
    v = valuation(t.numerator, 2) - valuation(t.denominator, 2)
    return v, t / Fraction(2) ** v


def _frac_part_2adic(x: Fraction, j: int) -> int:
    """r with {x}_2 = r / 2^j, for x = (odd/odd) * 2^-j."""
    a, b = x.numerator, x.denominator
    mod = 2 ** j
    return a * pow(b, -1, mod) % mod if j > 0 else 0


def _unit_average(weight, m: int, phase, den: int) -> Cyclo:
    """avg over odd u mod 2^m of weight(u) * exp(2 pi i phase(u) / den)."""
    acc = Cyclo()
    for u in range(1, 2 ** m, 2):
        acc = acc + Cyclo.of(weight(u)) * Cyclo.root(phase(u) % den, den)
    return acc / 2 ** (m - 1)


def gauss_sum_2(nu, t, m: int | None = None) -> Cyclo:
    """eta(nu, t) = int_{|u|=1} nu(u) exp(-2 pi i t u) d*u (total mass 1), exactly.

    Realized as an average over units modulo 2^m, m = conductor + v(1/t) + 1
    by default; any larger m gives the same value."""
    t = Fraction(t)
    if t == 0:
        return ONE if _tag(nu) == (0, 0) else ZERO
    v, unit = _split(t)
    j = max(0, -v)
    if m is None:
        m = max(1, conductor(nu) + j + 1)
    if m < max(conductor(nu), j, 1):
        raise ValueError(f"modulus 2^{m} too small for this Gauss sum")
    r0 = _frac_part_2adic(unit, j) if j else 0
    den = 2 ** j
    return _unit_average(lambda u: char_value(nu, u), m, lambda u: -r0 * u, den)


def gauss_sum_nonvanishing_predicted(nu, t) -> bool:
    """Conductor rule: for ramified nu the sum is nonzero only at |t| = 2^conductor;
    for trivial nu only at |t| <= 2."""
    t = Fraction(t)
    c = conductor(nu)
    if t == 0:
        return c == 0
    v, _ = _split(t)
    return v >= -1 if c == 0 else v == -c


# four characters against |t| = 1, 2, 4, 8, 16
GAUSS_GRID = tuple((name, Fraction(1, 2 ** j)) for name in CHARACTERS for j in range(5))


# --- Whittaker functionals at 2 -------------------------------------------

Number = Union[int, Fraction]


def as_number(z) -> Fraction:
    """Accept an integer/Fraction or a pair (delta, Delta) meaning delta * Delta^2."""
    if isinstance(z, tuple):
        d, D = z
        return Fraction(d) * Fraction(D) ** 2
    return Fraction(z)


def _odd_part_residue(w: Fraction, mod: int) -> int:
    return w.numerator * pow(w.denominator, -1, mod) % mod


def T_term(z, l: int, kp: int) -> MuPoly:
    """T(z, l) = int_{|x| = 2^l} mu(1/x) |x|^-1 gamma(x) chi_{-1}(x)^(k'+1) e^{2 pi i z x} dx.

    With x = 2^-l u (dx = 2^l du, units of total du-mass 1/2) this is
    mu^l / 2 * avg_u chi_2(u)^l gamma(u) chi_{-1}(u)^(k'+1) e^{2 pi i z u / 2^l}."""
    z = as_number(z)
    if z == 0:
        raise ValueError("z must be nonzero")
    v, w = _split(z)
    j = l - v  # z u / 2^l has 2-adic denominator 2^j
    m = max(3, j, 1)
    den = 2 ** max(j, 0)
    rw = _odd_part_residue(w, 2 ** m) if j > 0 else 0

    def weight(u: int) -> Cyclo:
        sign = (chi_2(u) ** l) * (chi_m1(u) ** ((kp + 1) % 2))
        return weil_gamma_2_exact(u) * sign

    avg = _unit_average(weight, m, lambda u: rw * u, den)
    return MuPoly.monomial(l, avg / 2)


def whittaker_F22_series(z, kp: int, extra: int = 2) -> MuPoly:
    """Sum of T(z, l) for l >= 2, truncated where every term vanishes by the
    conductor rule (l > v(z) + 3), plus `extra` further terms as a check."""
    z = as_number(z)
    v, _ = _split(z)
    total = MuPoly()
    for l in range(2, max(2, v + 3) + extra + 1):
        total = total + T_term(z, l, kp)
    return total


def whittaker_F21(z) -> MuPoly:
    """char(Z_2)(z)."""
    v, _ = _split(as_number(z))
    return MuPoly.monomial(0, 1) if v >= 0 else MuPoly()


def whittaker_F22_closed(z, kp: int) -> MuPoly:
    """Closed form of the F[2,4] Whittaker value at z = 2^v w (w a unit).

    With A = (1-i)/2, B = (1+i)/2 and C0, C1 = (B, A) for k' even, (A, B) for k' odd:
      1/2 [ sum_{2<=l<=v, l even} C0 mu^l
            - [v odd] C0 mu^(v+1)
            + [v even] ( i C1 chi_{-1}(w) mu^(v+2)
                         + (C0 chi_2(w) + i C1 chi_{-2}(w)) mu^(v+3) / sqrt 2 ) ]
    and 0 when v < 0."""
    z = as_number(z)
    v, w = _split(z)
    if v < 0:
        return MuPoly()
    A = (ONE - I) / 2
    B = (ONE + I) / 2
    C0, C1 = (B, A) if kp % 2 == 0 else (A, B)
    wr = _odd_part_residue(w, 8)
    total = MuPoly()
    for l in range(2, v + 1, 2):
        total = total + MuPoly.monomial(l, C0)
    if v % 2 == 1:
        total = total - MuPoly.monomial(v + 1, C0)
    else:
        total = total + MuPoly.monomial(v + 2, I * C1 * chi_m1(wr))
        total = total + MuPoly.monomial(v + 3, (C0 * chi_2(wr) + I * C1 * char_value("chi_-2", wr)) * (SQRT2 / 2))
    return total.scale(Fraction(1, 2))


def whittaker_F22_printed(z, kp: int) -> MuPoly | None:
    """The transcribed four-row reference table, or None outside its cases.

    Row two, (mu^2 + sqrt2 mu^3)(1 + (-1)^k' i)/4 on z in (-1)^k' + 4Z_2, holds
    only for chi_2(z) = +1; the series gives a minus sign for the other half."""
    z = as_number(z)
    v, w = _split(z)
    c = (ONE + I * (-1) ** kp) / 4
    sgn = (-1) ** kp
    if v < 0:
        return MuPoly()
    wr4 = _odd_part_residue(w, 4)
    if v == 0 and (sgn * wr4) % 4 == 1:
        return (MuPoly.monomial(2, 1) + MuPoly.monomial(3, SQRT2)).scale(c)
    if (v == 0 and (sgn * wr4) % 4 == 3) or v == 1:
        return MuPoly.monomial(2, -1).scale(c)
    if v == 3 or (v == 2 and (sgn * wr4) % 4 == 3):
        return (MuPoly.monomial(2, 1) - MuPoly.monomial(4, 1)).scale(c)
    return None


def whittaker_F(z, mu: complex, kp: int) -> tuple[complex, complex]:
    """(L^z(F[2,1]), L^z(F[2,4])) at mu = mu(2)."""
    return whittaker_F21(z)(mu), whittaker_F22_closed(z, kp)(mu)


def kohnen_vector_exact(z, kp: int) -> MuPoly:
    """mu^2 (1 + (-1)^k' i)/4 F21 + F22 as a polynomial in mu."""
    c = (ONE + I * (-1) ** kp) / 4
    return MuPoly.monomial(2, c) * whittaker_F21(z) + whittaker_F22_closed(z, kp)


def kohnen_vector_value(z, mu: complex, kp: int) -> complex:
    return kohnen_vector_exact(z, kp)(mu)


def kohnen_vanishing_predicted(z, kp: int) -> bool:
    """True on |z| > 1 and on 2-adic integers z with (-1)^k' z = 2, 3 mod 4."""
    z = as_number(z)
    v, w = _split(z)
    if v < 0:
        return True
    r = (-1) ** kp * (_odd_part_residue(w, 4) * 2 ** v if v < 2 else 0)
    return r % 4 in (2, 3)


SQUARE_CLASSES = (1, -1, 2, -2, 5, -5, 10, -10)
