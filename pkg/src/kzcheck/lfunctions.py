"""Twisted L-functions of integral weight newforms: root numbers and central
values from a smoothed approximate functional equation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import mpmath

from .arith import is_fundamental, is_prime, is_squarefree, kronecker, prime_divisors
from .errors import InsufficientCoefficientsError, PreconditionError
from .qseries import QExpansion

EPS = 2.0 ** -52


def atkin_lehner_from_ap(a_p: int, p: int, k: int) -> int:
    """w_p = -a_p / p^(k-1) for p exactly dividing the level."""
    ratio = Fraction(a_p, p ** (k - 1))
    if ratio not in (1, -1):
        raise PreconditionError(f"a({p}) = {a_p} is not +-{p}^{k - 1}")
    return -int(ratio)


@dataclass(frozen=True)
class NewformData:
    """Newform of weight 2k and odd squarefree level N with trivial character."""

    level: int
    weight: int
    coefficients: tuple[int, ...]
    atkin_lehner: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        N, w, a = self.level, self.weight, self.coefficients
        if w < 2 or w % 2:
            raise PreconditionError(f"weight must be even and positive, got {w}")
        if N < 1 or N % 2 == 0 or not (N == 1 or is_squarefree(N)):
            raise PreconditionError(f"level must be odd and squarefree, got {N}")
        if len(a) < 2 or a[1] != 1:
            raise PreconditionError("newform must be normalized with a(1) = 1")
        signs = dict(self.atkin_lehner)
        primes = prime_divisors(N) if N > 1 else []
        for p in primes:
            if p not in signs:
                if p >= len(a):
                    raise PreconditionError(f"no Atkin-Lehner sign for {p} and a({p}) unavailable")
                signs[p] = atkin_lehner_from_ap(a[p], p, self.k)
            elif signs[p] not in (-1, 1):
                raise PreconditionError(f"Atkin-Lehner sign at {p} must be +-1")
            elif p < len(a) and a[p] != -signs[p] * p ** (self.k - 1):
                raise PreconditionError(f"a({p}) = {a[p]} contradicts w_{p} = {signs[p]}")
        if set(signs) != set(primes):
            raise PreconditionError("Atkin-Lehner signs given for primes not dividing the level")
        object.__setattr__(self, "atkin_lehner", tuple(sorted(signs.items())))

    @property
    def k(self) -> int:
        return self.weight // 2

    @property
    def M(self) -> int:
        """Largest available coefficient index."""
        return len(self.coefficients) - 1

    def w(self, p: int) -> int:
        return dict(self.atkin_lehner)[p]

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.atkin_lehner]

    @classmethod
    def from_qexpansion(cls, f: QExpansion, atkin_lehner: Mapping[int, int] | None = None) -> "NewformData":
        if f.weight.denominator != 1:
            raise PreconditionError("newform must have integral weight")
        if any(c.denominator != 1 for c in f.coefficients):
            raise PreconditionError("newform coefficients must be integers")
        signs = dict(f.atkin_lehner)
        if atkin_lehner:
            signs.update(atkin_lehner)
        return cls(f.level, int(f.weight), tuple(int(c) for c in f.coefficients), tuple(signs.items()))

    def deligne_violations(self) -> list[int]:
        """Primes p not dividing N (within range) with |a(p)| > 2 p^(k-1/2)."""
        bad = []
        for p in range(2, self.M + 1):
            if self.level % p and is_prime(p):
                if self.coefficients[p] ** 2 > 4 * p ** (2 * self.k - 1):
                    bad.append(p)
        return bad


@dataclass(frozen=True)
class LValueResult:
    value: float
    abs_error_bound: float
    terms_used: int


def twisted_conductor(N: int, D: int) -> int:
    """Conductor of f twisted by (D/.), for squarefree N: N D^2 / gcd(N, D)."""
    return N * D * D // math.gcd(N, D)


def root_number(f: NewformData, D: int) -> int:
    """Sign of the functional equation of L(f, D, s)."""
    eps = (-1) ** f.k
    for p, w in f.atkin_lehner:
        eps *= w
    eps *= 1 if D > 0 else -1
    for p, w in f.atkin_lehner:
        eps *= w if D % p == 0 else kronecker(D, p)
    return eps


def _check_discriminant(f: NewformData, D: int) -> None:
    if not is_fundamental(D):
        raise PreconditionError(f"{D} is not a fundamental discriminant")


def _reg_upper_gamma_int(k: int, x: float) -> float:
    """Gamma(k, x) / Gamma(k) for integer k >= 1: e^-x sum_{j<k} x^j/j!."""
    term, total = 1.0, 1.0
    for j in range(1, k):
        term *= x / j
        total += term
    return math.exp(-x) * total


def tail_bound(k: int, A: float, cutoff: float, M: int) -> float:
    """Bound on the omitted part n > M of the central-value sum.

    Uses |a(n) (D/n)| n^-k <= 2 (from d(n) <= 2 sqrt n and Deligne) and
    sum_{n>M} Q(k, n x) <= (k/x) Q(k+1, M x)."""
    total = 0.0
    for x in (cutoff / A, 1.0 / (cutoff * A)):
        total += 2.0 * (k / x) * _reg_upper_gamma_int(k + 1, M * x)
    return total


def terms_needed(k: int, A: float, cutoff: float, target: float) -> int:
    M = 1
    while tail_bound(k, A, cutoff, M) > target:
        M *= 2
        if M > 10 ** 9:
            raise InsufficientCoefficientsError("tail bound does not converge")
    lo, hi = M // 2, M
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_bound(k, A, cutoff, mid) > target:
            lo = mid
        else:
            hi = mid
    return hi


def central_lvalue(
    f: NewformData, D: int, target_abs_err: float = 1e-10, cutoff: float = 1.0
) -> LValueResult:
    """L(f, D, k) = sum a(n) (D/n) n^-k, at the center, with a certified error bound.

    The completed function uses A = sqrt(conductor)/(2 pi); `cutoff` moves the
    split point of the Mellin integral (the value is independent of it)."""
    _check_discriminant(f, D)
    k = f.k
    eps = root_number(f, D)
    A = math.sqrt(twisted_conductor(f.level, D)) / (2 * math.pi)
    M = terms_needed(k, A, cutoff, target_abs_err / 10)
    if M > f.M:
        raise InsufficientCoefficientsError(
            f"need {M} coefficients for D={D} at error {target_abs_err:g}, have {f.M}"
        )
    x1, x2 = cutoff / A, 1.0 / (cutoff * A)
    terms = []
    for n in range(1, M + 1):
        b = f.coefficients[n] * kronecker(D, n)
        if b:
            terms.append(b / n ** k * (_reg_upper_gamma_int(k, n * x1) + eps * _reg_upper_gamma_int(k, n * x2)))
    value = math.fsum(terms)
    rounding = (4 * k + 16) * EPS * math.fsum(abs(t) for t in terms)
    err = tail_bound(k, A, cutoff, M) + rounding
    return LValueResult(value, err, M)


def completed_lfunction(f: NewformData, D: int, s, cutoff: float = 1.0, epsilon: int | None = None, dps: int = 30):
    """Lambda(f, D, s) from the incomplete-gamma expansion split at `cutoff`."""
    _check_discriminant(f, D)
    k = f.k
    eps = root_number(f, D) if epsilon is None else epsilon
    with mpmath.workdps(dps):
        s = mpmath.mpf(s)
        A = mpmath.sqrt(twisted_conductor(f.level, D)) / (2 * mpmath.pi)
        c = mpmath.mpf(cutoff)
        x_min = min(c, 1 / c) / A
        sig = max(s, 2 * k - s)
        # terms decay like Gamma(sig, n x_min); stop once far below working precision
        M = int(mpmath.ceil((dps * 2.4 + 2 * sig + 10) / x_min))
        if M > f.M:
            raise InsufficientCoefficientsError(f"need {M} coefficients, have {f.M}")
        total = mpmath.mpf(0)
        for n in range(1, M + 1):
            b = f.coefficients[n] * kronecker(D, n)
            if not b:
                continue
            r = A / n
            total += b * (r ** s * mpmath.gammainc(s, n * c / A) + eps * r ** (2 * k - s) * mpmath.gammainc(2 * k - s, n / (c * A)))
        return total


def functional_equation_residual(
    f: NewformData, D: int, s: float, cutoff: float = 1.25, epsilon: int | None = None
) -> float:
    """|Lambda(s) - eps Lambda(2k - s)| with both sides split at `cutoff`.

    For cutoff != 1 the two sides are different finite sums, so a wrong
    sign (pass `epsilon` to force one) or wrong coefficients show up here."""
    eps = root_number(f, D) if epsilon is None else epsilon
    left = completed_lfunction(f, D, s, cutoff, eps)
    right = completed_lfunction(f, D, 2 * f.k - s, cutoff, eps)
    return float(abs(left - eps * right))
