"""Closed-form local constants e(phi, psi), e(phi~, psi^D) at odd primes, at 2
and at infinity, and the quotient identities relating them to local
L-factors at the center.

Square classes of units are encoded by Legendre symbols: `tau` is the
symbol of the unit tau, `unit_symbol` is chi_D(varpi) for a unit D."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError

KINDS = ("unramified_principal", "complementary", "special", "weil_odd", "arch_discrete")


@dataclass(frozen=True)
class LocalRepSpec:
    kind: str
    q: int | None = None
    s: complex = 0
    tau: int = 1
    k: int | None = None
    n: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown representation kind {self.kind!r}")
        if self.kind == "arch_discrete":
            if not (isinstance(self.k, int) and self.k >= 1 and isinstance(self.n, int) and self.n >= 1):
                raise PreconditionError("archimedean discrete series needs integers k >= 1, n >= 1")
            return
        if self.q is None or self.q < 3 or self.q % 2 == 0:
            raise PreconditionError(f"residue field size must be odd, got {self.q}")
        if self.tau not in (1, -1):
            raise PreconditionError("tau is a square-class symbol +-1")
        s = complex(self.s)
        if self.kind == "unramified_principal" and abs(s.real) > 1e-15:
            raise PreconditionError("unitary unramified principal series needs purely imaginary s")
        if self.kind == "complementary" and (abs(s.imag) > 1e-15 or not abs(s.real) < 0.5):
            raise PreconditionError("complementary series needs real s with |s| < 1/2")


@dataclass(frozen=True)
class DClassLocal:
    """valuation 0: D a unit with chi_D(varpi) = unit_symbol; valuation 1: D prime.
    At infinity only D (a positive integer) is used."""

    valuation: int = 0
    unit_symbol: int = 1
    D: int | None = None

    def __post_init__(self) -> None:
        if self.valuation not in (0, 1):
            raise PreconditionError("D must be a unit or generate the prime ideal")
        if self.unit_symbol not in (1, -1):
            raise PreconditionError("unit_symbol is +-1")

    def abs_value(self, q: int) -> float:
        return q ** -self.valuation


def _check_compat(spec: LocalRepSpec, d: DClassLocal) -> None:
    if spec.kind == "special" and d.valuation == 0 and spec.tau * d.unit_symbol != -1:
        raise PreconditionError("special case needs tau D nonsquare")
    if spec.kind == "weil_odd" and not (d.valuation == 0 and spec.tau * d.unit_symbol == 1):
        raise PreconditionError("odd Weil case needs tau D a square unit")


def e_phi(spec: LocalRepSpec) -> float:
    q, s = spec.q, complex(spec.s)
    if spec.kind == "unramified_principal":
        return (1 + 1 / q) / abs(1 - q ** (-2 * s - 1)) ** 2
    if spec.kind == "complementary":
        return ((1 + 1 / q) / ((1 - q ** (-2 * s - 1)) * (1 - q ** (2 * s - 1)))).real
    if spec.kind in ("special", "weil_odd"):
        return 1 / (1 + 1 / q)
    return math.exp(log_e_phi_arch(spec.k, spec.n))


def e_phitilde(spec: LocalRepSpec, d: DClassLocal) -> float:
    if spec.kind == "arch_discrete":
        return math.exp(log_e_phitilde_arch(spec.k, spec.n, d.D))
    _check_compat(spec, d)
    q, s = spec.q, complex(spec.s)
    absD_inv = q ** d.valuation
    if spec.kind == "unramified_principal":
        if d.valuation == 0:
            return (1 + 1 / q) / abs(1 + q ** (-0.5 - s) * d.unit_symbol) ** 2
        return absD_inv * (1 + 1 / q) / abs(1 - q ** (-2 * s - 1)) ** 2
    if spec.kind == "complementary":
        if d.valuation == 0:
            chi = d.unit_symbol * spec.tau
            return ((1 + 1 / q) / ((1 + q ** (-0.5 - s) * chi) * (1 + q ** (s - 0.5) * chi))).real
        return (absD_inv * (1 + 1 / q) / ((1 - q ** (2 * s - 1)) * (1 - q ** (-1 - 2 * s)))).real
    if spec.kind == "special":
        return 0.5 if d.valuation == 0 else q / (1 + 1 / q)
    return (1 - 1 / q) / 2  # weil_odd


def local_lfactor(spec: LocalRepSpec, d: DClassLocal) -> float:
    """L(pi_v x chi_D, 1/2) from the standard tables of local factors."""
    if spec.kind == "arch_discrete":
        raise PreconditionError("no archimedean L-factor in the quotient identity")
    _check_compat(spec, d)
    q, s = spec.q, complex(spec.s)
    if d.valuation == 1:
        return 1.0  # ramified twist
    if spec.kind in ("unramified_principal", "complementary"):
        # Satake parameters mu(varpi) = tau q^-s and its inverse, twisted by chi_D
        chi = d.unit_symbol * (spec.tau if spec.kind == "complementary" else 1)
        val = 1 / ((1 - chi * q ** (-0.5 - s)) * (1 - chi * q ** (-0.5 + s)))
        return val.real
    # special representation sigma^tau twisted by an unramified chi_D: (1 - chi q^-1)^-1
    return 1 / (1 - spec.tau * d.unit_symbol / q)


def quotient_multiple(spec: LocalRepSpec, d: DClassLocal) -> float:
    """Factor c with e(phi)/e(phi~) = c |D|_v L(pi_v x chi_D, 1/2)."""
    if spec.kind in ("unramified_principal", "complementary"):
        return 1.0
    if spec.kind == "special":
        return 2.0 if d.valuation == 0 else 1.0
    if spec.kind == "weil_odd":
        return 2 / (1 + 1 / spec.q)
    raise PreconditionError("use arch_quotient_check at infinity")


def quotient_check(spec: LocalRepSpec, d: DClassLocal) -> float:
    """|e(phi)/e(phi~) - c |D|_v L| (absolute), or the log-space residual at infinity."""
    if spec.kind == "arch_discrete":
        return arch_quotient_check(spec.k, spec.n, d.D)
    lhs = e_phi(spec) / e_phitilde(spec, d)
    rhs = quotient_multiple(spec, d) * d.abs_value(spec.q) * local_lfactor(spec, d)
    return abs(lhs - rhs)


# --- infinity -------------------------------------------------------------


def log_e_phi_arch(k: int, n: int) -> float:
    """log of e^{4 pi n} (4 pi n)^{-2k} Gamma(2k)."""
    return 4 * math.pi * n - 2 * k * math.log(4 * math.pi * n) + math.lgamma(2 * k)


def log_e_phitilde_arch(k: int, n: int, D: int) -> float:
    """log of 2 e^{4 pi n D} (4 pi n D)^{-(k+1/2)} Gamma(k+1/2)."""
    if D is None or D < 1:
        raise PreconditionError("archimedean case needs a positive integer D")
    x = 4 * math.pi * n * D
    return math.log(2) + x - (k + 0.5) * math.log(x) + math.lgamma(k + 0.5)


def log_arch_quotient_closed(k: int, n: int, D: int) -> float:
    """log of (1/2) e^{4 pi n (1-D)} D^{k+1/2} n^{1/2-k} pi^-k (k-1)!."""
    return (
        -math.log(2)
        + 4 * math.pi * n * (1 - D)
        + (k + 0.5) * math.log(D)
        + (0.5 - k) * math.log(n)
        - k * math.log(math.pi)
        + math.lgamma(k)
    )


def arch_quotient_check(k: int, n: int, D: int) -> float:
    """|log(e(phi)/e(phi~)) - log(closed form)|."""
    direct = log_e_phi_arch(k, n) - log_e_phitilde_arch(k, n, D)
    return abs(direct - log_arch_quotient_closed(k, n, D))


def gamma_duplication_check(k: int) -> float:
    """|Gamma(2k) - pi^-1/2 2^(2k-1) Gamma(k) Gamma(k+1/2)| / Gamma(2k)."""
    if not 1 <= k <= 20:
        raise PreconditionError("k must be in 1..20")
    lhs = math.gamma(2 * k)
    rhs = math.pi ** -0.5 * 2.0 ** (2 * k - 1) * math.gamma(k) * math.gamma(k + 0.5)
    return abs(lhs - rhs) / lhs


# --- the place 2 ----------------------------------------------------------


def _abs2(D: int) -> Fraction:
    v = 0
    while D % 2 == 0:
        D //= 2
        v += 1
    return Fraction(1, 2 ** v)


def e2_case(D: int) -> str:
    """'unit_1mod4' for D = 1 mod 4, 'four_times_unit' for D/4 = 2, 3 mod 4."""
    if D % 4 == 1:
        return "unit_1mod4"
    if D % 4 == 0 and (D // 4) % 4 in (2, 3):
        return "four_times_unit"
    raise PreconditionError(f"{D} is not a fundamental discriminant shape at 2")


def e2_phi(r: float) -> float:
    """(3/2) |1 - 2^{-1-2ir}|^-2."""
    return 1.5 / abs(1 - 2 ** complex(-1, -2 * r)) ** 2


def e2_phitilde(r: float, D: int, chi_D_2: int = 1) -> float:
    """Unit case (3/4)|1 + chi 2^{-1/2-ir}|^-2 (chi = +1 reproduces the printed
    formula); D/4 case (3/4)|1 - 2^{-1-2ir}|^-2 |D|_2^-1."""
    if e2_case(D) == "unit_1mod4":
        return 0.75 / abs(1 + chi_D_2 * 2 ** complex(-0.5, -r)) ** 2
    return 0.75 / abs(1 - 2 ** complex(-1, -2 * r)) ** 2 / float(_abs2(D))


def e2_unramified(r: float, D: int, chi_D_2: int = 1) -> tuple[float, float]:
    """(e(phi_2, psi), e(phi~_2, psi^D)) for mu_2 = |.|^{ir}."""
    return e2_phi(r), e2_phitilde(r, D, chi_D_2)


def e2_lfactor(r: float, chi: int = 1) -> float:
    """L(pi_2 x chi, 1/2) for mu_2 = |.|^{ir} and an unramified sign chi."""
    x = chi * 2 ** complex(-0.5, -r)
    return 1 / abs(1 - x) ** 2


def e2_quotient_check(r: float, D: int, chi_D_2: int = 1) -> float:
    """Unit case: ratio vs 2|D|_2 L(pi_2 x chi, 1/2); D/4 case: ratio vs 2|D|_2."""
    lhs = e2_phi(r) / e2_phitilde(r, D, chi_D_2)
    absD = float(_abs2(D))
    rhs = 2 * absD * (e2_lfactor(r, chi_D_2) if e2_case(D) == "unit_1mod4" else 1.0)
    return abs(lhs - rhs)


# --- special representation: Whittaker values -----------------------------


def special_whittaker_table(delta_valuation: int, delta_symbol: int, Delta_valuation: int, tau: int, q: int) -> float:
    """L^{delta Delta^2}(phi~) for the special-representation vector at an odd place.

    delta is a unit (valuation 0, Legendre symbol delta_symbol) or a prime;
    |Delta| = q^-Delta_valuation."""
    if Delta_valuation < 0:
        return 0.0
    absDelta = q ** -Delta_valuation
    if delta_valuation == 0:
        return 2 * absDelta if delta_symbol * tau == -1 else 0.0
    return absDelta * (1 + 1 / q)


def _phi1_whittaker(delta_valuation: int, delta_symbol: int, Delta_valuation: int, tau: int, q: int) -> float:
    """L^z of the vector char(G'(O)); prime-delta row includes the constant 1
    coming from the integral over |x| <= 1."""
    if Delta_valuation < 0:
        return 0.0
    absDelta = q ** -Delta_valuation
    if delta_valuation == 0:
        return 1 + 1 / q + absDelta * (delta_symbol * tau / q - 1 / q)
    return 1 + 1 / q - absDelta * (1 / q + 1 / q ** 2)


def special_whittaker_via_basis(delta_valuation: int, delta_symbol: int, Delta_valuation: int, tau: int, q: int) -> float:
    """Same value from phi~ = phi1' - (q+1) phi2', where phi1' - phi2' has
    Whittaker value char(O)(z)."""
    char_O = 1.0 if Delta_valuation >= 0 else 0.0
    l1 = _phi1_whittaker(delta_valuation, delta_symbol, Delta_valuation, tau, q)
    l2 = l1 - char_O
    return l1 - (q + 1) * l2


# --- sweep ------------------------------------------------------------------

SWEEP_PRIMES = (3, 5, 7, 11, 13)


def default_grid() -> list[tuple[LocalRepSpec, DClassLocal]]:
    grid = []
    classes = (DClassLocal(0, 1), DClassLocal(0, -1), DClassLocal(1))
    for q in SWEEP_PRIMES:
        for s in (0, 0.3j, 0.7j):
            for d in classes:
                grid.append((LocalRepSpec("unramified_principal", q, s), d))
        for s in (0.1, 0.3):
            for tau in (1, -1):
                for d in classes:
                    grid.append((LocalRepSpec("complementary", q, s, tau), d))
        for tau in (1, -1):
            grid.append((LocalRepSpec("special", q, 0, tau), DClassLocal(0, -tau)))
            grid.append((LocalRepSpec("special", q, 0, tau), DClassLocal(1)))
            grid.append((LocalRepSpec("weil_odd", q, 0, tau), DClassLocal(0, tau)))
    return grid


def dclass_label(d: DClassLocal) -> str:
    if d.D is not None:
        return f"D={d.D}"
    return "prime" if d.valuation else f"unit{d.unit_symbol:+d}"


def sweep_rows() -> list[dict]:
    rows = []
    for spec, d in default_grid():
        rows.append(
            dict(
                kind=spec.kind,
                q=spec.q,
                s=complex(spec.s),
                tau=spec.tau,
                dclass=dclass_label(d),
                e_phi=e_phi(spec),
                e_phitilde=e_phitilde(spec, d),
                quotient=e_phi(spec) / e_phitilde(spec, d),
                lfactor=local_lfactor(spec, d),
                multiple=quotient_multiple(spec, d),
                residual=quotient_check(spec, d),
            )
        )
    return rows
