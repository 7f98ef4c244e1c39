"""Discriminant classes, sign predictions and the ratio test

    R(D) = |c(|D|)|^2 / (L(f, D, k) |D|^(k-1/2) C(S, t)),
    C(S, t) = (k-1)!/pi^k 2^(nu(N)-t) prod_{p in S} p/(p+1),

which should not depend on D within a class S."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import fundamental_discriminants, is_fundamental, is_squarefree, kronecker, prime_divisors
from .errors import KZError, PreconditionError
from .lfunctions import LValueResult, NewformData, central_lvalue, root_number
from .qseries import QExpansion, plus_space_excluded

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"


def class_of(D: int, f: NewformData) -> frozenset[int]:
    """S(D) = {p | N : (D/p) = -w_p}."""
    return frozenset(p for p, w in f.atkin_lehner if kronecker(D, p) == -w)


def t_of(D: int, f: NewformData) -> int:
    return sum(1 for p in f.primes if D % p == 0)


def sign_ok(D: int, f: NewformData, S: Iterable[int] | None = None) -> bool:
    s = len(class_of(D, f) if S is None else S)
    return (-1) ** (s + f.k) == (1 if D > 0 else -1)


def predict_vanishing(D: int, f: NewformData) -> bool:
    """True iff (-1)^(s+k) != sgn(D), s = |S(D)|: the central value must vanish."""
    if not is_fundamental(D):
        raise PreconditionError(f"{D} is not a fundamental discriminant")
    return not sign_ok(D, f)


def kz_constant(f_or_level, S: Iterable[int], t: int, k: int | None = None) -> tuple[Fraction, int]:
    """(rational r, e) with constant = r * pi^e; accepts a NewformData or (level, k)."""
    if isinstance(f_or_level, NewformData):
        N, k = f_or_level.level, f_or_level.k
    else:
        N = f_or_level
        if k is None:
            raise ValueError("k is required when passing a bare level")
    primes = prime_divisors(N) if N > 1 else []
    S = set(S)
    if not S <= set(primes):
        raise PreconditionError(f"class {sorted(S)} is not a set of primes dividing {N}")
    r = Fraction(math.factorial(k - 1)) * Fraction(2) ** (len(primes) - t)
    for p in S:
        r *= Fraction(p, p + 1)
    return r, -k


def kz_constant_float(f: NewformData, S: Iterable[int], t: int) -> float:
    r, e = kz_constant(f, S, t)
    return float(r) * math.pi ** e


@dataclass
class DiscriminantRecord:
    D: int
    S: frozenset[int]
    t: int
    sign_ok: bool
    lvalue: LValueResult | None
    coeff_sq: Fraction | None
    ratio: float | None = None
    status: str = "ok"
    reason: str = ""

    @property
    def s(self) -> int:
        return len(self.S)


@dataclass
class ConstancyReport:
    records: list[DiscriminantRecord] = field(default_factory=list)
    ratio_mean: float | None = None
    max_rel_deviation: float | None = None
    skipped: list[tuple[int, str]] = field(default_factory=list)
    status: str = INCONCLUSIVE
    checks: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def overall(self) -> str:
        states = [c[1] for c in self.checks] + [self.status]
        if FAIL in states:
            return FAIL
        if self.status == INCONCLUSIVE:
            return INCONCLUSIVE
        return PASS


def lvalue_is_zero(res: LValueResult) -> bool:
    return abs(res.value) <= 10 * res.abs_error_bound


def make_record(f: NewformData, g: QExpansion, D: int, target_abs_err: float = 1e-10) -> DiscriminantRecord:
    S, t = class_of(D, f), t_of(D, f)
    ok = sign_ok(D, f, S)
    lv = central_lvalue(f, D, target_abs_err)
    c = g[abs(D)]
    rec = DiscriminantRecord(D, S, t, ok, lv, c * c)
    if not ok:
        rec.status, rec.reason = "vanishing", "sign forces L = 0"
        return rec
    if lvalue_is_zero(lv):
        rec.status, rec.reason = "undefined", "L-value indistinguishable from 0"
        return rec
    const = kz_constant_float(f, S, t)
    rec.ratio = float(c * c) / (lv.value * abs(D) ** (f.k - 0.5) * const)
    if c == 0:
        rec.status, rec.reason = "anomaly", "c(|D|) = 0 while L != 0"
    return rec


def kz_ratio(f: NewformData, g: QExpansion, D: int, target_abs_err: float = 1e-10) -> float | None:
    """R(D), or None when the sign is wrong or L is numerically zero."""
    return make_record(f, g, D, target_abs_err).ratio


def _summarize(records: Sequence[DiscriminantRecord], tol: float) -> tuple[float | None, float | None, str]:
    defined = [r.ratio for r in records if r.ratio is not None and r.status == "ok"]
    if len(defined) < 2:
        return (defined[0] if defined else None), None, INCONCLUSIVE
    mean = math.fsum(defined) / len(defined)
    dev = max(abs(x - mean) for x in defined) / abs(mean)
    return mean, dev, PASS if dev <= tol else FAIL


def constancy_check(
    f: NewformData, g: QExpansion, Ds: Sequence[int], tol: float = 1e-6, target_abs_err: float = 1e-10
) -> ConstancyReport:
    records = [make_record(f, g, D, target_abs_err) for D in Ds]
    rep = ConstancyReport(records)
    rep.skipped = [(r.D, r.reason) for r in records if r.ratio is None or r.status != "ok"]
    rep.ratio_mean, rep.max_rel_deviation, rep.status = _summarize(records, tol)
    return rep


def two_discriminant_check(f: NewformData, g: QExpansion, D1: int, D2: int, target_abs_err: float = 1e-10) -> float:
    """|R(D1) - R(D2)| / max(R(D1), R(D2)) for two discriminants of one class."""
    if class_of(D1, f) != class_of(D2, f) or (D1 > 0) != (D2 > 0):
        raise PreconditionError(f"{D1} and {D2} lie in different classes")
    r1, r2 = kz_ratio(f, g, D1, target_abs_err), kz_ratio(f, g, D2, target_abs_err)
    if r1 is None or r2 is None:
        raise KZError("ratio undefined for one of the discriminants")
    return abs(r1 - r2) / max(abs(r1), abs(r2))


def ramanujan_scan(g: QExpansion, k: int, n_max: int) -> tuple[float, int]:
    """max over squarefree n <= n_max of |c(n)| n^-(k/2 - 1/4), with the maximizing n."""
    best, arg = 0.0, 1
    for n in range(1, min(n_max, g.precision) + 1):
        if not is_squarefree(n):
            continue
        val = abs(float(g[n])) * n ** -(k / 2 - 0.25)
        if val > best:
            best, arg = val, n
    return best, arg


def kohnen_condition_violations(g: QExpansion, k: int) -> list[int]:
    return [n for n in range(g.precision + 1) if plus_space_excluded(n, k) and g[n] != 0]


def verify_report(
    f: NewformData,
    g: QExpansion,
    d_min: int,
    d_max: int,
    tol: float = 1e-6,
    declared_class: Iterable[int] = (),
    target_abs_err: float = 1e-10,
) -> ConstancyReport:
    """Run every check for discriminants in [d_min, d_max] against the form g,
    declared to be the form attached to the class `declared_class`."""
    k = f.k
    Sg = frozenset(declared_class)
    Ds = [D for D in fundamental_discriminants(d_min, d_max) if abs(D) <= g.precision]
    records = [make_record(f, g, D, target_abs_err) for D in Ds]
    rep = ConstancyReport(records)
    checks = rep.checks
    if g.weight != Fraction(2 * k + 1, 2):
        checks.append(("weight", FAIL, f"g has weight {g.weight}, expected {k}+1/2"))
    parity = k + len(Sg)
    bad = kohnen_condition_violations(g, parity)
    checks.append(("kohnen-condition", FAIL if bad else PASS, f"violations at n={bad[:5]}" if bad else ""))
    checks.append(("cuspidal", PASS if g[0] == 0 else FAIL, "" if g[0] == 0 else f"c(0) = {g[0]}"))
    # coefficients at positive fundamental D whose signed twist lies outside the class must vanish
    top = min(max(abs(d_min), abs(d_max)), g.precision)
    for D in fundamental_discriminants(1, top):
        Dp = (-1) ** parity * D
        outside = not is_fundamental(Dp) or class_of(Dp, f) != Sg
        if outside and g[D] != 0:
            checks.append((f"out-of-class D={D}", FAIL, f"c({D}) = {g[D]} but {Dp} is not in the declared class"))
    for r in records:
        rn = root_number(f, r.D)
        if (rn == -1) != (not r.sign_ok):
            checks.append((f"root-number D={r.D}", FAIL, "sign rule disagrees with root number"))
        if not r.sign_ok:
            zero = lvalue_is_zero(r.lvalue)
            checks.append((f"vanishing D={r.D}", PASS if zero else FAIL, f"L = {r.lvalue.value:.15g}"))
        if r.status == "anomaly" and r.S == Sg:
            checks.append((f"anomaly D={r.D}", FAIL, "c(|D|) = 0 while L != 0"))
    in_class_records = [r for r in records if r.S == Sg and r.sign_ok]
    rep.skipped = [(r.D, r.reason or "outside declared class") for r in records if r not in in_class_records or r.ratio is None]
    rep.ratio_mean, rep.max_rel_deviation, rep.status = _summarize(in_class_records, tol)
    return rep


def _fmt(x) -> str:
    if x is None:
        return "undefined"
    if isinstance(x, Fraction):
        return str(x)
    return format(x, ".15g")


def _fmt_set(S) -> str:
    return "{" + ",".join(str(p) for p in sorted(S)) + "}"


def report_kv(rep: ConstancyReport) -> str:
    lines = []
    for r in rep.records:
        lines.append(
            f"D={r.D} S={_fmt_set(r.S)} t={r.t} sign_ok={int(r.sign_ok)} "
            f"L={_fmt(r.lvalue.value if r.lvalue else None)} "
            f"L_err={_fmt(r.lvalue.abs_error_bound if r.lvalue else None)} "
            f"c2={_fmt(r.coeff_sq)} R={_fmt(r.ratio)} status={r.status}"
        )
    for name, state, detail in rep.checks:
        lines.append(f"check={name.replace(' ', '_')} status={state}" + (f" detail={detail!r}" if detail else ""))
    lines.append(
        f"summary ratio_mean={_fmt(rep.ratio_mean)} max_rel_deviation={_fmt(rep.max_rel_deviation)} "
        f"constancy={rep.status} overall={rep.overall}"
    )
    return "\n".join(lines) + "\n"


def report_text(rep: ConstancyReport) -> str:
    head = f"{'D':>6} {'S':>10} {'t':>2} {'sign':>4} {'L(f,D,k)':>24} {'|c(|D|)|^2':>22} {'R(D)':>24}  status"
    lines = [head, "-" * len(head)]
    for r in rep.records:
        lines.append(
            f"{r.D:>6} {_fmt_set(r.S):>10} {r.t:>2} {('ok' if r.sign_ok else 'no'):>4} "
            f"{_fmt(r.lvalue.value if r.lvalue else None):>24} {_fmt(r.coeff_sq):>22} "
            f"{_fmt(r.ratio):>24}  {r.status}"
        )
    lines.append("")
    for name, state, detail in rep.checks:
        lines.append(f"{state:<12} {name}" + (f"  ({detail})" if detail else ""))
    lines.append(f"{rep.status:<12} ratio constancy: mean={_fmt(rep.ratio_mean)} max_rel_dev={_fmt(rep.max_rel_deviation)}")
    lines.append(f"overall: {rep.overall}")
    return "\n".join(lines) + "\n"
