"""Exact truncated q-expansions and the constructors for the forms we need:
eta quotients, theta, the weight-2 Eisenstein series on Gamma0(4), level-4
plus-space bases, Hecke operators and the Shimura lift."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import (
    DirichletCharacterSpec,
    is_fundamental,
    is_prime,
    kronecker,
    lcm,
    quadratic_character,
    squarefree_decompose,
    trivial_character,
)
from .errors import (
    ConfigurationError,
    FormatError,
    PrecisionError,
    PreconditionError,
    UnderdeterminedError,
    WeightMismatchError,
)

DEFAULT_PRECISION = 200


@dataclass(frozen=True)
class QExpansion:
    """sum_{n=0}^{precision} c(n) q^n with exact rational coefficients.

    `character` None means trivial. `atkin_lehner` carries optional
    `al <p> <sign>` header data through file round trips."""

    coefficients: tuple[Fraction, ...]
    weight: Fraction = Fraction(0)
    level: int = 1
    character: DirichletCharacterSpec | None = None
    cuspidal: bool = False
    atkin_lehner: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        coeffs = tuple(c if isinstance(c, Fraction) else Fraction(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("a q-expansion needs at least the constant term")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "weight", Fraction(self.weight))
        if self.character is not None and self.character.is_trivial():
            object.__setattr__(self, "character", None)
        if self.cuspidal and coeffs[0] != 0:
            raise ValueError("cuspidal form with nonzero constant term")

    @property
    def precision(self) -> int:
        return len(self.coefficients) - 1

    @property
    def half_integral(self) -> bool:
        return self.weight.denominator == 2

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n > self.precision:
            raise PrecisionError(f"coefficient {n} beyond precision {self.precision}")
        return self.coefficients[n]

    def __len__(self) -> int:
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def first_nonzero(self) -> int | None:
        for n, c in enumerate(self.coefficients):
            if c:
                return n
        return None

    def truncate(self, N: int) -> "QExpansion":
        if N > self.precision:
            raise PrecisionError(f"cannot extend precision {self.precision} to {N}")
        return self.replace(coefficients=self.coefficients[: N + 1])

    def replace(self, **kw) -> "QExpansion":
        d = dict(
            coefficients=self.coefficients,
            weight=self.weight,
            level=self.level,
            character=self.character,
            cuspidal=self.cuspidal,
            atkin_lehner=self.atkin_lehner,
        )
        d.update(kw)
        return QExpansion(**d)

    def __add__(self, other: "QExpansion") -> "QExpansion":
        return add(self, other)

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return add(self, scale(other, -1))

    def __neg__(self) -> "QExpansion":
        return scale(self, -1)

    def __mul__(self, other) -> "QExpansion":
        if isinstance(other, QExpansion):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QExpansion":
        return power(self, e)


def zero_series(N: int, weight=0, level: int = 1) -> QExpansion:
    return QExpansion((Fraction(0),) * (N + 1), Fraction(weight), level)


def one_series(N: int) -> QExpansion:
    return QExpansion((Fraction(1),) + (Fraction(0),) * N)


def _chars_compatible(a: DirichletCharacterSpec | None, b: DirichletCharacterSpec | None) -> bool:
    if a is None or b is None:
        return a is b
    m = lcm(a.modulus, b.modulus)
    return all(a.angle(n) == b.angle(n) for n in range(1, m + 1) if math.gcd(n, m) == 1)


def add(a: QExpansion, b: QExpansion) -> QExpansion:
    if a.weight != b.weight:
        raise WeightMismatchError(f"cannot add weight {a.weight} and {b.weight}")
    if not _chars_compatible(a.character, b.character):
        raise WeightMismatchError("cannot add forms with different characters")
    N = min(a.precision, b.precision)
    coeffs = tuple(x + y for x, y in zip(a.coefficients[: N + 1], b.coefficients[: N + 1]))
    return QExpansion(
        coeffs,
        a.weight,
        lcm(a.level, b.level),
        a.character,
        a.cuspidal and b.cuspidal,
    )


def scale(a: QExpansion, lam) -> QExpansion:
    lam = Fraction(lam)
    return a.replace(coefficients=tuple(lam * c for c in a.coefficients), atkin_lehner=())


def _common_denominator(xs: Sequence[Fraction]) -> int:
    d = 1
    for x in xs:
        if x.denominator != 1:
            d = d * x.denominator // math.gcd(d, x.denominator)
    return d


def _pack(cs: Sequence[int], width: int) -> int:
    """sum cs[i] * 2^(width*i) for nonnegative cs, via hex concatenation."""
    digits = width // 4
    return int("".join(format(c, f"0{digits}x") for c in reversed(cs)) or "0", 16)


def int_poly_mul(a: Sequence[int], b: Sequence[int], n_out: int) -> list[int]:
    """First n_out coefficients of the product of two integer polynomials,
    by Kronecker substitution into one big-integer multiplication."""
    if n_out <= 0:
        return []
    a = list(a[:n_out])
    b = list(b[:n_out])
    if not a or not b or not any(a) or not any(b):
        return [0] * n_out
    bound = max(abs(x) for x in a) * max(abs(x) for x in b) * min(len(a), len(b))
    width = bound.bit_length() + 2
    width += -width % 4
    half = 1 << (width - 1)
    a_pos = _pack([x if x > 0 else 0 for x in a], width)
    a_neg = _pack([-x if x < 0 else 0 for x in a], width)
    b_pos = _pack([x if x > 0 else 0 for x in b], width)
    b_neg = _pack([-x if x < 0 else 0 for x in b], width)
    prod = (a_pos - a_neg) * (b_pos - b_neg)
    # shift every digit into [0, 2^width) so the hex digits can be sliced
    n_total = len(a) + len(b) - 1
    offset = _pack([half] * n_total, width)
    hexs = format(prod + offset, "x")
    digits = width // 4
    hexs = hexs.rjust(digits * n_total, "0")
    out = []
    for i in range(min(n_out, n_total)):
        chunk = hexs[len(hexs) - digits * (i + 1): len(hexs) - digits * i]
        out.append(int(chunk, 16) - half)
    out.extend([0] * (n_out - len(out)))
    return out


def _rational_mul(a: Sequence[Fraction], b: Sequence[Fraction], n_out: int) -> list[Fraction]:
    da, db = _common_denominator(a), _common_denominator(b)
    ia = [int(x * da) for x in a]
    ib = [int(x * db) for x in b]
    d = da * db
    return [Fraction(c, d) for c in int_poly_mul(ia, ib, n_out)]


def _mul_characters(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a * b


def mul(a: QExpansion, b: QExpansion) -> QExpansion:
    N = min(a.precision, b.precision)
    coeffs = _rational_mul(a.coefficients, b.coefficients, N + 1)
    return QExpansion(
        tuple(coeffs),
        a.weight + b.weight,
        lcm(a.level, b.level),
        _mul_characters(a.character, b.character),
        a.cuspidal or b.cuspidal,
    )


def power(a: QExpansion, e: int) -> QExpansion:
    if e < 0:
        raise ValueError("negative powers need series_inverse")
    result = one_series(a.precision).replace(level=a.level)
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


# --- eta quotients -------------------------------------------------------


@dataclass(frozen=True)
class EtaQuotientSpec:
    """prod eta(delta z)^r over (delta, r) pairs."""

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[int, int] = {}
        for d, r in self.factors:
            if d < 1:
                raise PreconditionError(f"eta scale must be positive, got {d}")
            merged[d] = merged.get(d, 0) + r
        object.__setattr__(self, "factors", tuple(sorted((d, r) for d, r in merged.items() if r)))
        if self.order_at_infinity_24 % 24:
            raise PreconditionError(
                f"sum of delta*r = {self.order_at_infinity_24} is not divisible by 24"
            )

    @property
    def order_at_infinity_24(self) -> int:
        return sum(d * r for d, r in self.factors)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.factors), 2)

    @property
    def level(self) -> int:
        return lcm(*(d for d, _ in self.factors))

    @classmethod
    def parse(cls, text: str) -> "EtaQuotientSpec":
        """Parse "1^2,11^2" (scale^exponent, comma separated)."""
        factors = []
        for part in filter(None, (p.strip() for p in text.split(","))):
            d, sep, r = part.partition("^")
            try:
                factors.append((int(d), int(r) if sep else 1))
            except ValueError as exc:
                raise PreconditionError(f"bad eta factor {part!r}") from exc
        return cls(tuple(factors))


def euler_product_series(N: int) -> list[int]:
    """prod_{n>=1} (1 - q^n) up to q^N (pentagonal number theorem)."""
    out = [0] * (N + 1)
    k = 0
    while True:
        sign = -1 if k % 2 else 1
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 > N:
            break
        out[e1] += sign
        if k and e2 <= N:
            out[e2] += sign
        k += 1
    return out


def partition_series(N: int) -> list[int]:
    """prod_{n>=1} (1 - q^n)^{-1} = sum p(n) q^n via Euler's recurrence."""
    p = [0] * (N + 1)
    p[0] = 1
    for n in range(1, N + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def _int_power(base: list[int], e: int, n_out: int) -> list[int]:
    result = [1] + [0] * (n_out - 1)
    while e:
        if e & 1:
            result = int_poly_mul(result, base, n_out)
        e >>= 1
        if e:
            base = int_poly_mul(base, base, n_out)
    return result


def _eta_character(spec: EtaQuotientSpec) -> DirichletCharacterSpec | None:
    """Quadratic character n -> ((-1)^k s / n), s = prod delta^r, for integral weight k."""
    if spec.weight.denominator != 1:
        return None
    s = Fraction(1)
    for d, r in spec.factors:
        s *= Fraction(d) ** r
    val = s * (-1) ** int(spec.weight)
    sign = 1 if val > 0 else -1
    sq_num, _ = squarefree_decompose(abs(val.numerator))
    sq_den, _ = squarefree_decompose(abs(val.denominator))
    core = sign * sq_num * sq_den
    if core == 1:
        return None
    disc = core if core % 4 == 1 else 4 * core
    return quadratic_character(disc)


def eta_quotient(spec: EtaQuotientSpec, N: int = DEFAULT_PRECISION) -> QExpansion:
    """Exact expansion of prod eta(delta z)^r up to q^N."""
    offset = spec.order_at_infinity_24 // 24
    if offset < 0:
        raise PreconditionError("eta quotient has a pole at infinity")
    inner = N - offset
    series = [1] + [0] * max(inner, 0)
    if inner >= 0:
        for d, r in spec.factors:
            m = inner // d
            base = euler_product_series(m) if r > 0 else partition_series(m)
            part = _int_power(base, abs(r), m + 1)
            spread = [0] * (inner + 1)
            for i, c in enumerate(part):
                spread[i * d] = c
            series = int_poly_mul(series, spread, inner + 1)
    coeffs = ([0] * offset + series)[: N + 1]
    return QExpansion(
        tuple(Fraction(c) for c in coeffs),
        spec.weight,
        spec.level,
        _eta_character(spec),
        cuspidal=offset > 0,
    )


def delta_series(N: int = DEFAULT_PRECISION) -> QExpansion:
    return eta_quotient(EtaQuotientSpec(((1, 24),)), N)


def theta_series(N: int = DEFAULT_PRECISION) -> QExpansion:
    """sum_{n in Z} q^{n^2}, weight 1/2 on Gamma0(4)."""
    c = [0] * (N + 1)
    c[0] = 1
    m = 1
    while m * m <= N:
        c[m * m] = 2
        m += 1
    return QExpansion(tuple(Fraction(x) for x in c), Fraction(1, 2), 4)


def divisor_sigma(N: int, power: int = 1) -> list[int]:
    """sigma_power(n) for 0 <= n <= N (index 0 is 0)."""
    s = [0] * (N + 1)
    for d in range(1, N + 1):
        dp = d ** power
        for m in range(d, N + 1, d):
            s[m] += dp
    return s


def eisenstein_F(N: int = DEFAULT_PRECISION) -> QExpansion:
    """F = sum_{n odd} sigma_1(n) q^n, weight 2 on Gamma0(4)."""
    sig = divisor_sigma(N)
    c = [sig[n] if n % 2 else 0 for n in range(N + 1)]
    return QExpansion(tuple(Fraction(x) for x in c), Fraction(2), 4)


# --- exact linear algebra ------------------------------------------------


def _row_reduce(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    red, pivots = _row_reduce(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def rank(rows: list[list[Fraction]], ncols: int) -> int:
    return len(_row_reduce(rows, ncols)[1]) if rows else 0


def echelon_forms(forms: Sequence[QExpansion]) -> list[QExpansion]:
    """Row-reduce forms by their coefficient vectors so that leading indices
    are distinct and each leading coefficient is 1."""
    if not forms:
        return []
    N = min(f.precision for f in forms)
    red, _ = _row_reduce([list(f.coefficients[: N + 1]) for f in forms], N + 1)
    return [forms[0].replace(coefficients=tuple(r), atkin_lehner=()) for r in red]


def plus_space_excluded(n: int, k: int) -> bool:
    """True when the plus condition forces c(n) = 0, i.e. (-1)^k n = 2, 3 mod 4."""
    return ((-1) ** k * n) % 4 in (2, 3)


def level4_generators(weight2: int, N: int) -> list[QExpansion]:
    """theta^{weight2 - 4j} F^j for 0 <= j <= weight2/4; weight2 = twice the weight."""
    th, F = theta_series(N), eisenstein_F(N)
    gens = []
    for j in range(weight2 // 4 + 1):
        gens.append(mul(power(th, weight2 - 4 * j), power(F, j)))
    return gens


def kohnen_plus_basis(k: int, N: int = DEFAULT_PRECISION, cuspidal: bool = True) -> list[QExpansion]:
    """Basis of the weight k+1/2 plus space on Gamma0(4) (cusp forms unless
    cuspidal=False), each vector normalized with leading coefficient 1."""
    if k < 1:
        raise PreconditionError("k must be positive")
    if N < 4 * k:
        raise UnderdeterminedError(f"precision {N} < 4k = {4 * k}: linear system not determined")
    gens = level4_generators(2 * k + 1, N)
    m = len(gens)
    constrained = [n for n in range(N + 1) if plus_space_excluded(n, k) or (cuspidal and n == 0)]
    rows = [[g.coefficients[n] for g in gens] for n in constrained]
    full_rank = rank(rows, m)
    cut = [r for n, r in zip(constrained, rows) if n <= (3 * N) // 4]
    if rank(cut, m) != full_rank:
        raise UnderdeterminedError(
            f"rank of plus-space constraints still growing near precision {N}"
        )
    forms = []
    for v in nullspace(rows, m):
        coeffs = [sum(v[j] * gens[j].coefficients[n] for j in range(m)) for n in range(N + 1)]
        forms.append(QExpansion(tuple(coeffs), Fraction(2 * k + 1, 2), 4))
    forms = echelon_forms(forms)
    return [f.replace(cuspidal=cuspidal) for f in forms]


# --- Hecke operators and the Shimura lift --------------------------------


def hecke_Tp(f: QExpansion, p: int, k: int | None = None) -> QExpansion:
    """T_p on an integral weight 2k form with trivial character: b(n) = c(pn) + p^{2k-1} c(n/p).

    For p dividing the level the second term is dropped (the U_p operator)."""
    if k is None:
        if f.weight.denominator != 1 or f.weight.numerator % 2:
            raise PreconditionError("hecke_Tp needs even integral weight")
        k = f.weight.numerator // 2
    if f.weight != 2 * k:
        raise PreconditionError(f"weight {f.weight} is not 2k = {2 * k}")
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    N_out = f.precision // p
    if N_out < 1:
        raise PrecisionError(f"precision {f.precision} too small for T_{p}")
    pk = p ** (2 * k - 1) if f.level % p else 0
    c = f.coefficients
    coeffs = tuple(c[p * n] + (pk * c[n // p] if n % p == 0 else 0) for n in range(N_out + 1))
    return f.replace(coefficients=coeffs, atkin_lehner=())


def shimura_lift(g: QExpansion, D0: int, k: int, N: int) -> QExpansion:
    """A(n) = sum_{d | n} (D/d) d^{k-1} c(|D| n^2/d^2) with D = (-1)^k |D0|."""
    D = (-1) ** k * abs(D0)
    if not is_fundamental(D):
        raise PreconditionError(f"(-1)^k |D0| = {D} is not a fundamental discriminant")
    if g.precision < abs(D) * N * N:
        raise PrecisionError(f"need precision {abs(D) * N * N}, have {g.precision}")
    if g.coefficients[0] != 0:
        raise PreconditionError("lift is only implemented for cusp forms")
    c = g.coefficients
    A = [Fraction(0)] * (N + 1)
    for n in range(1, N + 1):
        total = Fraction(0)
        for d in range(1, n + 1):
            if n % d == 0:
                total += kronecker(D, d) * d ** (k - 1) * c[abs(D) * (n // d) ** 2]
        A[n] = total
    return QExpansion(tuple(A), Fraction(2 * k), max(g.level // 4, 1), cuspidal=True)


def proportionality(a: QExpansion, b: QExpansion, upto: int | None = None) -> Fraction | None:
    """Exact lambda with a = lambda * b on indices <= upto, or None if none exists."""
    N = min(a.precision, b.precision) if upto is None else upto
    lam = None
    for n in range(N + 1):
        x, y = a[n], b[n]
        if y == 0:
            if x != 0:
                return None
            continue
        if lam is None:
            lam = x / y
        elif x != lam * y:
            return None
    return lam if lam is not None else Fraction(0)


# --- text format ---------------------------------------------------------


def serialize(form: QExpansion) -> str:
    w = form.weight
    lines = [
        f"weight {w.numerator}/{w.denominator}",
        f"level {form.level}",
        f"character {(form.character or trivial_character(1)).to_text()}",
        f"precision {form.precision}",
    ]
    if form.cuspidal:
        lines.append("cuspidal 1")
    for p, s in form.atkin_lehner:
        lines.append(f"al {p} {s:+d}")
    for n, c in enumerate(form.coefficients):
        if c:
            lines.append(f"{n} {c}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> QExpansion:
    header: dict[str, str] = {}
    al: list[tuple[int, int]] = []
    coeffs: dict[int, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key in ("weight", "level", "character", "precision", "cuspidal"):
            if key in header:
                raise FormatError(f"line {lineno}: duplicate header {key}")
            header[key] = rest
        elif key == "al":
            try:
                p_s, s_s = rest.split()
                al.append((int(p_s), int(s_s)))
            except ValueError as exc:
                raise FormatError(f"line {lineno}: bad al line {raw!r}") from exc
            if al[-1][1] not in (-1, 1):
                raise FormatError(f"line {lineno}: Atkin-Lehner sign must be +-1")
        else:
            try:
                n = int(key)
                c = Fraction(rest)
            except (ValueError, ZeroDivisionError) as exc:
                raise FormatError(f"line {lineno}: bad coefficient line {raw!r}") from exc
            if n < 0 or n in coeffs or "." in rest or "e" in rest.lower():
                raise FormatError(f"line {lineno}: bad or repeated index/token in {raw!r}")
            coeffs[n] = c
    for key in ("weight", "level", "precision"):
        if key not in header:
            raise FormatError(f"missing header field {key!r}")
    try:
        weight = Fraction(header["weight"])
        level = int(header["level"])
        prec = int(header["precision"])
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"malformed header: {exc}") from exc
    if weight.denominator not in (1, 2) or level < 1 or prec < 0:
        raise FormatError("weight must be integral or half-integral; level, precision positive")
    character = None
    if "character" in header:
        try:
            character = DirichletCharacterSpec.from_text(header["character"])
        except ConfigurationError as exc:
            raise FormatError(str(exc)) from exc
    if coeffs and max(coeffs) > prec:
        raise FormatError(f"coefficient index {max(coeffs)} beyond precision {prec}")
    c = [Fraction(0)] * (prec + 1)
    for n, v in coeffs.items():
        c[n] = v
    cusp = header.get("cuspidal", "0").strip() in ("1", "true", "yes")
    try:
        return QExpansion(tuple(c), weight, level, character, cusp, tuple(sorted(al)))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def read_qexpansion(path) -> QExpansion:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write_qexpansion(form: QExpansion, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(form))
