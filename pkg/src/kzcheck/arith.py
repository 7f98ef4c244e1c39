"""Elementary number theory: Kronecker and Hilbert symbols, discriminants,
and Dirichlet characters assembled from prime-power components."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .errors import ConfigurationError


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of |n| (n != 0)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == {n: 1}


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factorize(n).values())


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n), with the usual conventions at n = 0, -1, 2."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 == 1 and D % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi symbol (D/n)
    a = D % n if n > 1 else 0
    if n == 1:
        return result
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental(D: int) -> bool:
    """True iff D is 1 or the discriminant of a quadratic field."""
    if D == 0:
        return False
    if D == 1:
        return True
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def fundamental_discriminants(d_min: int, d_max: int) -> list[int]:
    """Fundamental discriminants in [d_min, d_max], ordered by increasing |D|
    with the positive one first at equal |D|."""
    ds = [d for d in range(d_min, d_max + 1) if d != 0 and is_fundamental(d)]
    return sorted(ds, key=lambda d: (abs(d), d < 0))


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = a * b**2 with a squarefree; returns (a, b)."""
    if n < 1:
        raise ValueError("n must be positive")
    a, b = 1, 1
    for p, e in factorize(n).items() if n > 1 else ():
        a *= p ** (e % 2)
        b *= p ** (e // 2)
    return a, b


def hilbert2(a: int, b: int) -> int:
    """2-adic Hilbert symbol (a, b)_2 for nonzero integers."""
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    alpha, beta = valuation(a, 2), valuation(b, 2)
    u, v = a >> alpha, b >> beta

    def eps(x: int) -> int:
        return ((x - 1) // 2) % 2

    def omega(x: int) -> int:
        return ((x * x - 1) // 8) % 2

    e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
    return -1 if e % 2 else 1


def primitive_root(p: int) -> int:
    """Smallest primitive root modulo the odd prime p."""
    phi = p - 1
    qs = prime_divisors(phi) if phi > 1 else []
    for g in range(2, p + 1):
        if all(pow(g, phi // q, p) != 1 for q in qs):
            return g
    raise ValueError(f"no primitive root found for {p}")


def _unit_generators(p: int, e: int) -> tuple[tuple[int, int], ...]:
    """(generator, order) pairs for (Z/p^e)^*, in a fixed order."""
    if p == 2:
        if e <= 1:
            return ()
        if e == 2:
            return ((-1, 2),)
        return ((-1, 2), (5, 2 ** (e - 2)))
    g = primitive_root(p)
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return ((g, (p - 1) * p ** (e - 1)),)


@dataclass(frozen=True)
class LocalCharacterSpec:
    """Character of (Z/p^e)^*, given by its values exp(2 pi i r) on the fixed
    generators (odd p: a primitive root; p = 2: -1 and 5). Each r is stored
    as a Fraction reduced mod 1."""

    prime: int
    exponent: int
    angles: tuple[Fraction, ...] = ()
    _table: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        p, e = self.prime, self.exponent
        if not is_prime(p) or e < 0:
            raise ConfigurationError(f"bad prime power {p}^{e}")
        gens = _unit_generators(p, e) if e > 0 else ()
        angles = tuple(Fraction(r) % 1 for r in self.angles)
        if len(angles) != len(gens):
            raise ConfigurationError(
                f"{p}^{e}: expected {len(gens)} generator values, got {len(angles)}"
            )
        for (g, order), r in zip(gens, angles):
            if (r * order).denominator != 1:
                raise ConfigurationError(f"value on generator {g} mod {p}^{e} has wrong order")
        object.__setattr__(self, "angles", angles)
        table: dict[int, Fraction] = {}
        mod = p ** e
        if not gens:
            table[1 % mod] = Fraction(0)
        elif len(gens) == 1:
            (g, order), = gens
            x = 1
            for j in range(order):
                table[x % mod] = (angles[0] * j) % 1
                x = x * g % mod
        else:
            (g1, o1), (g2, o2) = gens
            x1 = 1
            for a in range(o1):
                x = x1
                for b in range(o2):
                    table[x % mod] = (angles[0] * a + angles[1] * b) % 1
                    x = x * g2 % mod
                x1 = x1 * g1 % mod
        object.__setattr__(self, "_table", table)

    @property
    def modulus(self) -> int:
        return self.prime ** self.exponent

    def angle(self, n: int) -> Fraction | None:
        """Argument of the value at n as a fraction of a full turn, None if p | n."""
        if self.exponent > 0 and n % self.prime == 0:
            return None
        return self._table[n % self.modulus]

    def is_trivial(self) -> bool:
        return all(r == 0 for r in self.angles)


def _angle_to_value(r: Fraction) -> complex | int:
    r %= 1
    if r == 0:
        return 1
    if r == Fraction(1, 2):
        return -1
    if r == Fraction(1, 4):
        return 1j
    if r == Fraction(3, 4):
        return -1j
    return cmath.exp(2j * math.pi * r)


@dataclass(frozen=True)
class DirichletCharacterSpec:
    modulus: int
    locals: tuple[LocalCharacterSpec, ...] = ()

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ConfigurationError("modulus must be positive")
        object.__setattr__(self, "locals", tuple(sorted(self.locals, key=lambda c: c.prime)))
        have = {c.prime: c.exponent for c in self.locals}
        need = factorize(self.modulus) if self.modulus > 1 else {}
        if have != need:
            raise ConfigurationError(
                f"local components {have} do not cover the factorization {need} of {self.modulus}"
            )

    def angle(self, n: int) -> Fraction | None:
        if math.gcd(n, self.modulus) != 1:
            return None
        return sum((c.angle(n) for c in self.locals), Fraction(0)) % 1

    def __call__(self, n: int) -> complex | int:
        return char_eval(self, n)

    def is_trivial(self) -> bool:
        return all(c.is_trivial() for c in self.locals)

    def is_real(self) -> bool:
        return all(2 * r % 1 == 0 for c in self.locals for r in c.angles)

    def __mul__(self, other: "DirichletCharacterSpec") -> "DirichletCharacterSpec":
        mod = self.modulus * other.modulus // math.gcd(self.modulus, other.modulus)
        return character_from_function(mod, lambda n: _sum_angles(self.angle(n), other.angle(n)))

    def to_text(self) -> str:
        parts = []
        for c in self.locals:
            vals = ",".join(str(r) for r in c.angles)
            parts.append(f"{c.prime}^{c.exponent}={vals}")
        return f"{self.modulus}:" + ";".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "DirichletCharacterSpec":
        """Parse `<modulus>:<p>^<e>=<r1>,<r2>;...`; values are turns (r means exp(2 pi i r))."""
        try:
            mod_s, _, rest = text.strip().partition(":")
            modulus = int(mod_s)
            comps = []
            for part in filter(None, (s.strip() for s in rest.split(";"))):
                pe, _, vals = part.partition("=")
                p_s, _, e_s = pe.partition("^")
                angles = tuple(Fraction(v) for v in vals.split(",") if v.strip())
                comps.append(LocalCharacterSpec(int(p_s), int(e_s or 1), angles))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigurationError(f"malformed character spec {text!r}: {exc}") from exc
        if not rest.strip() and modulus > 1:
            return trivial_character(modulus)
        return cls(modulus, tuple(comps))


def _sum_angles(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    if a is None or b is None:
        return None
    return (a + b) % 1


def character_from_function(modulus, angle_of) -> DirichletCharacterSpec:
    """Build a spec mod `modulus` from a function n -> angle (a multiplicative
    character given on integers coprime to the modulus)."""
    comps = []
    for p, e in (factorize(modulus).items() if modulus > 1 else ()):
        pe = p ** e
        rest = modulus // pe
        angles = []
        for g, _ in _unit_generators(p, e):
            # lift g mod p^e to an integer that is 1 mod the rest of the modulus
            n = g % pe + pe * ((1 - g % pe) * pow(pe, -1, rest) % rest) if rest > 1 else g % pe
            angles.append(angle_of(n))
        comps.append(LocalCharacterSpec(p, e, tuple(angles)))
    return DirichletCharacterSpec(modulus, tuple(comps))


def trivial_character(modulus: int = 1) -> DirichletCharacterSpec:
    return character_from_function(modulus, lambda n: Fraction(0))


def quadratic_character(D: int) -> DirichletCharacterSpec:
    """The character n -> kronecker(D, n) for a fundamental discriminant D."""
    if not is_fundamental(D):
        raise ConfigurationError(f"{D} is not a fundamental discriminant")
    return character_from_function(
        abs(D), lambda n: Fraction(0) if kronecker(D, n) == 1 else Fraction(1, 2)
    )


def char_eval(chi: DirichletCharacterSpec, n: int) -> complex | int:
    """chi(n): exact +-1, +-i when possible, complex otherwise; 0 off the units."""
    r = chi.angle(n)
    if r is None:
        return 0
    return _angle_to_value(r)


def lcm(*ns: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), ns, 1)
