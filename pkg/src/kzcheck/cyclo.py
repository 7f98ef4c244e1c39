"""Exact arithmetic in Q(zeta_{2^M}) and polynomials over it.

Elements are sparse maps exponent -> rational in the basis 1, z, ..., z^{H-1}
with z = exp(2 pi i / 2^M) and H = 2^{M-1}, reduced with z^H = -1."""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Mapping

ORDER = 2 ** 8  # enough for every root of unity appearing in the 2-adic sums
HALF = ORDER // 2


class Cyclo:
    __slots__ = ("c",)

    def __init__(self, coeffs: Mapping[int, Fraction] | None = None):
        self.c: dict[int, Fraction] = {}
        for e, v in (coeffs or {}).items():
            self._acc(e, Fraction(v))

    def _acc(self, e: int, v: Fraction) -> None:
        e %= ORDER
        if e >= HALF:
            e -= HALF
            v = -v
        nv = self.c.get(e, Fraction(0)) + v
        if nv:
            self.c[e] = nv
        else:
            self.c.pop(e, None)

    @classmethod
    def root(cls, num: int, den: int = ORDER) -> "Cyclo":
        """exp(2 pi i num / den) for den dividing ORDER."""
        if ORDER % den:
            raise ValueError(f"root of unity of order {den} not available")
        return cls({num * (ORDER // den): Fraction(1)})

    @classmethod
    def of(cls, x) -> "Cyclo":
        if isinstance(x, Cyclo):
            return x
        return cls({0: Fraction(x)})

    def __add__(self, other) -> "Cyclo":
        other = Cyclo.of(other)
        out = Cyclo(self.c)
        for e, v in other.c.items():
            out._acc(e, v)
        return out

    __radd__ = __add__

    def __neg__(self) -> "Cyclo":
        return Cyclo({e: -v for e, v in self.c.items()})

    def __sub__(self, other) -> "Cyclo":
        return self + (-Cyclo.of(other))

    def __rsub__(self, other) -> "Cyclo":
        return Cyclo.of(other) - self

    def __mul__(self, other) -> "Cyclo":
        if not isinstance(other, Cyclo):
            f = Fraction(other)
            return Cyclo({e: v * f for e, v in self.c.items()})
        out = Cyclo()
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                out._acc(e1 + e2, v1 * v2)
        return out

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Cyclo":
        f = Fraction(other)
        return Cyclo({e: v / f for e, v in self.c.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclo.of(other)
        if not isinstance(other, Cyclo):
            return NotImplemented
        return self.c == other.c

    def __hash__(self) -> int:
        return hash(frozenset(self.c.items()))

    def is_zero(self) -> bool:
        return not self.c

    def conj(self) -> "Cyclo":
        return Cyclo({-e: v for e, v in self.c.items()})

    def __complex__(self) -> complex:
        return complex(sum(float(v) * cmath.exp(2j * math.pi * e / ORDER) for e, v in self.c.items()))

    def __repr__(self) -> str:
        return f"Cyclo({complex(self):.12g})"


I = Cyclo.root(1, 4)
SQRT2 = Cyclo.root(1, 8) + Cyclo.root(-1, 8)
ZERO = Cyclo()
ONE = Cyclo.of(1)


class MuPoly:
    """Polynomial sum_l a_l mu^l with Cyclo coefficients (mu = mu(2), |mu| = 1)."""

    __slots__ = ("t",)

    def __init__(self, terms: Mapping[int, Cyclo] | None = None):
        self.t: dict[int, Cyclo] = {}
        for l, a in (terms or {}).items():
            self._acc(l, Cyclo.of(a))

    def _acc(self, l: int, a: Cyclo) -> None:
        nv = self.t.get(l, ZERO) + a
        if nv.is_zero():
            self.t.pop(l, None)
        else:
            self.t[l] = nv

    @classmethod
    def monomial(cls, l: int, a=1) -> "MuPoly":
        return cls({l: Cyclo.of(a)})

    def __add__(self, other: "MuPoly") -> "MuPoly":
        out = MuPoly(self.t)
        for l, a in other.t.items():
            out._acc(l, a)
        return out

    def __sub__(self, other: "MuPoly") -> "MuPoly":
        return self + other.scale(-1)

    def scale(self, a) -> "MuPoly":
        return MuPoly({l: v * Cyclo.of(a) for l, v in self.t.items()})

    def __mul__(self, other: "MuPoly") -> "MuPoly":
        out = MuPoly()
        for l1, a1 in self.t.items():
            for l2, a2 in other.t.items():
                out._acc(l1 + l2, a1 * a2)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, MuPoly):
            return NotImplemented
        return self.t == other.t

    def is_zero(self) -> bool:
        return not self.t

    def __call__(self, mu: complex) -> complex:
        return sum((complex(a) * mu ** l for l, a in self.t.items()), 0j)

    def __repr__(self) -> str:
        return "MuPoly(" + " + ".join(f"({complex(a):.6g}) mu^{l}" for l, a in sorted(self.t.items())) + ")"
