"""Numerical Petersson norms on SL2(Z) and Gamma0(4).

The norm is index-normalized: <f,f> = (1/[SL2(Z):G]) int_{G\\H} |f|^2 y^w dx dy / y^2,
computed as an average over coset representatives of integrals over the
standard fundamental domain of SL2(Z)."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import PrecisionError, PreconditionError
from .qseries import QExpansion, level4_generators, nullspace

# right coset representatives of Gamma0(4) in SL2(Z): infinity, 0 (width 4), 1/2
GAMMA0_4_COSETS = (
    (1, 0, 0, 1),
    (0, -1, 1, 0),
    (0, -1, 1, 1),
    (0, -1, 1, 2),
    (0, -1, 1, 3),
    (1, 0, 2, 1),
)


def _theta_series_reduced(label: np.ndarray, T: np.ndarray) -> np.ndarray:
    Q = np.exp(1j * np.pi * T)
    out = np.empty_like(T)
    s3 = np.ones_like(T)
    s4 = np.ones_like(T)
    s2 = np.zeros_like(T)
    for n in range(1, 10):
        qn = Q ** (n * n)
        s3 = s3 + 2 * qn
        s4 = s4 + 2 * (-1) ** n * qn
    for n in range(0, 10):
        s2 = s2 + Q ** (n * (n + 1))
    s2 = 2 * np.exp(1j * np.pi * T / 4) * s2
    out = np.where(label == 3, s3, np.where(label == 4, s4, s2))
    return out


def jacobi_theta(label: int, T) -> np.ndarray:
    """theta_2, theta_3 or theta_4 at nome exp(i pi T), Im T > 0.

    theta_3(T) = sum_n exp(i pi n^2 T). Arguments are first moved into the
    standard fundamental domain with T -> T + 1 and T -> -1/T."""
    T = np.array(T, dtype=complex, ndmin=1).copy()
    if np.any(T.imag <= 0):
        raise ValueError("theta needs Im T > 0")
    lab = np.full(T.shape, label, dtype=np.int64)
    fac = np.ones_like(T)
    for _ in range(500):
        n = np.round(T.real)
        T = T - n
        ni = n.astype(np.int64)
        is2 = lab == 2
        fac = np.where(is2, fac * np.exp(1j * np.pi * n / 4), fac)
        swap = (ni % 2 == 1) & ~is2
        lab = np.where(swap, 7 - lab, lab)
        small = np.abs(T) < 1 - 1e-13
        if not small.any():
            break
        Tp = -1 / T[small]
        fac[small] *= np.sqrt(-1j * Tp)
        l = lab[small]
        lab[small] = np.where(l == 3, 3, np.where(l == 4, 2, 4))
        T[small] = Tp
    else:
        raise RuntimeError("theta reduction did not terminate")
    return fac * _theta_series_reduced(lab, T)


def level4_decomposition(f: QExpansion) -> list[Fraction]:
    """Coefficients a_j with f = sum a_j theta^{2w-4j} F^j, checked on every
    available coefficient. Raises if f is not in that span."""
    w2 = 2 * f.weight
    if w2.denominator != 1 or w2 < 0:
        raise PreconditionError(f"weight {f.weight} is not a nonnegative half-integer")
    w2 = int(w2)
    gens = level4_generators(w2, f.precision)
    m = len(gens)
    # columns: generators and -f; a null vector with last entry 1 is a decomposition
    rows = [[g.coefficients[n] for g in gens] + [-f.coefficients[n]] for n in range(f.precision + 1)]
    null = nullspace(rows, m + 1)
    for v in null:
        if v[m] != 0:
            return [x / v[m] for x in v[:m]]
    raise PreconditionError("form is not in the span of theta^a F^b at its weight (level 4)")


class _Evaluator:
    def __init__(self, f: QExpansion, level: int, terms: int | None):
        self.f = f
        self.level = level
        self.w = float(f.weight)
        if level == 1:
            if f.weight.denominator != 1:
                raise PreconditionError("level 1 needs integral weight")
            P = f.precision if terms is None else min(terms, f.precision)
            self.coeffs = np.array([float(c) for c in f.coefficients[: P + 1]])
        elif level == 4:
            self.decomp = [float(a) for a in level4_decomposition(f)]
            self.w2 = int(2 * f.weight)
        else:
            raise PreconditionError(f"Petersson norm only implemented for levels 1 and 4, not {level}")

    def value(self, z: np.ndarray) -> np.ndarray:
        if self.level == 1:
            q = np.exp(2j * np.pi * z)
            total = np.zeros_like(z)
            for c in self.coeffs[::-1]:
                total = total * q + c
            return total
        th = jacobi_theta(3, 2 * z)
        th_half = jacobi_theta(4, 2 * z)
        F = (th ** 4 - th_half ** 4) / 16
        total = np.zeros_like(z)
        for j, a in enumerate(self.decomp):
            if a:
                total = total + a * th ** (self.w2 - 4 * j) * F ** j
        return total

    def integrand(self, z: np.ndarray) -> np.ndarray:
        """sum over cosets of |f(gamma z)|^2 Im(gamma z)^w / index (without dx dy / y^2)."""
        if self.level == 1:
            return np.abs(self.value(z)) ** 2 * z.imag ** self.w
        total = np.zeros(z.shape)
        for a, b, c, d in GAMMA0_4_COSETS:
            gz = (a * z + b) / (c * z + d)
            total += np.abs(self.value(gz)) ** 2 * gz.imag ** self.w
        return total / len(GAMMA0_4_COSETS)


def _domain_integral(ev: _Evaluator, nx: int, ny: int, tol: float, max_panels: int = 400) -> tuple[float, float]:
    """Integral over {|x| <= 1/2, |z| >= 1} by Gauss-Legendre panels of height 1 in y.

    Returns (value, tail estimate)."""
    gx, wx = np.polynomial.legendre.leggauss(nx)
    gy, wy = np.polynomial.legendre.leggauss(ny)
    x = 0.5 * gx  # nodes on [-1/2, 1/2]
    wxs = 0.5 * wx
    y0 = np.sqrt(1 - x * x)
    tx = 0.5 * (gy + 1)  # nodes on [0, 1]
    wys = 0.5 * wy
    X = x[:, None]
    total = 0.0
    prev = None
    tail = 0.0
    for j in range(max_panels):
        Y = y0[:, None] + j + tx[None, :]
        z = X + 1j * Y
        vals = ev.integrand(z) / Y ** 2
        contrib = float(np.sum(wxs[:, None] * wys[None, :] * vals))
        total += contrib
        if prev is not None and j > 3 and 0 <= contrib < 1e-3 * tol and contrib < 0.9 * prev:
            r = contrib / prev if prev > 0 else 0.0
            tail = contrib * r / (1 - r)
            return total + tail, tail
        prev = contrib
    raise PrecisionError("integrand did not decay within the panel budget")


def petersson_norm_numeric(
    f: QExpansion, group_level: int = 1, tol: float = 1e-10, terms: int | None = None
) -> float:
    """Index-normalized <f, f> for a cusp form on SL2(Z) (level 1) or Gamma0(4) (level 4).

    The absolute error estimate (difference between two quadrature orders
    plus the truncated tail) must not exceed tol, else PrecisionError."""
    if f.is_zero():
        return 0.0
    if f.coefficients[0] != 0:
        raise PreconditionError("Petersson norm needs a cusp form")
    ev = _Evaluator(f, group_level, terms)
    nx, ny = 16, 10
    last = None
    while nx <= 256:
        val, tail = _domain_integral(ev, nx, ny, tol)
        if last is not None and abs(val - last) + tail <= tol:
            return val
        last = val
        nx, ny = 2 * nx, 2 * ny
    raise PrecisionError(f"Petersson quadrature did not reach tolerance {tol:g}")
