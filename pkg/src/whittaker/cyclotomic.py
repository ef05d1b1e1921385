"""Exact arithmetic in rings of cyclotomic integers Z[zeta_m].

A value is stored in the group-algebra representation Z[x]/(x^m - 1): a
length-m integer vector whose j-th entry is the coefficient of zeta^j.
Sums of roots of unity (character sums) are then plain exponent counters,
addition is vector addition and multiplication is cyclic convolution, all
exact.  Two vectors represent the same algebraic number iff their
difference is divisible by the m-th cyclotomic polynomial Phi_m, which is
an exact integer polynomial division.

Rational (Galois-invariant) values are extracted through the trace map:
Tr(zeta_m^j) = mu(t) * phi(m) / phi(t) with t = m / gcd(j, m).  For prime
powers m = p^k this reduces to phi(m) for j = 0, -p^(k-1) when zeta^j has
order p, and 0 otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np


class NonRationalError(ValueError):
    """Raised when a rational value is requested from a non-rational number."""


def euler_phi(m: int) -> int:
    result = m
    d = 2
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            result -= result // d
        d += 1
    if m > 1:
        result -= result // m
    return result


def moebius(m: int) -> int:
    if m == 1:
        return 1
    sign = 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            sign = -sign
        d += 1
    if m > 1:
        sign = -sign
    return sign


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials; den must be monic-led and divide num."""
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        q, r = divmod(num[i], lead)
        if r != 0:
            raise ArithmeticError("non-exact polynomial division")
        out[i - dn] = q
        if q:
            for j, c in enumerate(den):
                num[i - dn + j] -= q * c
    if any(num):
        raise ArithmeticError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the m-th cyclotomic polynomial."""
    if m == 1:
        return (-1, 1)
    num = [0] * (m + 1)
    num[0], num[m] = -1, 1
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divexact(num, list(cyclotomic_poly(d)))
    return tuple(num)


@lru_cache(maxsize=None)
def _trace_table(m: int) -> tuple[int, ...]:
    """Tr(zeta_m^j) for j = 0..m-1."""
    phim = euler_phi(m)
    out = []
    for j in range(m):
        t = m // gcd(j, m)
        out.append(moebius(t) * phim // euler_phi(t))
    return tuple(out)


class CycloNum:
    """An element of Z[zeta_m], immutable, with exact ring operations."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs=None):
        if m < 1:
            raise ValueError("m must be positive")
        self.m = m
        if coeffs is None:
            self.coeffs = (0,) * m
        else:
            coeffs = tuple(int(c) for c in coeffs)
            if len(coeffs) != m:
                raise ValueError("coefficient vector must have length m")
            self.coeffs = coeffs

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(m: int) -> "CycloNum":
        return CycloNum(m)

    @staticmethod
    def integer(m: int, value: int) -> "CycloNum":
        c = [0] * m
        c[0] = int(value)
        return CycloNum(m, c)

    @staticmethod
    def from_counter(m: int, counter) -> "CycloNum":
        """Build sum_j counter[j] * zeta^j from an exponent-count vector."""
        return CycloNum(m, list(counter))

    def vector(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "CycloNum"):
        if not isinstance(other, CycloNum):
            raise TypeError("expected CycloNum")
        if other.m != self.m:
            raise ValueError(f"mixed cyclotomic orders {self.m} and {other.m}")

    def __add__(self, other: "CycloNum") -> "CycloNum":
        self._check(other)
        return CycloNum(self.m, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "CycloNum") -> "CycloNum":
        self._check(other)
        return CycloNum(self.m, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "CycloNum":
        return CycloNum(self.m, [-a for a in self.coeffs])

    def __mul__(self, other) -> "CycloNum":
        if isinstance(other, int):
            return CycloNum(self.m, [a * other for a in self.coeffs])
        self._check(other)
        m = self.m
        out = [0] * m
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    k = i + j
                    if k >= m:
                        k -= m
                    out[k] += a * b
        return CycloNum(m, out)

    __rmul__ = __mul__

    def conj(self) -> "CycloNum":
        """Complex conjugation, zeta^j -> zeta^(-j)."""
        m = self.m
        return CycloNum(m, [self.coeffs[(-j) % m] for j in range(m)])

    def norm_squared(self) -> "CycloNum":
        return self * self.conj()

    # -- identity tests ----------------------------------------------------

    def is_zero(self) -> bool:
        """True iff the represented algebraic number is 0 (reduction mod Phi_m)."""
        if not any(self.coeffs):
            return True
        phi = list(cyclotomic_poly(self.m))
        rem = list(self.coeffs)
        dn = len(phi) - 1
        for i in range(len(rem) - 1, dn - 1, -1):
            q = rem[i]  # Phi_m is monic
            if q:
                for j, c in enumerate(phi):
                    rem[i - dn + j] -= q * c
        return not any(rem)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return (self - CycloNum.integer(self.m, other)).is_zero()
        if not isinstance(other, CycloNum) or other.m != self.m:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("CycloNum is not hashable (equality is up to Phi_m)")

    def __repr__(self):
        terms = [f"{c}*z{self.m}^{j}" for j, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"

    # -- rational extraction ------------------------------------------------

    def trace(self) -> int:
        tr = _trace_table(self.m)
        return sum(c * t for c, t in zip(self.coeffs, tr))

    def rational_value(self) -> Fraction:
        """Exact rational value; raises NonRationalError for non-rational input."""
        phim = euler_phi(self.m)
        cand = Fraction(self.trace(), phim)
        # z is rational iff phi(m)*z - Tr(z) vanishes in Z[zeta_m]
        scaled = [phim * c for c in self.coeffs]
        scaled[0] -= self.trace()
        if not CycloNum(self.m, scaled).is_zero():
            raise NonRationalError("value is not Galois-invariant")
        return cand

    def integer_value(self) -> int:
        val = self.rational_value()
        if val.denominator != 1:
            raise NonRationalError(f"value {val} is not an integer")
        return val.numerator

    def complex_value(self) -> complex:
        """Floating approximation, for diagnostics only."""
        ang = 2j * np.pi / self.m
        return complex(sum(c * np.exp(ang * j) for j, c in enumerate(self.coeffs)))


def root_of_unity(m: int, j: int) -> CycloNum:
    """zeta_m^j as a CycloNum."""
    c = [0] * m
    c[j % m] = 1
    return CycloNum(m, c)


def rational_value(z: CycloNum) -> Fraction:
    return z.rational_value()


def counter_rational(m: int, counter) -> Fraction:
    """rational_value of an exponent-counter without materialising a CycloNum."""
    return CycloNum.from_counter(m, counter).rational_value()
